#include <gtest/gtest.h>

#include <thread>

#include <nlohmann/json.hpp>

#include "ary/review.hpp"
#include "support.hpp"

using namespace ary;
using testing_support::read_file;
using testing_support::TempDir;
using testing_support::write_file;

namespace {

NormalizationDictionary fixture_dict() {
  std::vector<CandidatePair> p;
  for (auto [t, c] : std::vector<std::pair<const char*, const char*>>{{"chokran", "choukran"},
                                                                     {"chkon", "chkoun"},
                                                                     {"7amad", "7amd"},
                                                                     {"7amad", "7amed"},
                                                                     {"wqaaf", "wqef"}})
    p.push_back({t, c, 0.8, 1.0, {"skipgram"}});
  return NormalizationDictionary(p);
}

Lexicon fixture_lexicon() {
  return Lexicon({{"choukran"}, {"chkoun"}, {"7amd"}, {"7amed"}, {"wqef"}, {"bzaf"}});
}

ReviewState fixture_state() {
  return ReviewState(std::make_shared<NormalizationDictionary>(fixture_dict()),
                     std::make_shared<Lexicon>(fixture_lexicon()));
}

ReviewDecision dec(const char* t, const char* c, Verdict v, std::optional<std::string> chosen = std::nullopt,
                   std::string ts = "2024-01-01T00:00:00.000Z") {
  return {{t, c}, v, std::move(chosen), "r1", std::move(ts)};
}

DecisionRequest req(const char* t, const char* c, Verdict v, std::optional<std::string> chosen = std::nullopt) {
  return {{t, c}, v, std::move(chosen), "r1"};
}

std::string fixed_clock() { return "2024-05-01T12:00:00.000Z"; }

}  // namespace

TEST(ReviewState, FreshLoadAllPending) {
  const auto s = fixture_state();
  const auto st = s.stats();
  EXPECT_EQ(st.total, 5u);
  EXPECT_EQ(st.pending, 5u);
  EXPECT_FALSE(st.running_precision.has_value());
  EXPECT_EQ(s.page(std::nullopt, 0, 100).items.size(), 5u);
  EXPECT_EQ(s.page(PairStatus::accepted, 0, 100).total, 0u);
  EXPECT_EQ(s.export_reference().size(), 0u);
}

TEST(ReviewState, PagingConflictsFirst) {
  const auto s = fixture_state();
  const auto all = s.page(std::nullopt, 0, 100);
  ASSERT_EQ(all.items.size(), 5u);
  EXPECT_EQ(all.items[0].pair->translit, "7amad");
  EXPECT_EQ(all.items[0].pair->canonical, "7amd");
  EXPECT_EQ(all.items[0].conflict_set, std::vector<std::string>{"7amed"});
  EXPECT_EQ(all.items[1].pair->canonical, "7amed");
  EXPECT_EQ(all.items[2].pair->translit, "chkon");
  EXPECT_TRUE(all.items[2].conflict_set.empty());
  EXPECT_EQ(all.items[4].pair->translit, "wqaaf");

  const auto p = s.page(std::nullopt, 0, 2);
  EXPECT_EQ(p.total, 5u);
  EXPECT_EQ(p.items.size(), 2u);
  const auto q = s.page(std::nullopt, 4, 2);
  EXPECT_EQ(q.items.size(), 1u);
  EXPECT_EQ(q.items[0].pair->translit, "wqaaf");
  EXPECT_TRUE(s.page(std::nullopt, 9, 2).items.empty());
}

TEST(ReviewState, LifecycleAndSupersession) {
  auto s = fixture_state();
  s.apply(dec("chokran", "choukran", Verdict::accept));
  EXPECT_EQ(s.status({"chokran", "choukran"}), PairStatus::accepted);
  s.apply(dec("chokran", "choukran", Verdict::reject));
  EXPECT_EQ(s.status({"chokran", "choukran"}), PairStatus::rejected);
  EXPECT_EQ(s.effective({"chokran", "choukran"})->verdict, Verdict::reject);
  EXPECT_EQ(s.effective({"chkon", "chkoun"}), nullptr);

  s.apply(dec("7amad", "7amd", Verdict::remap, "7amed"));
  EXPECT_EQ(s.status({"7amad", "7amd"}), PairStatus::remapped);
  const auto ex = s.export_reference();
  EXPECT_TRUE(ex.contains("7amad", "7amed"));
  EXPECT_FALSE(ex.contains("7amad", "7amd"));
  EXPECT_FALSE(ex.contains("chokran", "choukran"));

  const auto st = s.stats();
  EXPECT_EQ(st.rejected, 1u);
  EXPECT_EQ(st.remapped, 1u);
  EXPECT_EQ(st.pending, 3u);
  EXPECT_EQ(*st.running_precision, 0.5);
}

TEST(ReviewState, ValidationLeavesStateUntouched) {
  auto s = fixture_state();
  EXPECT_THROW(s.apply(dec("nope", "choukran", Verdict::accept)), UnknownPair);
  EXPECT_THROW(s.apply(dec("chokran", "chkoun", Verdict::accept)), UnknownPair);
  EXPECT_THROW(s.apply(dec("7amad", "7amd", Verdict::remap)), InvalidDecision);
  EXPECT_THROW(s.apply(dec("7amad", "7amd", Verdict::remap, "7amd")), InvalidDecision);
  EXPECT_THROW(s.apply(dec("7amad", "7amd", Verdict::remap, "7amid")), InvalidDecision);
  EXPECT_THROW(s.apply(dec("7amad", "7amd", Verdict::accept, "7amed")), InvalidDecision);
  EXPECT_EQ(s.stats().pending, 5u);
}

TEST(ReviewState, ExportCountsAndOrdering) {
  auto s = fixture_state();
  s.apply(dec("wqaaf", "wqef", Verdict::accept));
  s.apply(dec("chokran", "choukran", Verdict::accept));
  s.apply(dec("chkon", "chkoun", Verdict::accept));
  s.apply(dec("7amad", "7amd", Verdict::reject));
  const auto ex = s.export_reference();
  EXPECT_EQ(ex.size(), 3u);
  const auto st = s.stats();
  EXPECT_EQ(ex.size(), st.accepted + st.remapped);
  EXPECT_EQ(format_reference(ex), "translit\tcanonical\nchkon\tchkoun\nchokran\tchoukran\nwqaaf\twqef\n");
  EXPECT_EQ(s.page(PairStatus::pending, 0, 10).total, 1u);
  EXPECT_EQ(s.page(PairStatus::accepted, 0, 10).total, 3u);
  EXPECT_EQ(s.page(PairStatus::rejected, 0, 10).items[0].pair->canonical, "7amd");
}

TEST(ReviewState, RunningPrecisionFromCounts) {
  std::vector<CandidatePair> pairs;
  for (int i = 0; i < 3057; ++i) {
    std::string t = "t";
    for (int n = i; n > 0; n /= 26) t += static_cast<char>('a' + n % 26);
    pairs.push_back({t, "c", 0.5, 1.0, {"m"}});
  }
  const auto dict = std::make_shared<NormalizationDictionary>(pairs);
  ASSERT_EQ(dict->size(), 3057u);
  ReviewState s(dict, std::make_shared<Lexicon>(Lexicon({{"c"}})));
  for (std::size_t i = 0; i < dict->size(); ++i) {
    const auto& p = dict->pairs()[i];
    s.apply({{p.translit, p.canonical}, i < 2225 ? Verdict::accept : Verdict::reject, std::nullopt, "r", "t"});
  }
  const auto st = s.stats();
  EXPECT_EQ(st.accepted, 2225u);
  EXPECT_EQ(st.rejected, 832u);
  EXPECT_NEAR(*st.running_precision, 0.728, 5e-4);
  EXPECT_EQ(*st.running_precision, 2225.0 / 3057.0);

  ReviewState none(dict, std::make_shared<Lexicon>(Lexicon({{"c"}})));
  for (const auto& p : dict->pairs()) none.apply({{p.translit, p.canonical}, Verdict::reject, std::nullopt, "r", "t"});
  EXPECT_EQ(*none.stats().running_precision, 0.0);
}

TEST(ReviewState, StatusesPartitionPairs) {
  auto s = fixture_state();
  s.apply(dec("wqaaf", "wqef", Verdict::accept));
  s.apply(dec("7amad", "7amed", Verdict::reject));
  s.apply(dec("7amad", "7amd", Verdict::remap, "7amed"));
  const auto st = s.stats();
  EXPECT_EQ(st.pending + st.accepted + st.rejected + st.remapped, st.total);
  std::size_t seen = 0;
  for (auto f : {PairStatus::pending, PairStatus::accepted, PairStatus::rejected, PairStatus::remapped})
    seen += s.page(f, 0, 100).total;
  EXPECT_EQ(seen, st.total);
}

TEST(DecisionJson, RoundTripAndErrors) {
  const auto d = dec("7amad", "7amd", Verdict::remap, "7amed");
  EXPECT_EQ(decision_from_json(to_json(d)), d);
  const auto a = dec("chkon", "chkoun", Verdict::accept);
  EXPECT_EQ(decision_from_json(to_json(a)), a);
  EXPECT_FALSE(to_json(a).contains("chosen_canonical") && !to_json(a)["chosen_canonical"].is_null());
  EXPECT_THROW(decision_from_json(nlohmann::json::parse(R"({"verdict":"accept","reviewer":"r"})")), ParseError);
  EXPECT_THROW(decision_from_json(nlohmann::json::parse(
                   R"({"pair":{"translit":"a","canonical":"b"},"verdict":"maybe","reviewer":"r"})")),
               ParseError);
  EXPECT_THROW(decision_from_json(nlohmann::json::parse(R"({"pair":{"translit":1,"canonical":"b"},"verdict":"accept","reviewer":"r"})")),
               ParseError);
  EXPECT_THROW(decision_from_json(nlohmann::json::array()), ParseError);
}

TEST(ReviewService, AppendsAndReplaysLog) {
  TempDir dir;
  const auto log = dir / "decisions.jsonl";
  std::string export_before;
  {
    ReviewService svc(fixture_dict(), fixture_lexicon(), Corpus{}, log, fixed_clock);
    const auto d = svc.record(req("chokran", "choukran", Verdict::accept));
    EXPECT_EQ(d.timestamp, "2024-05-01T12:00:00.000Z");
    svc.record(req("7amad", "7amd", Verdict::remap, "7amed"));
    svc.record(req("wqaaf", "wqef", Verdict::reject));
    svc.record(req("wqaaf", "wqef", Verdict::accept));
    EXPECT_THROW(svc.record(req("nope", "x", Verdict::accept)), UnknownPair);
    EXPECT_THROW(svc.record(req("7amad", "7amed", Verdict::remap, "zzz")), InvalidDecision);
    EXPECT_EQ(svc.log().size(), 4u);
    export_before = format_reference(svc.snapshot()->export_reference());
  }
  const auto body = read_file(log);
  EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 4);
  EXPECT_EQ(read_decision_log(log).size(), 4u);

  ReviewService again(fixture_dict(), fixture_lexicon(), Corpus{}, log, fixed_clock);
  const auto snap = again.snapshot();
  EXPECT_EQ(snap->status({"chokran", "choukran"}), PairStatus::accepted);
  EXPECT_EQ(snap->status({"7amad", "7amd"}), PairStatus::remapped);
  EXPECT_EQ(snap->status({"wqaaf", "wqef"}), PairStatus::accepted);
  EXPECT_EQ(format_reference(snap->export_reference()), export_before);
  EXPECT_EQ(again.log().size(), 4u);
  again.record(req("chkon", "chkoun", Verdict::accept));
  EXPECT_EQ(read_decision_log(log).size(), 5u);
}

TEST(ReviewService, TornFinalLineIgnoredAndTruncated) {
  TempDir dir;
  const auto log = dir / "decisions.jsonl";
  {
    ReviewService svc(fixture_dict(), fixture_lexicon(), Corpus{}, log, fixed_clock);
    svc.record(req("chokran", "choukran", Verdict::accept));
  }
  const auto good = read_file(log);
  write_file(log, good + R"({"pair":{"translit":"chkon","canon)");
  EXPECT_EQ(read_decision_log(log).size(), 1u);
  {
    ReviewService svc(fixture_dict(), fixture_lexicon(), Corpus{}, log, fixed_clock);
    EXPECT_EQ(svc.snapshot()->stats().accepted, 1u);
    EXPECT_EQ(read_file(log), good);
    svc.record(req("chkon", "chkoun", Verdict::reject));
  }
  const auto entries = read_decision_log(log);
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[1].pair.translit, "chkon");
}

TEST(ReviewService, CorruptLogRejected) {
  TempDir dir;
  const auto log = dir / "decisions.jsonl";
  write_file(log, "garbage\n" + to_json(dec("chkon", "chkoun", Verdict::accept)).dump() + "\n");
  EXPECT_THROW(read_decision_log(log), ParseError);
  EXPECT_THROW(ReviewService(fixture_dict(), fixture_lexicon(), Corpus{}, log), Error);
  write_file(log, to_json(dec("other", "pair", Verdict::accept)).dump() + "\n");
  EXPECT_THROW(ReviewService(fixture_dict(), fixture_lexicon(), Corpus{}, log), Error);
}

TEST(ReviewService, ConcurrentReviewersAllLogged) {
  TempDir dir;
  const auto log = dir / "decisions.jsonl";
  ReviewService svc(fixture_dict(), fixture_lexicon(), Corpus{}, log);
  const std::vector<PairKey> keys{{"chokran", "choukran"}, {"chkon", "chkoun"}, {"7amad", "7amd"},
                                  {"7amad", "7amed"}, {"wqaaf", "wqef"}};
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t)
    threads.emplace_back([&, t] {
      for (int i = 0; i < 25; ++i) {
        const auto& k = keys[static_cast<std::size_t>(i + t) % keys.size()];
        svc.record({k, i % 2 ? Verdict::accept : Verdict::reject, std::nullopt, "r" + std::to_string(t)});
        (void)svc.snapshot()->stats();
      }
    });
  for (auto& th : threads) th.join();
  const auto entries = read_decision_log(log);
  EXPECT_EQ(entries.size(), 100u);
  EXPECT_EQ(svc.log(), entries);
  // the live state equals a replay of the log
  ReviewService replay(fixture_dict(), fixture_lexicon(), Corpus{}, log);
  for (const auto& k : keys) EXPECT_EQ(replay.snapshot()->status(k), svc.snapshot()->status(k));
  EXPECT_EQ(format_reference(replay.snapshot()->export_reference()),
            format_reference(svc.snapshot()->export_reference()));
}

TEST(ReviewService, Timestamps) {
  const auto ts = utc_now_iso8601();
  ASSERT_EQ(ts.size(), 24u);
  EXPECT_EQ(ts[10], 'T');
  EXPECT_EQ(ts.back(), 'Z');
}

TEST(Guidelines, MentionLemmaRules) {
  const std::string g(review_guidelines());
  EXPECT_NE(g.find("third person"), std::string::npos);
  EXPECT_NE(g.find("masculine singular"), std::string::npos);
}

TEST(Enums, Names) {
  for (auto v : {Verdict::accept, Verdict::reject, Verdict::remap}) EXPECT_EQ(parse_verdict(to_string(v)), v);
  for (auto s : {PairStatus::pending, PairStatus::accepted, PairStatus::rejected, PairStatus::remapped})
    EXPECT_EQ(parse_status(to_string(s)), s);
  EXPECT_FALSE(parse_status("done"));
}
