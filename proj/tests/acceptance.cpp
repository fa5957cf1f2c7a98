// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ary/builder.hpp"
#include "ary/corpus.hpp"
#include "ary/embeddings.hpp"
#include "ary/evaluate.hpp"
#include "ary/lexicon.hpp"
#include "ary/review.hpp"
#include "ary/review_server.hpp"
#include "ary/simscore.hpp"
#include "ary/synth.hpp"
#include "ary/text.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ary;
using nlohmann::json;
using testing_support::read_file;
using testing_support::TempDir;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  std::vector<std::string> failures;
  std::size_t failed = 0;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (++failed <= 8) failures.push_back(what);
  }
};

struct Criterion {
  std::string name;
  std::optional<double> limit_seconds;
  std::function<void(Check&)> body;
};

std::string pair_str(const std::string& a, const std::string& b) { return "(" + a + ", " + b + ")"; }

// -- string metrics ---------------------------------------------------------

void compare_metrics(Check& c, const std::string& a, const std::string& b) {
  const auto ctx = " on " + pair_str(a, b);
  c.expect(edit_distance(a, b) == oracle::edit_distance(a, b), "edit_distance" + ctx);
  c.expect(lcs_length(a, b) == oracle::lcs_length(a, b), "lcs_length" + ctx);
  if (a.empty() && b.empty()) return;
  c.expect(lcsr(a, b) == oracle::lcsr(a, b), "lcsr" + ctx);
  c.expect(lexim(a, b) == oracle::lexim(a, b), "lexim" + ctx);
  c.expect(seq_ratio(a, b) == oracle::seq_ratio(a, b), "seq_ratio" + ctx);
}

void string_oracle(Check& c) {
  const auto all = oracle::all_strings("abc", 5);
  for (const auto& a : all)
    for (const auto& b : all) compare_metrics(c, a, b);
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 10000; ++i) {
    const auto a = testing_support::random_string(rng, "abcdefgh", 0, 12);
    const auto b = testing_support::random_string(rng, "abcdefgh", 0, 12);
    compare_metrics(c, a, b);
  }
}

void anchored_string_cases(Check& c) {
  // lcs 7, max length 8, one insertion: 7/8 / 1
  c.expect(lexim("chokran", "chokrane") == 0.875, "lexim(chokran, chokrane) != 0.875");
  c.expect(lexim("chokran", "chokrane") == oracle::lexim("chokran", "chokrane"), "lexim disagrees with oracle");
  c.expect(skeletonize("allah") == "lh", "skeletonize(allah) = " + skeletonize("allah"));
  c.expect(skeletonize("alah") == "lh", "skeletonize(alah) = " + skeletonize("alah"));
  c.expect(ma_soundex("chokran") == ma_soundex("chokrane"),
           "soundex codes differ: " + ma_soundex("chokran") + " vs " + ma_soundex("chokrane"));
  const auto a = ma_soundex("chokran"), b = ma_soundex("khokran");
  const double r = seq_ratio(a, b);
  c.expect(r == 0.8, "seq_ratio(" + a + ", " + b + ") = " + format_double(r));
  c.expect(r == oracle::seq_ratio(a, b), "soundex seq_ratio disagrees with oracle");
  c.expect(ScoreMethod{}.accepts(r), "0.8 not accepted at the default threshold");
  c.expect(score("chokran", "khokran", ScoreKind::seqmatch_soundex) == r, "seqmatch_soundex dispatch");
}

// -- preprocessing ----------------------------------------------------------

void preprocessing_golden(Check& c) {
  const CleanConfig cfg;
  std::size_t rows = 0;
  std::set<char> digits_seen;
  for (const auto& line : split(read_file(std::string(ARY_TEST_DATA) + "/golden_tokens.tsv"), '\n')) {
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 2) {
      c.expect(false, "malformed golden row: " + line);
      continue;
    }
    ++rows;
    for (char ch : f[0])
      if (ch >= '0' && ch <= '9') digits_seen.insert(ch);
    c.expect(clean_token(f[0], cfg) == f[1], "clean_token(" + f[0] + ") = " + clean_token(f[0], cfg));
    c.expect(collapse_runs(collapse_runs(f[0])) == collapse_runs(f[0]), "collapse_runs not stable on " + f[0]);
  }
  c.expect(rows == 50, "golden fixture has " + std::to_string(rows) + " rows");
  for (char d : std::string("2345678 9"))
    if (d != ' ') c.expect(digits_seen.count(d) == 1, std::string("digit ") + d + " not exercised");
  for (auto [raw, want] : std::vector<std::pair<const char*, const char*>>{
           {"9", "q"}, {"5", "kh"}, {"x", "kh"}, {"2", "a"}, {"6", "t"}, {"4", "gh"}, {"8", "gh"}, {"3", "3"}, {"7", "7"}}) {
    const auto got = clean_token(std::string("b") + raw + "b", cfg);
    c.expect(got == std::string("b") + want + "b", std::string("substitution ") + raw + " gave " + got);
  }

  const auto raw = read_comments(std::string(ARY_TEST_DATA) + "/golden_comments.txt");
  const auto expected = read_file(std::string(ARY_TEST_DATA) + "/golden_corpus.txt");
  TempDir dir;
  for (unsigned threads : {1u, 1u, 4u}) {
    CleanConfig cc;
    cc.threads = threads;
    write_corpus(clean_corpus(raw, cc), dir / "corpus.txt");
    c.expect(read_file(dir / "corpus.txt") == expected,
             "clean_corpus output differs from golden file (threads " + std::to_string(threads) + ")");
  }
}

// -- gradient check ---------------------------------------------------------

void gradient_check(Check& c) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 0.5);
  sgns::Weights w;
  w.dim = 16;
  const int words = 40, buckets = 30;
  w.input.resize(static_cast<std::size_t>((words + buckets) * w.dim));
  w.output.resize(static_cast<std::size_t>(words * w.dim));
  for (auto& x : w.input) x = n(rng);
  for (auto& x : w.output) x = n(rng);

  const std::vector<std::pair<std::string, sgns::Example>> batch{
      {"skipgram", {{3}, 17, {1, 5, 22, 30, 39}}},
      {"cbow", {{0, 2, 4, 6, 8, 10}, 12, {13, 14, 15, 16, 17}}},
      {"subword", {{9, 41, 47, 52, 66}, 20, {2, 11, 25, 33, 38}}},
      {"repeated rows", {{5, 5, 44, 44}, 5, {5, 7, 7}}},
  };
  const double h = 1e-6;
  double worst = 0;
  for (const auto& [name, ex] : batch) {
    sgns::Gradients g;
    const double l = sgns::compute_gradients(w, ex, g);
    c.expect(std::abs(l - sgns::loss(w, ex)) < 1e-12, name + ": loss mismatch");
    auto check = [&](std::vector<double>& params, const std::vector<std::int32_t>& rows,
                     const std::vector<double>& grads, const char* which) {
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (int d = 0; d < w.dim; ++d) {
          double& p = params[static_cast<std::size_t>(rows[r] * w.dim + d)];
          const double saved = p;
          p = saved + h;
          const double up = sgns::loss(w, ex);
          p = saved - h;
          const double down = sgns::loss(w, ex);
          p = saved;
          const double numeric = (up - down) / (2 * h);
          const double analytic = grads[r * static_cast<std::size_t>(w.dim) + static_cast<std::size_t>(d)];
          const double scale = std::max(std::abs(numeric), std::abs(analytic));
          if (scale > 1e-6) {
            const double rel = std::abs(numeric - analytic) / scale;
            worst = std::max(worst, rel);
            c.expect(rel < 1e-4, name + " " + which + " row " + std::to_string(rows[r]) + " rel " + format_double(rel));
          } else {
            c.expect(std::abs(numeric - analytic) < 1e-9, name + " " + which + " near-zero gradient mismatch");
          }
        }
    };
    check(w.input, g.input_rows, g.input, "input");
    check(w.output, g.output_rows, g.output, "output");
  }
  std::cout << "  worst relative error " << worst << "\n";
}

// -- synthetic reproduction -------------------------------------------------

constexpr std::uint64_t kSynthSeed = 1;
constexpr std::uint64_t kTrainSeed = 11;

struct SynthRun {
  SynthCorpus synth;
  Corpus corpus;
  std::vector<VectorModel> models;      // skipgram first
  std::vector<NeighborTable> tables;    // parallel to models
  NormalizationDictionary dict;         // skip-gram build at 0.70
};

SynthRun& synth_run() {
  static SynthRun run;
  return run;
}

TrainConfig synth_train_config(Algorithm a) {
  TrainConfig tc;
  tc.algorithm = a;
  tc.epochs = 20;
  tc.seed = kTrainSeed;
  tc.threads = 1;
  return tc;
}

NeighborTable table_for(const VectorModel& m, const Lexicon& lex) {
  return neighbor_table(m, lex, 20, false, 1);
}

void synthetic_reproduction(Check& c) {
  auto& run = synth_run();
  SynthConfig sc;
  sc.seed = kSynthSeed;
  run.synth = generate_synthetic(sc);
  CleanConfig cc;
  cc.threads = 1;
  run.corpus = clean_corpus(run.synth.comments, cc);
  run.models.push_back(train(run.corpus, synth_train_config(Algorithm::skipgram), "skipgram"));
  run.tables.push_back(table_for(run.models[0], run.synth.lexicon));
  run.dict = build_from_tables(run.tables, run.synth.lexicon, ScoreMethod{ScoreKind::seqmatch_skeleton, 0.70});

  const auto& s = run.synth;
  std::map<std::string, std::size_t> per_group;
  for (const auto& v : s.variants) ++per_group[v.canonical];
  c.expect(s.canonicals.size() == 40, "canonicals: " + std::to_string(s.canonicals.size()));
  c.expect(s.distractors.size() == 40, "distractors: " + std::to_string(s.distractors.size()));
  for (const auto& [canon, n] : per_group)
    c.expect(n >= 3 && n <= 8, canon + " has " + std::to_string(n) + " variants");
  for (const auto& d : s.distractors)
    for (const auto& canon : s.canonicals)
      c.expect(score(d, canon, ScoreKind::seqmatch_skeleton) < 0.5, "distractor " + d + " close to " + canon);

  std::size_t subset = 0, found = 0;
  for (const auto& v : s.variants) {
    if (!v.skeleton_equal || v.count < 2) continue;
    ++subset;
    const bool hit = run.dict.find(v.form, v.canonical) != nullptr;
    found += hit;
    c.expect(hit, "missing planted variant " + pair_str(v.form, v.canonical));
  }
  c.expect(subset > 0, "empty skeleton-equal subset");
  const auto p = precision(run.dict, s.reference);
  c.expect(p.has_value() && *p >= 0.9, "precision " + (p ? format_fixed(*p, 4) : std::string("undefined")));
  std::cout << "  pairs " << run.dict.size() << ", skeleton-equal recall " << found << "/" << subset
            << ", precision " << (p ? format_fixed(*p, 4) : "NA") << ", coverage "
            << format_fixed(coverage(run.dict, s.lexicon), 4) << "\n";
}

void threshold_trend(Check& c) {
  auto& run = synth_run();
  c.expect(!run.tables.empty(), "synthetic build unavailable");
  if (run.tables.empty()) return;
  const std::vector<double> ts{0.60, 0.65, 0.70, 0.75, 0.80};
  std::vector<std::set<std::pair<std::string, std::string>>> sets;
  std::vector<double> cov;
  std::ostringstream line;
  for (double t : ts) {
    const auto d = build_from_tables(run.tables, run.synth.lexicon, ScoreMethod{ScoreKind::seqmatch_skeleton, t});
    sets.push_back(d.pair_set());
    cov.push_back(coverage(d, run.synth.lexicon));
    line << " " << format_fixed(t, 2) << ":" << d.size() << "/" << format_fixed(cov.back(), 3);
  }
  std::cout << "  threshold:pairs/coverage" << line.str() << "\n";
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const auto& wide = sets[i - 1];
    const auto& narrow = sets[i];
    bool subset = true;
    for (const auto& p : narrow) subset &= wide.count(p) == 1;
    c.expect(subset, "pairs at " + format_fixed(ts[i], 2) + " not a subset of " + format_fixed(ts[i - 1], 2));
    c.expect(narrow.size() < wide.size(), "no pair dropped between " + format_fixed(ts[i - 1], 2) + " and " +
                                              format_fixed(ts[i], 2));
    c.expect(cov[i] <= cov[i - 1], "coverage increased at " + format_fixed(ts[i], 2));
  }
  const auto rows = threshold_sweep(run.tables, run.synth.lexicon, run.synth.reference, ts, ScoreKind::seqmatch_skeleton);
  c.expect(rows.size() == ts.size(), "threshold_sweep row count");
  for (std::size_t i = 0; i < rows.size() && i < ts.size(); ++i) {
    c.expect(rows[i].label == format_fixed(ts[i], 2), "sweep label " + rows[i].label);
    c.expect(rows[i].report.coverage == cov[i], "sweep coverage at " + rows[i].label);
  }
}

void model_merge_trend(Check& c) {
  auto& run = synth_run();
  c.expect(run.models.size() == 1, "synthetic build unavailable");
  if (run.models.size() != 1) return;
  for (auto a : {Algorithm::cbow, Algorithm::subword}) {
    run.models.push_back(train(run.corpus, synth_train_config(a), to_string(a)));
    run.tables.push_back(table_for(run.models.back(), run.synth.lexicon));
  }
  const ScoreMethod m{ScoreKind::seqmatch_skeleton, 0.70};
  const auto rows = compare_models(run.tables, run.synth.lexicon, run.synth.reference, m);
  c.expect(rows.size() == 4 && rows.back().label == "merged", "compare_models rows");
  if (rows.size() != 4) return;
  double best_single = 0;
  std::ostringstream line;
  for (std::size_t i = 0; i < 3; ++i) {
    best_single = std::max(best_single, rows[i].report.coverage);
    line << " " << rows[i].label << " " << format_fixed(rows[i].report.coverage, 3);
  }
  const double merged = rows.back().report.coverage;
  line << " merged " << format_fixed(merged, 3);
  std::cout << "  coverage" << line.str() << "\n";
  c.expect(merged >= best_single, "merged coverage " + format_fixed(merged, 3) + " below best single " +
                                      format_fixed(best_single, 3));

  const auto merged_dict = build_from_tables(run.tables, run.synth.lexicon, m);
  const auto merged_set = merged_dict.pair_set();
  for (const auto& t : run.tables) {
    const auto single = build_from_tables({t}, run.synth.lexicon, m).pair_set();
    for (const auto& p : single)
      c.expect(merged_set.count(p) == 1, t.model_id + " pair " + pair_str(p.first, p.second) + " missing from merge");
  }
}

// -- evaluation arithmetic --------------------------------------------------

NormalizationDictionary dict_of(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<CandidatePair> out;
  for (const auto& [t, c] : pairs) out.push_back({t, c, 0.5, 1.0, {"m"}});
  return NormalizationDictionary(out);
}

void evaluation_arithmetic(Check& c) {
  {
    const auto produced = dict_of({{"x", "a"}, {"y", "a"}, {"z", "b"}});
    const ReferenceDictionary ref({{"x", "a"}, {"z", "b"}});
    const auto p = precision(produced, ref);
    c.expect(p && *p == 2.0 / 3.0, "2/3 precision case");
    const Lexicon lex({{"a"}, {"b"}, {"c"}});
    c.expect(coverage(produced, lex) == 2.0 / 3.0, "2/3 coverage case");
  }
  {
    // 5 produced pairs, 3 in the reference; covers 4 of 6 canonicals.
    const auto produced = dict_of({{"bzaaf", "bzaf"}, {"chkon", "chkoun"}, {"chokran", "choukran"},
                                   {"7amad", "7amd"}, {"7amad", "7amed"}});
    const ReferenceDictionary ref({{"bzaaf", "bzaf"}, {"chkon", "chkoun"}, {"7amad", "7amed"}, {"wqaaf", "wqef"}});
    const Lexicon lex({{"bzaf"}, {"chkoun"}, {"choukran"}, {"7amd"}, {"wqef"}, {"nta"}});
    const auto r = evaluate(produced, ref, lex);
    c.expect(r.produced_count == 5 && r.correct_count == 3, "5-pair counts");
    c.expect(r.precision && *r.precision == 3.0 / 5.0, "5-pair precision != 3/5");
    c.expect(r.covered_canonicals == 4 && r.lexicon_size == 6, "5-pair coverage counts");
    c.expect(r.coverage == 4.0 / 6.0, "5-pair coverage != 4/6");
  }
  {
    const auto produced = dict_of({{"ax", "a"}, {"ay", "a"}, {"bx", "b"}, {"cx", "c"}, {"dx", "d"}});
    const ReferenceDictionary ref({{"ax", "a"}, {"ay", "a"}, {"bx", "b"}, {"cx", "c"}, {"dx", "d"}, {"ex", "e"}});
    c.expect(precision(produced, ref) == 1.0, "subset precision != 1");
    c.expect(precision(produced, ReferenceDictionary(std::set<std::pair<std::string, std::string>>{{"q", "r"}})) == 0.0, "disjoint precision != 0");
    c.expect(!precision(NormalizationDictionary{}, ref).has_value(), "empty produced precision not undefined");
    const Lexicon lex({{"a"}, {"b"}, {"c"}, {"d"}});
    c.expect(coverage(produced, lex) == 1.0, "full coverage != 1");
    c.expect(coverage(NormalizationDictionary{}, lex) == 0.0, "empty coverage != 0");
  }
}

// -- round trips ------------------------------------------------------------

std::string letters(int n) {
  std::string s;
  do {
    s += static_cast<char>('a' + n % 26);
    n /= 26;
  } while (n > 0);
  return s;
}

void round_trips(Check& c) {
  TempDir dir;
  const auto lex = load_lexicon(std::string(ARY_SOURCE_DIR) + "/data/demo_lexicon.tsv");
  save_lexicon(lex, dir / "lex.tsv");
  const auto lex2 = load_lexicon(dir / "lex.tsv");
  c.expect(lex2 == lex, "lexicon differs after reload");
  save_lexicon(lex2, dir / "lex2.tsv");
  c.expect(read_file(dir / "lex.tsv") == read_file(dir / "lex2.tsv"), "lexicon TSV not byte-stable");

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<CandidatePair> pairs;
  for (int i = 0; i < 200; ++i)
    pairs.push_back({letters(i) + "t", letters(i % 17) + "c", u(rng), u(rng),
                     i % 3 ? std::set<std::string>{"cbow"} : std::set<std::string>{"cbow", "subword"}});
  const NormalizationDictionary dict(pairs);
  save_dictionary(dict, dir / "dict.tsv");
  const auto dict2 = load_dictionary(dir / "dict.tsv");
  c.expect(dict2.size() == dict.size(), "dictionary size changed");
  for (std::size_t i = 0; i < dict.size() && i < dict2.size(); ++i) {
    const auto& a = dict.pairs()[i];
    const auto& b = dict2.pairs()[i];
    c.expect(a.translit == b.translit && a.canonical == b.canonical && a.sources == b.sources,
             "dictionary row " + std::to_string(i));
    c.expect(std::abs(a.semantic_score - b.semantic_score) <= 1e-6 &&
                 std::abs(a.lexical_score - b.lexical_score) <= 1e-6,
             "dictionary scores drift at row " + std::to_string(i));
  }
  save_dictionary(dict2, dir / "dict2.tsv");
  c.expect(read_file(dir / "dict.tsv") == read_file(dir / "dict2.tsv"), "dictionary TSV not byte-stable");

  auto& run = synth_run();
  std::vector<VectorModel> models = run.models;
  if (models.empty()) {
    std::vector<Sentence> s;
    for (int i = 0; i < 50; ++i) s.push_back({{"ana", "bghit", "nakol", "l" + std::string(1 + i % 4, 'a')}, "x"});
    TrainConfig tc;
    tc.dim = 12;
    tc.algorithm = Algorithm::subword;
    tc.bucket_count = 500;
    models.push_back(train(Corpus(s), tc, "subword"));
  }
  for (const auto& m : models) {
    const auto path = dir / (m.id() + ".txt");
    save_vectors(m, path);
    const auto back = load_vectors(path, m.id());
    c.expect(back.words() == m.words() && back.dim() == m.dim(), m.id() + ": vocabulary changed");
    double worst = 0;
    for (std::size_t i = 0; i < m.size() && i < back.size(); ++i)
      for (int d = 0; d < m.dim(); ++d) worst = std::max(worst, std::abs(m.vector(i)[d] - back.vector(i)[d]));
    c.expect(worst <= 1e-6, m.id() + ": vector drift " + format_double(worst));
    c.expect(m.subwords().has_value() == back.subwords().has_value(), m.id() + ": subword table lost");
    save_vectors(back, dir / (m.id() + "2.txt"));
    c.expect(read_file(path) == read_file(dir / (m.id() + "2.txt")), m.id() + ": vector file not byte-stable");
  }

  const auto log = dir / "decisions.jsonl";
  const auto review_dict = dict_of({{"chokran", "choukran"}, {"chkon", "chkoun"}, {"7amad", "7amd"}, {"7amad", "7amed"}});
  const Lexicon review_lex({{"choukran"}, {"chkoun"}, {"7amd"}, {"7amed"}});
  std::string export_before, pairs_before;
  std::vector<ReviewDecision> log_before;
  {
    ReviewService svc(review_dict, review_lex, Corpus{}, log);
    svc.record({{"chokran", "choukran"}, Verdict::accept, std::nullopt, "r1"});
    svc.record({{"7amad", "7amd"}, Verdict::remap, "7amed", "r2"});
    svc.record({{"chkon", "chkoun"}, Verdict::reject, std::nullopt, "r1"});
    svc.record({{"chkon", "chkoun"}, Verdict::accept, std::nullopt, "r2"});
    export_before = format_reference(svc.snapshot()->export_reference());
    log_before = svc.log();
  }
  ReviewService again(review_dict, review_lex, Corpus{}, log);
  c.expect(again.log() == log_before, "decision log replay differs");
  c.expect(format_reference(again.snapshot()->export_reference()) == export_before, "export differs after replay");
  c.expect(read_decision_log(log) == log_before, "read_decision_log differs");
}

// -- review API -------------------------------------------------------------

std::string decision_body(const std::string& t, const std::string& canon, const std::string& verdict,
                          const std::optional<std::string>& chosen = std::nullopt) {
  json j{{"pair", {{"translit", t}, {"canonical", canon}}}, {"verdict", verdict}, {"reviewer", "acceptance"}};
  if (chosen) j["chosen_canonical"] = *chosen;
  return j.dump();
}

struct Served {
  Served(NormalizationDictionary d, Lexicon l, std::optional<std::filesystem::path> log)
      : service(std::move(d), std::move(l), Corpus{}, std::move(log)), server(service) {
    port = server.bind("127.0.0.1", 0);
    server.start();
  }
  ~Served() { server.stop(); }
  httplib::Client client() const {
    httplib::Client cl("127.0.0.1", port);
    cl.set_read_timeout(10, 0);
    return cl;
  }
  ReviewService service;
  ReviewServer server;
  int port = 0;
};

int status_of(const httplib::Result& r) { return r ? r->status : -1; }

json get_json(httplib::Client& cl, const std::string& path) {
  auto r = cl.Get(path);
  if (!r || r->status != 200) return json();
  return json::parse(r->body, nullptr, false);
}

void review_api(Check& c) {
  TempDir dir;
  const auto log = dir / "decisions.jsonl";
  const auto d = dict_of({{"chokran", "choukran"}, {"chkon", "chkoun"}, {"7amad", "7amd"}, {"7amad", "7amed"},
                          {"wqaaf", "wqef"}, {"bzaaf", "bzaf"}});
  const Lexicon lex({{"choukran"}, {"chkoun"}, {"7amd"}, {"7amed"}, {"wqef"}, {"wqaf"}, {"bzaf"}});
  std::string pairs_before, export_before, stats_before;
  {
    Served s(d, lex, log);
    auto cl = s.client();

    auto page = get_json(cl, "/pairs?offset=0&limit=4");
    c.expect(page["total"] == 6 && page["items"].size() == 4, "first page shape");
    c.expect(page["items"][0]["translit"] == "7amad", "conflicted pair not first");
    auto rest = get_json(cl, "/pairs?offset=4&limit=4");
    c.expect(rest["items"].size() == 2, "second page shape");
    c.expect(get_json(cl, "/pairs?offset=6")["items"].empty(), "page past the end not empty");
    c.expect(status_of(cl.Get("/pairs?limit=-1")) == 400, "bad limit not 400");

    c.expect(status_of(cl.Post("/decisions", decision_body("chokran", "choukran", "reject"), "application/json")) == 201,
             "reject not 201");
    c.expect(status_of(cl.Post("/decisions", decision_body("chokran", "choukran", "accept"), "application/json")) == 201,
             "accept not 201");
    c.expect(get_json(cl, "/pairs?status=rejected")["total"] == 0, "superseded reject still counted");
    c.expect(get_json(cl, "/pairs?status=accepted")["total"] == 1, "superseding accept not applied");

    c.expect(status_of(cl.Post("/decisions", decision_body("7amad", "7amd", "remap"), "application/json")) == 422,
             "remap without target not 422");
    c.expect(status_of(cl.Post("/decisions", decision_body("7amad", "7amd", "remap", "zzz"), "application/json")) == 422,
             "remap outside lexicon not 422");
    c.expect(status_of(cl.Post("/decisions", decision_body("7amad", "7amd", "remap", "7amd"), "application/json")) == 422,
             "remap onto itself not 422");
    c.expect(status_of(cl.Post("/decisions", decision_body("nope", "bzaf", "accept"), "application/json")) == 404,
             "unknown pair not 404");
    c.expect(status_of(cl.Post("/decisions", decision_body("7amad", "7amd", "remap", "7amed"), "application/json")) == 201,
             "valid remap not 201");
    cl.Post("/decisions", decision_body("7amad", "7amed", "reject"), "application/json");
    cl.Post("/decisions", decision_body("wqaaf", "wqef", "remap", "wqaf"), "application/json");
    cl.Post("/decisions", decision_body("chkon", "chkoun", "accept"), "application/json");

    auto r = cl.Get("/export/reference");
    const std::string expected = "translit\tcanonical\n7amad\t7amed\nchkon\tchkoun\nchokran\tchoukran\nwqaaf\twqaf\n";
    c.expect(r && r->body == expected, "export is not accepted plus remapped");

    const auto st = get_json(cl, "/stats");
    c.expect(st["accepted"] == 2 && st["remapped"] == 2 && st["rejected"] == 1 && st["pending"] == 1, "stats counts");
    c.expect(st["running_precision"] == 0.8, "running precision over decided pairs");

    pairs_before = cl.Get("/pairs")->body;
    export_before = cl.Get("/export/reference")->body;
    stats_before = cl.Get("/stats")->body;
  }
  {
    Served s(d, lex, log);
    auto cl = s.client();
    c.expect(cl.Get("/pairs")->body == pairs_before, "pairs differ after restart");
    c.expect(cl.Get("/export/reference")->body == export_before, "export differs after restart");
    c.expect(cl.Get("/stats")->body == stats_before, "stats differ after restart");
  }

  std::vector<CandidatePair> many;
  for (int i = 0; i < 3057; ++i) many.push_back({"v" + std::to_string(i), "c", 0.5, 1.0, {"m"}});
  Served big(NormalizationDictionary(many), Lexicon({{"c"}}), std::nullopt);
  for (int i = 0; i < 3057; ++i)
    big.service.record({{"v" + std::to_string(i), "c"}, i < 2225 ? Verdict::accept : Verdict::reject, std::nullopt, "r"});
  auto cl = big.client();
  const auto st = get_json(cl, "/stats");
  const double rp = st["running_precision"].is_number() ? st["running_precision"].get<double>() : -1;
  std::cout << "  2225/3057 running precision " << format_fixed(rp, 4) << "\n";
  c.expect(st["accepted"] == 2225 && st["rejected"] == 832, "large fixture counts");
  c.expect(rp == 2225.0 / 3057.0, "running precision is not 2225/3057");
  c.expect(std::abs(rp - 0.728) < 5e-4, "running precision not ~0.728");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"string-metric oracle suite", 60.0, string_oracle},
      {"anchored string cases", std::nullopt, anchored_string_cases},
      {"preprocessing golden file", std::nullopt, preprocessing_golden},
      {"embedding gradient check", 30.0, gradient_check},
      {"synthetic reproduction (skip-gram, k=20, seqmatch_skeleton, 0.70)", 300.0, synthetic_reproduction},
      {"threshold sweep nesting and coverage trend", std::nullopt, threshold_trend},
      {"merged coverage >= best single model", std::nullopt, model_merge_trend},
      {"evaluation arithmetic", std::nullopt, evaluation_arithmetic},
      {"round trips", std::nullopt, round_trips},
      {"review API contract", std::nullopt, review_api},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& cr = criteria[i];
    Check check;
    const auto t0 = Clock::now();
    try {
      cr.body(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (cr.limit_seconds && secs >= *cr.limit_seconds)
      check.expect(false, "took " + format_fixed(secs, 1) + " s, limit " + format_fixed(*cr.limit_seconds, 0) + " s");
    const bool ok = check.failed == 0;
    failed += !ok;
    std::printf("%s [%zu] %s (%.1f s)\n", ok ? "PASS" : "FAIL", i + 1, cr.name.c_str(), secs);
    for (const auto& f : check.failures) std::printf("    %s\n", f.c_str());
    if (check.failed > check.failures.size())
      std::printf("    ... %zu more\n", check.failed - check.failures.size());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
