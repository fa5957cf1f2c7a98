#include "ary/review.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ary/error.hpp"

namespace ary {

using nlohmann::json;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::accept: return "accept";
    case Verdict::reject: return "reject";
    case Verdict::remap: return "remap";
  }
  return "?";
}

std::string to_string(PairStatus s) {
  switch (s) {
    case PairStatus::pending: return "pending";
    case PairStatus::accepted: return "accepted";
    case PairStatus::rejected: return "rejected";
    case PairStatus::remapped: return "remapped";
  }
  return "?";
}

std::optional<Verdict> parse_verdict(std::string_view s) {
  if (s == "accept") return Verdict::accept;
  if (s == "reject") return Verdict::reject;
  if (s == "remap") return Verdict::remap;
  return std::nullopt;
}

std::optional<PairStatus> parse_status(std::string_view s) {
  if (s == "pending") return PairStatus::pending;
  if (s == "accepted") return PairStatus::accepted;
  if (s == "rejected") return PairStatus::rejected;
  if (s == "remapped") return PairStatus::remapped;
  return std::nullopt;
}

json to_json(const ReviewDecision& d) {
  return json{{"pair", {{"translit", d.pair.translit}, {"canonical", d.pair.canonical}}},
              {"verdict", to_string(d.verdict)},
              {"chosen_canonical", d.chosen_canonical ? json(*d.chosen_canonical) : json(nullptr)},
              {"reviewer", d.reviewer},
              {"timestamp", d.timestamp}};
}

namespace {

std::string string_field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw ParseError(where + key + ": expected a string", 0);
  return it->get<std::string>();
}

}  // namespace

ReviewDecision decision_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("decision: expected an object", 0);
  ReviewDecision d;
  auto pair = j.find("pair");
  if (pair == j.end() || !pair->is_object()) throw ParseError("pair: expected an object", 0);
  d.pair.translit = string_field(*pair, "translit", "pair.");
  d.pair.canonical = string_field(*pair, "canonical", "pair.");
  auto verdict = parse_verdict(string_field(j, "verdict", ""));
  if (!verdict) throw ParseError("verdict: expected accept, reject or remap", 0);
  d.verdict = *verdict;
  if (auto c = j.find("chosen_canonical"); c != j.end() && !c->is_null()) {
    if (!c->is_string()) throw ParseError("chosen_canonical: expected a string", 0);
    d.chosen_canonical = c->get<std::string>();
  }
  d.reviewer = string_field(j, "reviewer", "");
  if (auto t = j.find("timestamp"); t != j.end()) {
    if (!t->is_string()) throw ParseError("timestamp: expected a string", 0);
    d.timestamp = t->get<std::string>();
  }
  return d;
}

// ---------------------------------------------------------------- state

ReviewState::ReviewState(std::shared_ptr<const NormalizationDictionary> dict, std::shared_ptr<const Lexicon> lexicon)
    : dict_(std::move(dict)), lexicon_(std::move(lexicon)) {
  auto conf = std::make_shared<std::map<std::string, std::vector<std::string>>>();
  for (const auto& [t, cs] : conflicts(*dict_)) conf->emplace(t, std::vector<std::string>(cs.begin(), cs.end()));

  // Pairs are already sorted by (translit, canonical); a stable partition
  // keeps that order within each group.
  auto order = std::make_shared<std::vector<std::size_t>>(dict_->size());
  for (std::size_t i = 0; i < order->size(); ++i) (*order)[i] = i;
  const auto& pairs = dict_->pairs();
  std::stable_partition(order->begin(), order->end(),
                        [&](std::size_t i) { return conf->contains(pairs[i].translit); });
  order_ = std::move(order);
  conflicts_ = std::move(conf);
  decisions_.resize(dict_->size());
}

std::size_t ReviewState::index_of(const PairKey& k) const {
  const auto* p = dict_->find(k.translit, k.canonical);
  if (!p) throw UnknownPair(k);
  return static_cast<std::size_t>(p - dict_->pairs().data());
}

void ReviewState::validate(const ReviewDecision& d) const {
  index_of(d.pair);
  if (d.verdict == Verdict::remap) {
    if (!d.chosen_canonical) throw InvalidDecision("remap requires chosen_canonical");
    if (!lexicon_->contains(*d.chosen_canonical))
      throw InvalidDecision("chosen_canonical '" + *d.chosen_canonical + "' is not in the lexicon");
    if (*d.chosen_canonical == d.pair.canonical)
      throw InvalidDecision("chosen_canonical equals the proposed canonical; use accept");
  } else if (d.chosen_canonical) {
    throw InvalidDecision("chosen_canonical is only allowed with verdict remap");
  }
}

void ReviewState::apply(const ReviewDecision& d) {
  validate(d);
  decisions_[index_of(d.pair)] = std::make_shared<const ReviewDecision>(d);
}

namespace {

PairStatus status_of(const ReviewDecision* d) {
  if (!d) return PairStatus::pending;
  switch (d->verdict) {
    case Verdict::accept: return PairStatus::accepted;
    case Verdict::reject: return PairStatus::rejected;
    case Verdict::remap: return PairStatus::remapped;
  }
  return PairStatus::pending;
}

}  // namespace

const ReviewDecision* ReviewState::effective(const PairKey& k) const { return decisions_[index_of(k)].get(); }

PairStatus ReviewState::status(const PairKey& k) const { return status_of(effective(k)); }

ReviewStats ReviewState::stats() const {
  ReviewStats s;
  s.total = decisions_.size();
  for (const auto& d : decisions_) {
    switch (status_of(d.get())) {
      case PairStatus::pending: ++s.pending; break;
      case PairStatus::accepted: ++s.accepted; break;
      case PairStatus::rejected: ++s.rejected; break;
      case PairStatus::remapped: ++s.remapped; break;
    }
  }
  const std::size_t decided = s.accepted + s.rejected + s.remapped;
  if (decided > 0) s.running_precision = static_cast<double>(s.accepted + s.remapped) / static_cast<double>(decided);
  return s;
}

ReferenceDictionary ReviewState::export_reference() const {
  std::set<std::pair<std::string, std::string>> out;
  const auto& pairs = dict_->pairs();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto* d = decisions_[i].get();
    if (!d || d->verdict == Verdict::reject) continue;
    out.emplace(pairs[i].translit, d->verdict == Verdict::remap ? *d->chosen_canonical : pairs[i].canonical);
  }
  return ReferenceDictionary(std::move(out));
}

PairPage ReviewState::page(std::optional<PairStatus> filter, std::size_t offset, std::size_t limit) const {
  PairPage page;
  const auto& pairs = dict_->pairs();
  for (std::size_t i : *order_) {
    const auto* d = decisions_[i].get();
    const auto st = status_of(d);
    if (filter && st != *filter) continue;
    const std::size_t pos = page.total++;
    if (pos < offset || page.items.size() >= limit) continue;
    PairView v{&pairs[i], st, std::nullopt, {}};
    if (d && d->verdict == Verdict::remap) v.chosen_canonical = d->chosen_canonical;
    if (auto c = conflicts_->find(pairs[i].translit); c != conflicts_->end()) {
      for (const auto& other : c->second) {
        if (other != pairs[i].canonical) v.conflict_set.push_back(other);
      }
    }
    page.items.push_back(std::move(v));
  }
  return page;
}

// ---------------------------------------------------------------- log

std::vector<ReviewDecision> read_decision_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string body = ss.str();

  std::vector<ReviewDecision> out;
  std::size_t start = 0, lineno = 0;
  while (start < body.size()) {
    ++lineno;
    const auto nl = body.find('\n', start);
    const bool complete = nl != std::string::npos;
    const std::string line = body.substr(start, complete ? nl - start : std::string::npos);
    start = complete ? nl + 1 : body.size();
    if (line.empty()) continue;
    try {
      auto d = decision_from_json(json::parse(line));
      if (d.timestamp.empty()) throw ParseError("timestamp missing", 0);
      out.push_back(std::move(d));
    } catch (const std::exception& e) {
      if (!complete) break;  // torn final write, never acknowledged
      throw ParseError(path.string() + ": " + e.what(), lineno);
    }
  }
  return out;
}

std::string utc_now_iso8601() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  const std::time_t t = system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

namespace {

void write_all(int fd, const std::string& data, const std::filesystem::path& path) {
  std::size_t done = 0;
  while (done < data.size()) {
    const auto n = ::write(fd, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error("write " + path.string() + ": " + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
}

}  // namespace

ReviewService::ReviewService(NormalizationDictionary dict, Lexicon lexicon, Corpus corpus,
                             std::optional<std::filesystem::path> log_path, Clock clock)
    : dict_(std::make_shared<const NormalizationDictionary>(std::move(dict))),
      lexicon_(std::make_shared<const Lexicon>(std::move(lexicon))),
      corpus_(std::move(corpus)),
      log_path_(std::move(log_path)),
      clock_(clock ? std::move(clock) : Clock(utc_now_iso8601)) {
  auto state = std::make_shared<ReviewState>(dict_, lexicon_);
  if (log_path_) {
    if (std::filesystem::exists(*log_path_)) {
      log_ = read_decision_log(*log_path_);
      for (std::size_t i = 0; i < log_.size(); ++i) {
        try {
          state->apply(log_[i]);
        } catch (const Error& e) {
          throw Error(log_path_->string() + ": decision " + std::to_string(i + 1) + " does not fit the loaded dictionary: " +
                      e.what());
        }
      }
    }
    log_fd_ = ::open(log_path_->c_str(), O_WRONLY | O_CREAT | O_CLOEXEC, 0644);
    if (log_fd_ < 0) throw Error("cannot open " + log_path_->string() + ": " + std::strerror(errno));
    // Drop a torn trailing record so the next append starts on a fresh line.
    std::string rewritten;
    for (const auto& d : log_) rewritten += to_json(d).dump() + '\n';
    const auto size = std::filesystem::file_size(*log_path_);
    if (size != rewritten.size()) {
      std::ifstream in(*log_path_, std::ios::binary);
      std::string body((std::istreambuf_iterator<char>(in)), {});
      const auto keep = body.rfind('\n');
      const off_t len = keep == std::string::npos ? 0 : static_cast<off_t>(keep + 1);
      if (::ftruncate(log_fd_, len) != 0) throw Error("cannot truncate " + log_path_->string());
    }
    if (::lseek(log_fd_, 0, SEEK_END) < 0) throw Error("cannot seek " + log_path_->string());
  }
  snapshot_ = std::move(state);
}

ReviewService::~ReviewService() {
  if (log_fd_ >= 0) ::close(log_fd_);
}

ReviewDecision ReviewService::record(const DecisionRequest& req) {
  std::lock_guard write_lock(write_mu_);
  ReviewDecision d{req.pair, req.verdict, req.chosen_canonical, req.reviewer, clock_()};
  auto current = snapshot();
  current->validate(d);
  if (log_fd_ >= 0) {
    write_all(log_fd_, to_json(d).dump() + '\n', *log_path_);
    if (::fsync(log_fd_) != 0) throw Error("fsync " + log_path_->string() + ": " + std::strerror(errno));
  }
  auto next = std::make_shared<ReviewState>(*current);
  next->apply(d);
  log_.push_back(d);
  {
    std::lock_guard snap_lock(snap_mu_);
    snapshot_ = std::move(next);
  }
  return d;
}

std::shared_ptr<const ReviewState> ReviewService::snapshot() const {
  std::lock_guard lock(snap_mu_);
  return snapshot_;
}

std::vector<ReviewDecision> ReviewService::log() const {
  std::lock_guard lock(write_mu_);
  return log_;
}

std::string_view review_guidelines() {
  return R"(# Choosing the canonical form

Each card proposes that a spelling seen in the comments (left) stands for a
dictionary entry (right). Accept when both are the same word, reject when
they are not, and remap when the spelling belongs to a different entry.

## Inflected forms

The dictionary lists lemmas, so an inflected spelling is judged against its
lemma:

| kind | lemma to pick |
|------|---------------|
| verb | past tense, third person singular |
| noun, adjective | masculine singular |

| seen in comments | lemma |
|------------------|-------|
| saknin, sakna | saken |
| klamo, klamek | klam |
| 3aqa, 3aqna | 3aq |
| bakatni, bakitini, bakitona | bkite |
| 3ajbatni, 3jbatni, 3jebni, kat3jabni, kay3jabni | 3jabni |

If the exact lemma has no entry, take the closest inflection that has one.

## Two plausible entries

Some spellings sit close to two entries, for example 7amad next to both 7amd
and 7amed. Open the contexts for the spelling and for each entry and pick the
entry whose meaning fits the sentences. Remap when the better entry is not
the one proposed.

## Spelling-only differences

Vowel changes (chokran, choukran), doubled letters (allah, alah) and digit
spellings (9alb, qalb) do not make a different word. Accept them when the
meaning matches.
)";
}

}  // namespace ary
