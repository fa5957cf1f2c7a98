#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ary/error.hpp"
#include "ary/builder.hpp"
#include "ary/corpus.hpp"
#include "ary/evaluate.hpp"
#include "ary/lexicon.hpp"

namespace ary {

enum class Verdict { accept, reject, remap };
enum class PairStatus { pending, accepted, rejected, remapped };

std::string to_string(Verdict v);
std::string to_string(PairStatus s);
std::optional<Verdict> parse_verdict(std::string_view s);
std::optional<PairStatus> parse_status(std::string_view s);

struct PairKey {
  std::string translit;
  std::string canonical;
  auto operator<=>(const PairKey&) const = default;
};

struct ReviewDecision {
  PairKey pair;
  Verdict verdict = Verdict::accept;
  std::optional<std::string> chosen_canonical;
  std::string reviewer;
  std::string timestamp;  // UTC, ISO 8601

  friend bool operator==(const ReviewDecision&, const ReviewDecision&) = default;
};

nlohmann::json to_json(const ReviewDecision& d);
/// Throws ParseError on a missing or mistyped field.
ReviewDecision decision_from_json(const nlohmann::json& j);

class UnknownPair : public Error {
 public:
  explicit UnknownPair(const PairKey& k) : Error("no pair (" + k.translit + " -> " + k.canonical + ")") {}
};

/// A decision whose contents are inconsistent (remap target missing, not in
/// the lexicon, or equal to the proposed canonical).
class InvalidDecision : public Error {
 public:
  using Error::Error;
};

struct ReviewStats {
  std::size_t total = 0, pending = 0, accepted = 0, rejected = 0, remapped = 0;
  std::optional<double> running_precision;
};

struct PairView {
  const CandidatePair* pair;
  PairStatus status;
  std::optional<std::string> chosen_canonical;
  std::vector<std::string> conflict_set;  // other canonicals of the same translit
};

struct PairPage {
  std::size_t total = 0;  // matching the filter, before paging
  std::vector<PairView> items;
};

/// Pair statuses derived from a decision sequence; latest decision per pair wins.
class ReviewState {
 public:
  ReviewState(std::shared_ptr<const NormalizationDictionary> dict, std::shared_ptr<const Lexicon> lexicon);

  /// Throws UnknownPair or InvalidDecision without changing state.
  void validate(const ReviewDecision& d) const;
  void apply(const ReviewDecision& d);

  PairStatus status(const PairKey& k) const;
  /// Latest decision on the pair, or nullptr.
  const ReviewDecision* effective(const PairKey& k) const;
  ReviewStats stats() const;
  ReferenceDictionary export_reference() const;
  /// Conflicted transliterations first, then by translit and canonical.
  PairPage page(std::optional<PairStatus> filter, std::size_t offset, std::size_t limit) const;

  const NormalizationDictionary& dictionary() const noexcept { return *dict_; }
  const Lexicon& lexicon() const noexcept { return *lexicon_; }

 private:
  std::size_t index_of(const PairKey& k) const;

  std::shared_ptr<const NormalizationDictionary> dict_;
  std::shared_ptr<const Lexicon> lexicon_;
  std::shared_ptr<const std::vector<std::size_t>> order_;
  std::shared_ptr<const std::map<std::string, std::vector<std::string>>> conflicts_;
  std::vector<std::shared_ptr<const ReviewDecision>> decisions_;  // by pair index
};

/// Fields a reviewer submits; the service stamps the time.
struct DecisionRequest {
  PairKey pair;
  Verdict verdict = Verdict::accept;
  std::optional<std::string> chosen_canonical;
  std::string reviewer;
};

/// Thread-safe review session over an append-only JSON-lines decision log.
/// A decision is written and flushed to the log before it is acknowledged;
/// the state is rebuilt from the log on start-up.
class ReviewService {
 public:
  using Clock = std::function<std::string()>;

  /// Replays `log_path` when it exists; decisions are appended to it.
  ReviewService(NormalizationDictionary dict, Lexicon lexicon, Corpus corpus,
                std::optional<std::filesystem::path> log_path = std::nullopt, Clock clock = {});
  ~ReviewService();
  ReviewService(const ReviewService&) = delete;
  ReviewService& operator=(const ReviewService&) = delete;

  /// Throws UnknownPair or InvalidDecision; nothing is logged then.

  ReviewDecision record(const DecisionRequest& req);
  std::shared_ptr<const ReviewState> snapshot() const;
  const Corpus& corpus() const noexcept { return corpus_; }
  const Lexicon& lexicon() const noexcept { return *lexicon_; }
  std::vector<ReviewDecision> log() const;

 private:
  std::shared_ptr<const NormalizationDictionary> dict_;
  std::shared_ptr<const Lexicon> lexicon_;
  Corpus corpus_;
  std::optional<std::filesystem::path> log_path_;
  Clock clock_;

  mutable std::mutex write_mu_;   // serializes decisions
  mutable std::mutex snap_mu_;    // guards the snapshot pointer only
  std::shared_ptr<const ReviewState> snapshot_;
  std::vector<ReviewDecision> log_;
  int log_fd_ = -1;
};

/// Reads a decision log. A truncated final line (a write that was never
/// acknowledged) is ignored; any other malformed line is an error.
std::vector<ReviewDecision> read_decision_log(const std::filesystem::path& path);

std::string utc_now_iso8601();

/// Lemma guidance for inflected forms, served to reviewers as Markdown.
std::string_view review_guidelines();

}  // namespace ary
