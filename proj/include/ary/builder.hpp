#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ary/embeddings.hpp"
#include "ary/lexicon.hpp"
#include "ary/simscore.hpp"

namespace ary {

struct CandidatePair {
  std::string translit;
  std::string canonical;
  double semantic_score = 0;
  double lexical_score = 0;
  std::set<std::string> sources;

  friend bool operator==(const CandidatePair&, const CandidatePair&) = default;
};

struct BuildConfig {
  std::size_t k = 20;
  ScoreMethod method{};
  /// Lets subword models answer for canonicals missing from their vocabulary.
  bool subword_oov = false;
  /// 0 = one worker per hardware thread.
  unsigned threads = 0;
};

/// Build parameters recorded alongside a dictionary.
struct BuildInfo {
  std::size_t k = 20;
  ScoreMethod method{};
  std::vector<std::string> model_ids;
  std::string lexicon_fingerprint;
};

/// (translit, canonical) pairs, unique and ordered by translit then canonical.
class NormalizationDictionary {
 public:
  NormalizationDictionary() = default;
  /// Merges duplicate pairs (sources unioned, max semantic score).
  explicit NormalizationDictionary(std::vector<CandidatePair> pairs, BuildInfo info = {});

  const std::vector<CandidatePair>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  const BuildInfo& info() const noexcept { return info_; }
  const CandidatePair* find(std::string_view translit, std::string_view canonical) const;
  std::set<std::pair<std::string, std::string>> pair_set() const;

  friend bool operator==(const NormalizationDictionary& a, const NormalizationDictionary& b) {
    return a.pairs_ == b.pairs_;
  }

 private:
  std::vector<CandidatePair> pairs_;
  BuildInfo info_;
};

/// Warnings collected during a build (OOV canonicals, empty output).
using WarningSink = std::function<void(const std::string&)>;

/// Second stage for one canonical: keeps the neighbors whose lexical score
/// against `canonical` reaches the threshold.
std::vector<CandidatePair> filter_neighbors(const std::vector<Neighbor>& neighbors, std::string_view canonical,
                                            const ScoreMethod& method, const std::string& model_id);

/// Both stages for one canonical. An OOV canonical yields an empty list and a
/// warning instead of an error.
std::vector<CandidatePair> candidates_for(const VectorModel& model, std::string_view canonical, std::size_t k,
                                          const ScoreMethod& method, bool subword_oov = false,
                                          const WarningSink& warn = {});

/// Nearest-neighbor lists of every lexicon entry for one model; computed once
/// and reused across thresholds and scorers.
struct NeighborTable {
  std::string model_id;
  std::size_t k = 0;
  std::map<std::string, std::vector<Neighbor>> by_canonical;  // absent = OOV
};

NeighborTable neighbor_table(const VectorModel& model, const Lexicon& lexicon, std::size_t k, bool subword_oov,
                             unsigned threads = 0, const WarningSink& warn = {});

NormalizationDictionary build_from_tables(const std::vector<NeighborTable>& tables, const Lexicon& lexicon,
                                          const ScoreMethod& method, const WarningSink& warn = {});

NormalizationDictionary build_dictionary(const std::vector<VectorModel>& models, const Lexicon& lexicon,
                                         const BuildConfig& cfg, const WarningSink& warn = {});

/// Transliterations mapped to two or more canonicals.
std::map<std::string, std::set<std::string>> conflicts(const NormalizationDictionary& dict);

/// TSV: translit, canonical, semantic_score, lexical_score, sources
/// (comma-joined), with a header row. Scores use 6 decimals.
void save_dictionary(const NormalizationDictionary& dict, const std::filesystem::path& path);
NormalizationDictionary load_dictionary(const std::filesystem::path& path);
std::string format_dictionary(const NormalizationDictionary& dict);
NormalizationDictionary parse_dictionary(std::string_view tsv);

}  // namespace ary
