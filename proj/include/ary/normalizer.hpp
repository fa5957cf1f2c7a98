#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>

#include "ary/builder.hpp"
#include "ary/corpus.hpp"
#include "ary/lexicon.hpp"

namespace ary {

enum class AmbiguityPolicy { leave_unchanged, most_frequent };

std::optional<AmbiguityPolicy> parse_policy(std::string_view s);

struct NormalizePolicy {
  AmbiguityPolicy on_ambiguous = AmbiguityPolicy::leave_unchanged;
  /// Run the corpus cleaning steps on the input text first.
  bool preprocess = true;
  CleanConfig clean{};
};

/// Token-level normalizer over an immutable dictionary and lexicon.
class Normalizer {
 public:
  /// `corpus_counts` is required for AmbiguityPolicy::most_frequent.
  Normalizer(const NormalizationDictionary& dict, const Lexicon& lexicon, NormalizePolicy policy = {},
             const CountMap* corpus_counts = nullptr);

  std::string normalize_token(std::string_view token) const;
  std::string normalize_text(std::string_view text) const;
  /// Line-by-line streaming; line structure is preserved.
  void normalize_stream(std::istream& in, std::ostream& out) const;

 private:
  std::map<std::string, std::set<std::string>, std::less<>> targets_;
  std::set<std::string, std::less<>> canonicals_;
  NormalizePolicy policy_;
  const CountMap* counts_;
};

std::string normalize_token(const NormalizationDictionary& dict, const Lexicon& lexicon, std::string_view token,
                            const NormalizePolicy& policy = {}, const CountMap* corpus_counts = nullptr);
std::string normalize_text(const NormalizationDictionary& dict, const Lexicon& lexicon, std::string_view text,
                           const NormalizePolicy& policy = {}, const CountMap* corpus_counts = nullptr);

}  // namespace ary
