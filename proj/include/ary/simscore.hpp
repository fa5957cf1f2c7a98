#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace ary {

enum class ScoreKind { lexim, seqmatch, seqmatch_skeleton, seqmatch_soundex };

std::string to_string(ScoreKind k);
std::optional<ScoreKind> parse_score_kind(std::string_view s);

inline constexpr double kDefaultThreshold = 0.70;

struct ScoreMethod {
  ScoreKind kind = ScoreKind::seqmatch_skeleton;
  double threshold = kDefaultThreshold;

  /// Inclusive: a score equal to the threshold is accepted.
  bool accepts(double score) const noexcept { return score >= threshold; }
};

/// Levenshtein distance with unit insert/delete/substitute costs.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// Longest common subsequence length (not substring).
std::size_t lcs_length(std::string_view a, std::string_view b);

/// lcs_length / max(|a|, |b|). Throws InvalidArgument when both are empty.
double lcsr(std::string_view a, std::string_view b);

/// LCSR divided by the edit distance, or LCSR itself when the distance is 0.
double lexim(std::string_view a, std::string_view b);

/// Number of characters matched by Ratcliff/Obershelp decomposition: the
/// longest common substring (earliest in `a`, then earliest in `b`) plus the
/// matches of the left and right remainders.
std::size_t gestalt_matches(std::string_view a, std::string_view b);

/// 2 * gestalt_matches / (|a| + |b|). Throws InvalidArgument when both are empty.
double seq_ratio(std::string_view a, std::string_view b);

/// Drops vowels {a,e,i,o,u}, then squeezes runs of one character to one.
std::string skeletonize(std::string_view word);

/// Soundex variant for Moroccan Arabic transliterations. The first unit
/// (ch/kh/gh digraphs count as one unit) is kept as written; later units map
/// b,f,m,p,v,w→1  d,t,l,n→2  s,z→3  j,y,ch→4  r,kh,gh→5, vowels are dropped
/// and unlisted consonants (h,q,k,g,c,3,7,x) pass through. Adjacent equal
/// output symbols collapse. No padding or truncation.
std::string ma_soundex(std::string_view word);

/// Dispatches to the scorer selected by `kind`. Inputs must be nonempty.
double score(std::string_view a, std::string_view b, ScoreKind kind);
inline double score(std::string_view a, std::string_view b, const ScoreMethod& m) {
  return score(a, b, m.kind);
}

}  // namespace ary
