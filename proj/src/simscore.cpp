#include "ary/simscore.hpp"

#include <algorithm>
#include <vector>

#include "ary/error.hpp"

namespace ary {

std::string to_string(ScoreKind k) {
  switch (k) {
    case ScoreKind::lexim: return "lexim";
    case ScoreKind::seqmatch: return "seqmatch";
    case ScoreKind::seqmatch_skeleton: return "seqmatch_skeleton";
    case ScoreKind::seqmatch_soundex: return "seqmatch_soundex";
  }
  return "seqmatch_skeleton";
}

std::optional<ScoreKind> parse_score_kind(std::string_view s) {
  if (s == "lexim") return ScoreKind::lexim;
  if (s == "seqmatch") return ScoreKind::seqmatch;
  if (s == "seqmatch_skeleton") return ScoreKind::seqmatch_skeleton;
  if (s == "seqmatch_soundex") return ScoreKind::seqmatch_soundex;
  return std::nullopt;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t lcs_length(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = (a[i - 1] == b[j - 1]) ? diag + 1 : std::max(up, row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

namespace {

void require_not_both_empty(std::string_view a, std::string_view b, const char* op) {
  if (a.empty() && b.empty()) throw InvalidArgument(std::string(op) + ": both strings are empty");
}

struct Block {
  std::size_t a, b, len;
};

// Longest common substring of a[alo,ahi) and b[blo,bhi); ties resolved by the
// smallest start in a, then in b.
Block longest_match(std::string_view a, std::size_t alo, std::size_t ahi, std::string_view b, std::size_t blo,
                    std::size_t bhi) {
  Block best{alo, blo, 0};
  // prev[j] = length of the common suffix ending at a[i-1], b[j-1]
  std::vector<std::size_t> prev(bhi - blo + 1, 0), cur(bhi - blo + 1, 0);
  for (std::size_t i = alo; i < ahi; ++i) {
    for (std::size_t j = blo; j < bhi; ++j) {
      const std::size_t k = j - blo + 1;
      cur[k] = (a[i] == b[j]) ? prev[k - 1] + 1 : 0;
      if (cur[k] > best.len) {
        best = {i + 1 - cur[k], j + 1 - cur[k], cur[k]};
      } else if (cur[k] == best.len && cur[k] > 0) {
        const std::size_t as = i + 1 - cur[k], bs = j + 1 - cur[k];
        if (as < best.a || (as == best.a && bs < best.b)) best = {as, bs, cur[k]};
      }
    }
    std::swap(prev, cur);
    std::fill(cur.begin(), cur.end(), 0);
  }
  return best;
}

std::size_t gestalt(std::string_view a, std::size_t alo, std::size_t ahi, std::string_view b, std::size_t blo,
                    std::size_t bhi) {
  if (alo >= ahi || blo >= bhi) return 0;
  const Block m = longest_match(a, alo, ahi, b, blo, bhi);
  if (m.len == 0) return 0;
  return m.len + gestalt(a, alo, m.a, b, blo, m.b) + gestalt(a, m.a + m.len, ahi, b, m.b + m.len, bhi);
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

}  // namespace

double lcsr(std::string_view a, std::string_view b) {
  require_not_both_empty(a, b, "lcsr");
  return static_cast<double>(lcs_length(a, b)) / static_cast<double>(std::max(a.size(), b.size()));
}

double lexim(std::string_view a, std::string_view b) {
  require_not_both_empty(a, b, "lexim");
  const double r = lcsr(a, b);
  const std::size_t ed = edit_distance(a, b);
  return ed > 0 ? r / static_cast<double>(ed) : r;
}

std::size_t gestalt_matches(std::string_view a, std::string_view b) {
  return gestalt(a, 0, a.size(), b, 0, b.size());
}

double seq_ratio(std::string_view a, std::string_view b) {
  require_not_both_empty(a, b, "seq_ratio");
  return 2.0 * static_cast<double>(gestalt_matches(a, b)) / static_cast<double>(a.size() + b.size());
}

std::string skeletonize(std::string_view word) {
  std::string out;
  for (char c : word) {
    if (is_vowel(c)) continue;
    if (!out.empty() && out.back() == c) continue;
    out.push_back(c);
  }
  return out;
}

std::string ma_soundex(std::string_view word) {
  std::vector<std::string> symbols;
  std::size_t i = 0;
  bool first = true;
  while (i < word.size()) {
    std::string_view unit = word.substr(i, 1);
    if (i + 1 < word.size() && word[i + 1] == 'h' && (word[i] == 'c' || word[i] == 'k' || word[i] == 'g'))
      unit = word.substr(i, 2);
    i += unit.size();

    std::string sym;
    if (first) {
      sym = std::string(unit);
      first = false;
    } else if (unit.size() == 2) {
      sym = unit == "ch" ? "4" : "5";
    } else {
      const char c = unit[0];
      if (is_vowel(c)) continue;
      switch (c) {
        case 'b': case 'f': case 'm': case 'p': case 'v': case 'w': sym = "1"; break;
        case 'd': case 't': case 'l': case 'n': sym = "2"; break;
        case 's': case 'z': sym = "3"; break;
        case 'j': case 'y': sym = "4"; break;
        case 'r': sym = "5"; break;
        default: sym = std::string(1, c); break;
      }
    }
    if (symbols.empty() || symbols.back() != sym) symbols.push_back(std::move(sym));
  }
  std::string out;
  for (const auto& s : symbols) out += s;
  return out;
}

double score(std::string_view a, std::string_view b, ScoreKind kind) {
  if (a.empty() || b.empty()) throw InvalidArgument("score: inputs must be nonempty");
  switch (kind) {
    case ScoreKind::lexim:
      return lexim(a, b);
    case ScoreKind::seqmatch:
      return seq_ratio(a, b);
    case ScoreKind::seqmatch_skeleton: {
      const auto sa = skeletonize(a), sb = skeletonize(b);
      if (sa.empty() || sb.empty()) return seq_ratio(a, b);
      return seq_ratio(sa, sb);
    }
    case ScoreKind::seqmatch_soundex:
      return seq_ratio(ma_soundex(a), ma_soundex(b));
  }
  return 0.0;
}

}  // namespace ary
