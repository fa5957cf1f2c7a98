#include "ary/normalizer.hpp"

#include "ary/error.hpp"
#include "ary/text.hpp"

namespace ary {

std::optional<AmbiguityPolicy> parse_policy(std::string_view s) {
  if (s == "leave" || s == "leave-unchanged") return AmbiguityPolicy::leave_unchanged;
  if (s == "most-frequent" || s == "most-frequent-canonical") return AmbiguityPolicy::most_frequent;
  return std::nullopt;
}

Normalizer::Normalizer(const NormalizationDictionary& dict, const Lexicon& lexicon, NormalizePolicy policy,
                       const CountMap* corpus_counts)
    : policy_(std::move(policy)), counts_(corpus_counts) {
  if (policy_.on_ambiguous == AmbiguityPolicy::most_frequent && !counts_)
    throw InvalidArgument("most-frequent ambiguity policy requires corpus counts");
  for (const auto& p : dict.pairs()) targets_[p.translit].insert(p.canonical);
  for (const auto& e : lexicon.entries()) canonicals_.insert(e.canonical);
}

std::string Normalizer::normalize_token(std::string_view token) const {
  if (canonicals_.contains(token)) return std::string(token);
  auto it = targets_.find(token);
  if (it == targets_.end()) return std::string(token);
  const auto& canon = it->second;
  if (canon.size() == 1) return *canon.begin();
  if (policy_.on_ambiguous == AmbiguityPolicy::leave_unchanged) return std::string(token);

  // Highest corpus count; the set is ordered, so ties resolve lexicographically.
  const std::string* best = nullptr;
  std::size_t best_count = 0;
  for (const auto& c : canon) {
    auto ct = counts_->find(c);
    const std::size_t n = ct == counts_->end() ? 0 : ct->second;
    if (!best || n > best_count) {
      best = &c;
      best_count = n;
    }
  }
  return *best;
}

std::string Normalizer::normalize_text(std::string_view text) const {
  const auto tokens = policy_.preprocess ? clean_tokens(text, policy_.clean) : split_whitespace(text);
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += normalize_token(t);
  }
  return out;
}

void Normalizer::normalize_stream(std::istream& in, std::ostream& out) const {
  std::string line;
  while (std::getline(in, line)) out << normalize_text(line) << '\n';
}

std::string normalize_token(const NormalizationDictionary& dict, const Lexicon& lexicon, std::string_view token,
                            const NormalizePolicy& policy, const CountMap* corpus_counts) {
  return Normalizer(dict, lexicon, policy, corpus_counts).normalize_token(token);
}

std::string normalize_text(const NormalizationDictionary& dict, const Lexicon& lexicon, std::string_view text,
                           const NormalizePolicy& policy, const CountMap* corpus_counts) {
  return Normalizer(dict, lexicon, policy, corpus_counts).normalize_text(text);
}

}  // namespace ary
