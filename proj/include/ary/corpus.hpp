#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ary {

using CountMap = std::map<std::string, std::size_t, std::less<>>;

struct RawComment {
  std::string id;
  std::string text;
  std::string source;
};

struct Sentence {
  std::vector<std::string> tokens;
  std::string origin_id;

  std::string text() const;
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

/// Where a token occurs: sentence number and token position inside it.
struct Posting {
  std::size_t sentence;
  std::size_t position;
  friend bool operator==(const Posting&, const Posting&) = default;
};

/// Digit substitutions applied inside words. '3' and '7' have no Latin
/// counterpart and are never mapped.
struct DigitRule {
  char from;
  std::string to;
};

std::vector<DigitRule> default_digit_rules();

struct CleanConfig {
  double latin_threshold = 0.5;
  std::size_t max_run = 3;
  std::size_t min_tokens = 2;
  std::vector<DigitRule> digit_rules = default_digit_rules();
  /// 0 = one worker per hardware thread.
  unsigned threads = 0;

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;
};

struct CleanStats {
  std::size_t input_comments = 0;
  std::size_t non_latin = 0;
  std::size_t too_short = 0;
  std::size_t duplicates = 0;
  std::size_t kept = 0;
};

/// Cleaned, tokenized sentences plus vocabulary counts and a positional
/// inverted index. Immutable after construction.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Sentence> sentences);

  const std::vector<Sentence>& sentences() const noexcept { return sentences_; }
  const CountMap& vocab_counts() const noexcept { return counts_; }
  std::size_t size() const noexcept { return sentences_.size(); }
  bool empty() const noexcept { return sentences_.empty(); }
  std::size_t token_count() const noexcept { return tokens_; }
  std::size_t count(std::string_view word) const;

  /// Every occurrence of `word` in corpus order; empty when unseen.
  const std::vector<Posting>& postings(std::string_view word) const;

  /// Content digest over the token sequences.
  std::string fingerprint() const;

 private:
  std::vector<Sentence> sentences_;
  CountMap counts_;
  std::map<std::string, std::vector<Posting>, std::less<>> index_;
  std::size_t tokens_ = 0;
};

bool is_latin_script(std::string_view text, double latin_threshold);

/// Lowercases, removes URLs, @-mentions and hashtags, maps every character
/// outside [a-z0-9 ] to a space, drops all-digit tokens and collapses spaces.
std::string strip_noise(std::string_view text);

/// Runs longer than `max_run` become exactly two characters.
std::string collapse_runs(std::string_view token, std::size_t max_run = 3);

std::string digits_to_letters(std::string_view token,
                              const std::vector<DigitRule>& rules = default_digit_rules());

/// Token-level cleaning shared by corpus building and the normalizer:
/// collapse_runs, digits_to_letters, then removal of characters outside
/// the token alphabet. May return an empty string.
std::string clean_token(std::string_view token, const CleanConfig& cfg);

/// strip_noise + tokenize + clean_token on every token, empty tokens dropped.
std::vector<std::string> clean_tokens(std::string_view text, const CleanConfig& cfg);

Corpus clean_corpus(const std::vector<RawComment>& raw, const CleanConfig& cfg,
                    CleanStats* stats = nullptr);

struct Context {
  const Sentence* sentence;
  std::size_t highlight;
};

std::vector<Context> contexts(const Corpus& corpus, std::string_view word, std::size_t limit);

// File formats.

/// One comment per line (ids are "line-N"), or JSON lines {id, text} when
/// the file name ends in ".jsonl".
std::vector<RawComment> read_comments(const std::filesystem::path& path);

/// One sentence per line, tokens separated by single spaces.
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus read_corpus(const std::filesystem::path& path);

void write_stats(const Corpus& corpus, const CleanStats& stats, const std::filesystem::path& path);

}  // namespace ary
