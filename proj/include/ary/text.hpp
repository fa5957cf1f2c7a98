#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ary {

/// Decodes UTF-8 into code points. Invalid bytes decode to U+FFFD so that
/// noisy input never aborts a pipeline.
std::u32string utf8_decode(std::string_view s);
std::string utf8_encode(std::u32string_view s);
void utf8_append(std::string& out, char32_t cp);

/// True for code points we treat as letters when computing the script ratio.
/// Covers the Latin, Greek, Cyrillic, Armenian, Hebrew, Arabic (all blocks),
/// Syriac, Thaana, Indic, Thai, Georgian, Hangul and CJK letter ranges.
bool is_alphabetic(char32_t cp);

inline bool is_basic_latin_letter(char32_t cp) {
  return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
}

/// Canonical token alphabet shared by corpus, lexicon and dictionary: [a-z37]+.
bool is_token_char(char c);
bool is_valid_token(std::string_view token);

std::vector<std::string> split_whitespace(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// 64-bit FNV-1a, used for content fingerprints.
class Fnv1a64 {
 public:
  void update(std::string_view bytes);
  void update_u64(std::uint64_t v);
  std::uint64_t value() const noexcept { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string fingerprint(std::string_view bytes);

/// Shortest round-trip decimal representation.
std::string format_double(double v);
/// Fixed-point with `digits` decimals ("%.6f" style), locale independent.
std::string format_fixed(double v, int digits);
double parse_double(std::string_view s);
long long parse_int(std::string_view s);

}  // namespace ary
