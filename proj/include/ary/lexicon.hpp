#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ary/error.hpp"

namespace ary {

enum class PartOfSpeech { noun, verb, adjective, other };
enum class EntryOrigin { converted, sm_augmented, neologism };

std::string to_string(PartOfSpeech p);
std::string to_string(EntryOrigin o);
std::optional<PartOfSpeech> parse_pos(std::string_view s);
std::optional<EntryOrigin> parse_origin(std::string_view s);

struct LexiconEntry {
  std::string canonical;
  std::optional<PartOfSpeech> pos;
  std::string gloss;
  EntryOrigin origin = EntryOrigin::converted;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

/// Canonical word forms, kept sorted by canonical and free of duplicates.
class Lexicon {
 public:
  Lexicon() = default;
  /// Throws InvalidArgument on an invalid or duplicate canonical.
  explicit Lexicon(std::vector<LexiconEntry> entries);

  const std::vector<LexiconEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  bool contains(std::string_view canonical) const;
  const LexiconEntry* find(std::string_view canonical) const;
  std::string fingerprint() const;

  friend bool operator==(const Lexicon&, const Lexicon&) = default;

 private:
  std::vector<LexiconEntry> entries_;
};

/// Unmapped symbol in adapted-IPA input. `position` counts code points.
class ConversionError : public Error {
 public:
  ConversionError(const std::string& symbol, std::size_t position);
  const std::string& symbol() const noexcept { return symbol_; }
  std::size_t position() const noexcept { return position_; }

 private:
  std::string symbol_;
  std::size_t position_;
};

/// Transliterates an adapted-IPA dictionary form into the Latin social-media
/// convention (ḥ→7, ε→3, š→ch, ġ→gh, ḫ/x→kh, û→ou, emphatics to plain...).
std::string convert_adapted_ipa(std::string_view word);

/// Canonical decomposition restricted to the symbols the converter knows.
std::u32string decompose(std::u32string_view s);

/// TSV: canonical<TAB>pos<TAB>gloss<TAB>origin, '#' comment lines. Missing
/// trailing columns take defaults (no pos, empty gloss, converted).
Lexicon load_lexicon(const std::filesystem::path& path);
void save_lexicon(const Lexicon& lexicon, const std::filesystem::path& path);
Lexicon parse_lexicon(std::string_view tsv);
/// Same layout with adapted-IPA canonical forms. Entries that collide after
/// conversion keep the first occurrence and are reported through `warn`.
Lexicon convert_lexicon(std::string_view ipa_tsv, const std::function<void(const std::string&)>& warn = {});
std::string format_lexicon(const Lexicon& lexicon);

/// Share of lexicon entries present in `model_vocab`.
double coverage_in_model(const Lexicon& lexicon, const std::set<std::string, std::less<>>& model_vocab);

}  // namespace ary
