#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ary/corpus.hpp"
#include "ary/evaluate.hpp"
#include "ary/lexicon.hpp"

namespace ary {

/// Planted-variant corpus for end-to-end checks of the dictionary builder.
struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t canonicals = 40;
  std::size_t min_variants = 3;
  std::size_t max_variants = 8;
  std::size_t frames_per_group = 30;
  std::size_t context_words_per_group = 8;
  std::size_t fillers = 24;
  /// One per group, sharing the group's frames.
  std::size_t distractors = 40;
  /// Lexicon entries that never occur in the corpus.
  std::size_t oov_entries = 10;
  /// Upper bound on skeleton similarity between words of different groups.
  double group_separation = 0.6;
  /// Upper bound on skeleton similarity between a distractor, context or
  /// filler word and any canonical or variant.
  double distractor_separation = 0.5;
  /// Thresholds whose half-open bands [t_i, t_i+1) each receive at least one
  /// frequent variant, so a sweep over them changes the output at every step.
  std::vector<double> sweep_bands{0.60, 0.65, 0.70, 0.75, 0.80};
  /// Non-Latin and duplicate comments mixed in for the cleaning step.
  std::size_t noise_comments = 20;

  void validate() const;
};

struct PlantedVariant {
  std::string form;       // as it appears after cleaning
  std::string canonical;
  std::string phenomenon; // vowel-change, vowel-drop, vowel-add, gemination, degemination, consonant-shift
  bool skeleton_equal = false;
  double skeleton_score = 0;  // seqmatch_skeleton against the canonical
  std::size_t count = 0;      // occurrences in the cleaned corpus
  std::optional<std::string> raw_form;  // digit spelling used for some occurrences
};

struct SynthCorpus {
  std::vector<RawComment> comments;
  Lexicon lexicon;
  ReferenceDictionary reference;  // every planted (variant, canonical) pair
  std::vector<PlantedVariant> variants;
  std::vector<std::string> canonicals;  // in the corpus
  std::vector<std::string> distractors;
};

/// Deterministic for a given config.
SynthCorpus generate_synthetic(const SynthConfig& cfg);

/// Writes comments.txt, lexicon.tsv, reference.tsv and variants.tsv into `dir`.
void write_synthetic(const SynthCorpus& s, const std::filesystem::path& dir);

}  // namespace ary
