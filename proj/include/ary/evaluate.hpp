#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ary/builder.hpp"

namespace ary {

/// Human-validated (translit, canonical) pairs.
class ReferenceDictionary {
 public:
  ReferenceDictionary() = default;
  explicit ReferenceDictionary(std::set<std::pair<std::string, std::string>> pairs);

  const std::set<std::pair<std::string, std::string>>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool contains(std::string_view translit, std::string_view canonical) const;

  friend bool operator==(const ReferenceDictionary&, const ReferenceDictionary&) = default;

 private:
  std::set<std::pair<std::string, std::string>> pairs_;
};

/// TSV with header "translit<TAB>canonical".
std::string format_reference(const ReferenceDictionary& ref);
ReferenceDictionary parse_reference(std::string_view tsv);
void save_reference(const ReferenceDictionary& ref, const std::filesystem::path& path);
ReferenceDictionary load_reference(const std::filesystem::path& path);

struct EvalReport {
  /// Undefined (nullopt) when nothing was produced.
  std::optional<double> precision;
  double coverage = 0;
  std::size_t produced_count = 0;
  std::size_t correct_count = 0;
  std::size_t covered_canonicals = 0;
  std::size_t lexicon_size = 0;
};

std::optional<double> precision(const NormalizationDictionary& produced, const ReferenceDictionary& reference);
double coverage(const NormalizationDictionary& produced, const Lexicon& lexicon);
EvalReport evaluate(const NormalizationDictionary& produced, const ReferenceDictionary& reference,
                    const Lexicon& lexicon);

struct ReportRow {
  std::string label;
  EvalReport report;
};

/// One merged build per threshold, rows in ascending threshold order.
std::vector<ReportRow> threshold_sweep(const std::vector<NeighborTable>& tables, const Lexicon& lexicon,
                                       const ReferenceDictionary& reference, std::vector<double> thresholds,
                                       ScoreKind method);

/// One row per model, then "merged".
std::vector<ReportRow> compare_models(const std::vector<NeighborTable>& tables, const Lexicon& lexicon,
                                      const ReferenceDictionary& reference, const ScoreMethod& method);

/// One merged build per scoring method.
std::vector<ReportRow> compare_scorers(const std::vector<NeighborTable>& tables, const Lexicon& lexicon,
                                       const ReferenceDictionary& reference, const std::vector<ScoreKind>& methods,
                                       double threshold);

/// Convenience overloads computing the neighbor tables from models.
std::vector<ReportRow> threshold_sweep(const std::vector<VectorModel>& models, const Lexicon& lexicon,
                                       const ReferenceDictionary& reference, std::vector<double> thresholds,
                                       ScoreKind method, std::size_t k, bool subword_oov = false);
std::vector<ReportRow> compare_models(const std::vector<VectorModel>& models, const Lexicon& lexicon,
                                      const ReferenceDictionary& reference, const ScoreMethod& method,
                                      std::size_t k, bool subword_oov = false);
std::vector<ReportRow> compare_scorers(const std::vector<VectorModel>& models, const Lexicon& lexicon,
                                       const ReferenceDictionary& reference, const std::vector<ScoreKind>& methods,
                                       std::size_t k, double threshold, bool subword_oov = false);

/// "label<TAB>precision<TAB>coverage<TAB>produced<TAB>correct<TAB>covered<TAB>lexicon"
/// with precision "NA" when undefined.
std::string format_report_tsv(const std::vector<ReportRow>& rows, std::string_view label_header);
/// Space-aligned table for terminals.
std::string format_report_table(const std::vector<ReportRow>& rows, std::string_view label_header);

}  // namespace ary
