#include "ary/evaluate.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ary/text.hpp"

namespace ary {

ReferenceDictionary::ReferenceDictionary(std::set<std::pair<std::string, std::string>> pairs)
    : pairs_(std::move(pairs)) {
  for (const auto& [t, c] : pairs_) {
    if (!is_valid_token(t) || !is_valid_token(c))
      throw InvalidArgument("reference pair (" + t + ", " + c + ") is outside the token alphabet");
  }
}

bool ReferenceDictionary::contains(std::string_view translit, std::string_view canonical) const {
  return pairs_.contains({std::string(translit), std::string(canonical)});
}

std::string format_reference(const ReferenceDictionary& ref) {
  std::string out = "translit\tcanonical\n";
  for (const auto& [t, c] : ref.pairs()) out += t + '\t' + c + '\n';
  return out;
}

ReferenceDictionary parse_reference(std::string_view tsv) {
  std::set<std::pair<std::string, std::string>> pairs;
  std::istringstream in{std::string(tsv)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#' || line == "translit\tcanonical") continue;
    auto cols = split(line, '\t');
    if (cols.size() < 2) throw ParseError("expected translit<TAB>canonical", lineno);
    if (!is_valid_token(cols[0]) || !is_valid_token(cols[1]))
      throw ParseError("pair outside the token alphabet", lineno);
    pairs.emplace(cols[0], cols[1]);
  }
  return ReferenceDictionary(std::move(pairs));
}

void save_reference(const ReferenceDictionary& ref, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << format_reference(ref);
}

ReferenceDictionary load_reference(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_reference(ss.str());
}

std::optional<double> precision(const NormalizationDictionary& produced, const ReferenceDictionary& reference) {
  if (produced.empty()) return std::nullopt;
  std::size_t correct = 0;
  for (const auto& p : produced.pairs()) {
    if (reference.contains(p.translit, p.canonical)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(produced.size());
}

double coverage(const NormalizationDictionary& produced, const Lexicon& lexicon) {
  if (lexicon.empty()) throw InvalidArgument("coverage: empty lexicon");
  std::set<std::string_view> covered;
  for (const auto& p : produced.pairs()) {
    if (lexicon.contains(p.canonical)) covered.insert(p.canonical);
  }
  return static_cast<double>(covered.size()) / static_cast<double>(lexicon.size());
}

EvalReport evaluate(const NormalizationDictionary& produced, const ReferenceDictionary& reference,
                    const Lexicon& lexicon) {
  if (lexicon.empty()) throw InvalidArgument("evaluate: empty lexicon");
  EvalReport r;
  r.produced_count = produced.size();
  std::set<std::string_view> covered;
  for (const auto& p : produced.pairs()) {
    if (reference.contains(p.translit, p.canonical)) ++r.correct_count;
    if (lexicon.contains(p.canonical)) covered.insert(p.canonical);
  }
  r.covered_canonicals = covered.size();
  r.lexicon_size = lexicon.size();
  r.precision = precision(produced, reference);
  r.coverage = coverage(produced, lexicon);
  return r;
}

std::vector<ReportRow> threshold_sweep(const std::vector<NeighborTable>& tables, const Lexicon& lexicon,
                                       const ReferenceDictionary& reference, std::vector<double> thresholds,
                                       ScoreKind method) {
  if (thresholds.empty()) throw InvalidArgument("threshold_sweep: no thresholds");
  for (double t : thresholds) {
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("threshold_sweep: threshold outside [0,1]");
  }
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  std::vector<ReportRow> rows;
  for (double t : thresholds) {
    const auto dict = build_from_tables(tables, lexicon, ScoreMethod{method, t});
    rows.push_back({format_fixed(t, 2), evaluate(dict, reference, lexicon)});
  }
  return rows;
}

std::vector<ReportRow> compare_models(const std::vector<NeighborTable>& tables, const Lexicon& lexicon,
                                      const ReferenceDictionary& reference, const ScoreMethod& method) {
  if (tables.empty()) throw InvalidArgument("compare_models: at least one model is required");
  std::vector<ReportRow> rows;
  double best_single = 0;
  for (const auto& t : tables) {
    const auto dict = build_from_tables({t}, lexicon, method);
    rows.push_back({t.model_id, evaluate(dict, reference, lexicon)});
    best_single = std::max(best_single, rows.back().report.coverage);
  }
  const auto merged = build_from_tables(tables, lexicon, method);
  rows.push_back({"merged", evaluate(merged, reference, lexicon)});
  if (rows.back().report.coverage < best_single)
    throw Error("compare_models: merged coverage below a single model's coverage");
  return rows;
}

std::vector<ReportRow> compare_scorers(const std::vector<NeighborTable>& tables, const Lexicon& lexicon,
                                       const ReferenceDictionary& reference, const std::vector<ScoreKind>& methods,
                                       double threshold) {
  if (methods.empty()) throw InvalidArgument("compare_scorers: no methods");
  std::vector<ReportRow> rows;
  for (auto m : methods) {
    const auto dict = build_from_tables(tables, lexicon, ScoreMethod{m, threshold});
    rows.push_back({to_string(m), evaluate(dict, reference, lexicon)});
  }
  return rows;
}

namespace {

std::vector<NeighborTable> tables_for(const std::vector<VectorModel>& models, const Lexicon& lexicon, std::size_t k,
                                      bool subword_oov) {
  if (models.empty()) throw InvalidArgument("at least one model is required");
  std::vector<NeighborTable> tables;
  for (const auto& m : models) tables.push_back(neighbor_table(m, lexicon, k, subword_oov));
  return tables;
}

}  // namespace

std::vector<ReportRow> threshold_sweep(const std::vector<VectorModel>& models, const Lexicon& lexicon,
                                       const ReferenceDictionary& reference, std::vector<double> thresholds,
                                       ScoreKind method, std::size_t k, bool subword_oov) {
  return threshold_sweep(tables_for(models, lexicon, k, subword_oov), lexicon, reference, std::move(thresholds),
                         method);
}

std::vector<ReportRow> compare_models(const std::vector<VectorModel>& models, const Lexicon& lexicon,
                                      const ReferenceDictionary& reference, const ScoreMethod& method, std::size_t k,
                                      bool subword_oov) {
  return compare_models(tables_for(models, lexicon, k, subword_oov), lexicon, reference, method);
}

std::vector<ReportRow> compare_scorers(const std::vector<VectorModel>& models, const Lexicon& lexicon,
                                       const ReferenceDictionary& reference, const std::vector<ScoreKind>& methods,
                                       std::size_t k, double threshold, bool subword_oov) {
  return compare_scorers(tables_for(models, lexicon, k, subword_oov), lexicon, reference, methods, threshold);
}

namespace {

std::string precision_text(const EvalReport& r) { return r.precision ? format_fixed(*r.precision, 3) : "NA"; }

}  // namespace

std::string format_report_tsv(const std::vector<ReportRow>& rows, std::string_view label_header) {
  std::string out(label_header);
  out += "\tprecision\tcoverage\tproduced\tcorrect\tcovered\tlexicon\n";
  for (const auto& [label, r] : rows) {
    out += label + '\t' + precision_text(r) + '\t' + format_fixed(r.coverage, 3) + '\t' +
           std::to_string(r.produced_count) + '\t' + std::to_string(r.correct_count) + '\t' +
           std::to_string(r.covered_canonicals) + '\t' + std::to_string(r.lexicon_size) + '\n';
  }
  return out;
}

std::string format_report_table(const std::vector<ReportRow>& rows, std::string_view label_header) {
  std::size_t width = label_header.size();
  for (const auto& row : rows) width = std::max(width, row.label.size());
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  std::string out = pad(std::string(label_header), width) + "  Precision  Coverage  Pairs\n";
  out += std::string(width, '-') + "  ---------  --------  -----\n";
  for (const auto& [label, r] : rows) {
    out += pad(label, width) + "  " + pad(precision_text(r), 9) + "  " + pad(format_fixed(r.coverage, 3), 8) + "  " +
           std::to_string(r.produced_count) + '\n';
  }
  return out;
}

}  // namespace ary
