#include "ary/builder.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "ary/text.hpp"

namespace ary {

NormalizationDictionary::NormalizationDictionary(std::vector<CandidatePair> pairs, BuildInfo info)
    : info_(std::move(info)) {
  std::map<std::pair<std::string, std::string>, CandidatePair> merged;
  for (auto& p : pairs) {
    auto key = std::make_pair(p.translit, p.canonical);
    auto it = merged.find(key);
    if (it == merged.end()) {
      merged.emplace(std::move(key), std::move(p));
      continue;
    }
    auto& m = it->second;
    m.sources.insert(p.sources.begin(), p.sources.end());
    m.semantic_score = std::max(m.semantic_score, p.semantic_score);
    m.lexical_score = std::max(m.lexical_score, p.lexical_score);
  }
  pairs_.reserve(merged.size());
  for (auto& [key, p] : merged) pairs_.push_back(std::move(p));
}

const CandidatePair* NormalizationDictionary::find(std::string_view translit, std::string_view canonical) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), std::make_pair(translit, canonical),
                             [](const CandidatePair& p, const std::pair<std::string_view, std::string_view>& k) {
                               return std::tie(p.translit, p.canonical) < std::tie(k.first, k.second);
                             });
  if (it != pairs_.end() && it->translit == translit && it->canonical == canonical) return &*it;
  return nullptr;
}

std::set<std::pair<std::string, std::string>> NormalizationDictionary::pair_set() const {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& p : pairs_) out.emplace(p.translit, p.canonical);
  return out;
}

std::vector<CandidatePair> filter_neighbors(const std::vector<Neighbor>& neighbors, std::string_view canonical,
                                            const ScoreMethod& method, const std::string& model_id) {
  std::vector<CandidatePair> out;
  for (const auto& n : neighbors) {
    if (n.word == canonical || n.word.empty()) continue;
    const double s = score(n.word, canonical, method.kind);
    if (!method.accepts(s)) continue;
    out.push_back({n.word, std::string(canonical), n.score, s, {model_id}});
  }
  return out;
}

namespace {

std::optional<std::vector<Neighbor>> neighbors_or_skip(const VectorModel& model, std::string_view canonical,
                                                       std::size_t k, bool subword_oov, const WarningSink& warn) {
  try {
    return most_similar(model, canonical, k, subword_oov);
  } catch (const OutOfVocabulary&) {
    if (warn) warn("model " + model.id() + ": canonical '" + std::string(canonical) + "' not in vocabulary, skipped");
    return std::nullopt;
  }
}

}  // namespace

std::vector<CandidatePair> candidates_for(const VectorModel& model, std::string_view canonical, std::size_t k,
                                          const ScoreMethod& method, bool subword_oov, const WarningSink& warn) {
  if (k < 1) throw InvalidArgument("candidates_for: k must be >= 1");
  auto neighbors = neighbors_or_skip(model, canonical, k, subword_oov, warn);
  if (!neighbors) return {};
  return filter_neighbors(*neighbors, canonical, method, model.id());
}

NeighborTable neighbor_table(const VectorModel& model, const Lexicon& lexicon, std::size_t k, bool subword_oov,
                             unsigned threads, const WarningSink& warn) {
  if (k < 1) throw InvalidArgument("neighbor_table: k must be >= 1");
  const auto& entries = lexicon.entries();
  std::vector<std::optional<std::vector<Neighbor>>> results(entries.size());

  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(entries.size(), 1)));
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < entries.size(); i += workers) {
      try {
        results[i] = most_similar(model, entries[i].canonical, k, subword_oov);
      } catch (const OutOfVocabulary&) {
        results[i].reset();
      }
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  NeighborTable table;
  table.model_id = model.id();
  table.k = k;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (results[i]) {
      table.by_canonical.emplace(entries[i].canonical, std::move(*results[i]));
    } else if (warn) {
      warn("model " + model.id() + ": canonical '" + entries[i].canonical + "' not in vocabulary, skipped");
    }
  }
  return table;
}

NormalizationDictionary build_from_tables(const std::vector<NeighborTable>& tables, const Lexicon& lexicon,
                                          const ScoreMethod& method, const WarningSink& warn) {
  std::vector<CandidatePair> all;
  BuildInfo info;
  info.method = method;
  info.lexicon_fingerprint = lexicon.fingerprint();
  for (const auto& t : tables) {
    info.model_ids.push_back(t.model_id);
    info.k = t.k;
    for (const auto& e : lexicon.entries()) {
      auto it = t.by_canonical.find(e.canonical);
      if (it == t.by_canonical.end()) continue;
      auto c = filter_neighbors(it->second, e.canonical, method, t.model_id);
      all.insert(all.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
    }
  }
  NormalizationDictionary dict(std::move(all), std::move(info));
  if (dict.empty() && warn) warn("build produced no candidate pairs");
  return dict;
}

NormalizationDictionary build_dictionary(const std::vector<VectorModel>& models, const Lexicon& lexicon,
                                         const BuildConfig& cfg, const WarningSink& warn) {
  if (models.empty()) throw InvalidArgument("build_dictionary: at least one model is required");
  if (lexicon.empty()) throw InvalidArgument("build_dictionary: empty lexicon");
  std::vector<NeighborTable> tables;
  for (const auto& m : models) tables.push_back(neighbor_table(m, lexicon, cfg.k, cfg.subword_oov, cfg.threads, warn));
  return build_from_tables(tables, lexicon, cfg.method, warn);
}

std::map<std::string, std::set<std::string>> conflicts(const NormalizationDictionary& dict) {
  std::map<std::string, std::set<std::string>> by_translit;
  for (const auto& p : dict.pairs()) by_translit[p.translit].insert(p.canonical);
  std::erase_if(by_translit, [](const auto& kv) { return kv.second.size() < 2; });
  return by_translit;
}

// ---------------------------------------------------------------------------
// TSV

namespace {
constexpr std::string_view kHeader = "translit\tcanonical\tsemantic_score\tlexical_score\tsources";
}

std::string format_dictionary(const NormalizationDictionary& dict) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& p : dict.pairs()) {
    out += p.translit;
    out += '\t';
    out += p.canonical;
    out += '\t';
    out += format_fixed(p.semantic_score, 6);
    out += '\t';
    out += format_fixed(p.lexical_score, 6);
    out += '\t';
    out += join(std::vector<std::string>(p.sources.begin(), p.sources.end()), ",");
    out += '\n';
  }
  return out;
}

NormalizationDictionary parse_dictionary(std::string_view tsv) {
  std::vector<CandidatePair> pairs;
  std::istringstream in{std::string(tsv)};
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  std::set<std::pair<std::string, std::string>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line == kHeader) continue;
    }
    auto cols = split(line, '\t');
    if (cols.size() != 5)
      throw ParseError("expected 5 tab-separated fields, got " + std::to_string(cols.size()), lineno);
    CandidatePair p;
    p.translit = cols[0];
    p.canonical = cols[1];
    if (!is_valid_token(p.translit)) throw ParseError("invalid transliteration '" + p.translit + "'", lineno);
    if (!is_valid_token(p.canonical)) throw ParseError("invalid canonical '" + p.canonical + "'", lineno);
    if (p.translit == p.canonical) throw ParseError("identity pair '" + p.translit + "'", lineno);
    try {
      p.semantic_score = parse_double(cols[2]);
      p.lexical_score = parse_double(cols[3]);
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), lineno);
    }
    for (auto& s : split(cols[4], ',')) {
      if (!s.empty()) p.sources.insert(std::move(s));
    }
    if (p.sources.empty()) throw ParseError("pair has no source model", lineno);
    if (!seen.emplace(p.translit, p.canonical).second)
      throw ParseError("duplicate pair '" + p.translit + "' -> '" + p.canonical + "'", lineno);
    pairs.push_back(std::move(p));
  }
  return NormalizationDictionary(std::move(pairs));
}

void save_dictionary(const NormalizationDictionary& dict, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << format_dictionary(dict);
}

NormalizationDictionary load_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dictionary(ss.str());
}

}  // namespace ary
