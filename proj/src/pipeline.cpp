#include "ary/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include "ary/error.hpp"
#include "ary/fetch.hpp"
#include "ary/lexicon.hpp"
#include "ary/text.hpp"

namespace ary {

std::vector<RawComment> load_comments(const std::string& input, std::size_t max_items) {
  if (input.starts_with("http://") || input.starts_with("https://") || input.starts_with("file://")) {
    auto source = make_page_source(input);
    return fetch_comments(*source, max_items == 0 ? static_cast<std::size_t>(-1) : max_items);
  }
  auto comments = read_comments(input);
  if (max_items > 0 && comments.size() > max_items) comments.resize(max_items);
  return comments;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  Fnv1a64 h;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    h.update(std::string_view(buf, static_cast<std::size_t>(in.gcount())));
  }
  return h.hex();
}

nlohmann::ordered_json to_json(const CleanConfig& c) {
  nlohmann::ordered_json rules = nlohmann::ordered_json::object();
  for (const auto& r : c.digit_rules) rules[std::string(1, r.from)] = r.to;
  return {{"latin_threshold", c.latin_threshold},
          {"max_run", c.max_run},
          {"min_tokens", c.min_tokens},
          {"digit_rules", rules}};
}

nlohmann::ordered_json to_json(const TrainConfig& c) {
  nlohmann::ordered_json j = {{"algorithm", to_string(c.algorithm)},
                              {"dim", c.dim},
                              {"window", c.window},
                              {"min_count", c.min_count},
                              {"epochs", c.epochs},
                              {"negatives", c.negatives},
                              {"initial_lr", c.effective_lr()},
                              {"min_lr_fraction", c.min_lr_fraction},
                              {"subsample_t", c.subsample_t},
                              {"seed", c.seed}};
  if (c.algorithm == Algorithm::subword) {
    j["subword_min_n"] = c.subword_min_n;
    j["subword_max_n"] = c.subword_max_n;
    j["bucket_count"] = c.bucket_count;
  }
  return j;
}

namespace {

std::string digest_of(const nlohmann::ordered_json& j) { return fingerprint(j.dump()); }

std::string iso_time(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string timestamp(bool deterministic) {
  if (deterministic) {
    std::time_t t = 0;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
      try {
        t = static_cast<std::time_t>(parse_int(env));
      } catch (const Error&) {
        t = 0;
      }
    }
    return iso_time(t);
  }
  return iso_time(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now()));
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << body;
}

}  // namespace

nlohmann::ordered_json run_pipeline(const PipelineConfig& cfg, std::ostream* log) {
  auto say = [&](const std::string& s) {
    if (log) *log << s << '\n';
  };
  const auto started = timestamp(cfg.deterministic);
  std::filesystem::create_directories(cfg.out_dir / "vectors");

  // ingest
  const auto raw = load_comments(cfg.input);
  CleanConfig clean = cfg.clean;
  if (cfg.deterministic) clean.threads = 1;
  CleanStats stats;
  const Corpus corpus = clean_corpus(raw, clean, &stats);
  if (corpus.empty()) throw Error("no sentences left after cleaning " + cfg.input);
  write_corpus(corpus, cfg.out_dir / "corpus.txt");
  write_stats(corpus, stats, cfg.out_dir / "stats.tsv");
  say("ingest: " + std::to_string(corpus.size()) + " sentences, " + std::to_string(corpus.vocab_counts().size()) +
      " unique words");

  const Lexicon lexicon = load_lexicon(cfg.lexicon);
  const ReferenceDictionary reference = load_reference(cfg.reference);

  // train
  std::vector<VectorModel> models;
  nlohmann::ordered_json model_entries = nlohmann::ordered_json::array();
  for (auto algo : cfg.algorithms) {
    TrainConfig tc = cfg.train;
    tc.algorithm = algo;
    if (cfg.deterministic) tc.threads = 1;
    const auto id = to_string(algo);
    models.push_back(train(corpus, tc, id));
    const auto path = cfg.out_dir / "vectors" / (id + ".txt");
    save_vectors(models.back(), path);
    const auto cj = to_json(tc);
    model_entries.push_back({{"id", id},
                             {"config", cj},
                             {"config_digest", digest_of(cj)},
                             {"vectors", "vectors/" + id + ".txt"},
                             {"vectors_digest", file_digest(path)},
                             {"vocabulary", models.back().size()},
                             {"lexicon_coverage", coverage_in_model(lexicon, models.back().vocab_set())}});
    say("train: " + id + ", " + std::to_string(models.back().size()) + " words");
  }

  // build
  BuildConfig bc = cfg.build;
  if (cfg.deterministic) bc.threads = 1;
  std::vector<std::string> warnings;
  const WarningSink warn = [&](const std::string& w) { warnings.push_back(w); };
  std::vector<NeighborTable> tables;
  for (const auto& m : models) tables.push_back(neighbor_table(m, lexicon, bc.k, bc.subword_oov, bc.threads, warn));
  const auto dict = build_from_tables(tables, lexicon, bc.method, warn);
  save_dictionary(dict, cfg.out_dir / "dict.tsv");
  say("build: " + std::to_string(dict.size()) + " pairs, " + std::to_string(conflicts(dict).size()) +
      " conflicting transliterations");

  // eval
  const auto rows = compare_models(tables, lexicon, reference, bc.method);
  write_text(cfg.out_dir / "report.tsv", format_report_tsv(rows, "model"));
  const auto& merged = rows.back().report;

  const auto clean_json = to_json(clean);
  const nlohmann::ordered_json build_json = {{"k", bc.k},
                                             {"method", to_string(bc.method.kind)},
                                             {"threshold", bc.method.threshold},
                                             {"subword_oov", bc.subword_oov}};
  nlohmann::ordered_json manifest = {
      {"tool", "arynorm"},
      {"version", ARY_VERSION},
      {"deterministic", cfg.deterministic},
      {"started_at", started},
      {"corpus",
       {{"input", std::filesystem::path(cfg.input).filename().string()},
        {"input_comments", stats.input_comments},
        {"dropped_non_latin", stats.non_latin},
        {"dropped_too_short", stats.too_short},
        {"dropped_duplicates", stats.duplicates},
        {"sentences", corpus.size()},
        {"tokens", corpus.token_count()},
        {"unique_words", corpus.vocab_counts().size()},
        {"config", clean_json},
        {"config_digest", digest_of(clean_json)},
        {"fingerprint", corpus.fingerprint()},
        {"corpus_digest", file_digest(cfg.out_dir / "corpus.txt")}}},
      {"lexicon", {{"entries", lexicon.size()}, {"fingerprint", lexicon.fingerprint()}}},
      {"models", model_entries},
      {"builder",
       {{"config", build_json},
        {"config_digest", digest_of(build_json)},
        {"pairs", dict.size()},
        {"dictionary_digest", file_digest(cfg.out_dir / "dict.tsv")},
        {"warnings", warnings.size()}}},
      {"evaluation",
       {{"reference_pairs", reference.size()},
        {"reference_digest", file_digest(cfg.reference)},
        {"precision", merged.precision ? nlohmann::ordered_json(*merged.precision) : nlohmann::ordered_json(nullptr)},
        {"coverage", merged.coverage},
        {"report_digest", file_digest(cfg.out_dir / "report.tsv")}}},
      {"finished_at", timestamp(cfg.deterministic)},
  };
  write_text(cfg.out_dir / "manifest.json", manifest.dump(2) + "\n");
  say("eval: precision " + (merged.precision ? format_fixed(*merged.precision, 3) : std::string("NA")) +
      ", coverage " + format_fixed(merged.coverage, 3));
  return manifest;
}

}  // namespace ary
