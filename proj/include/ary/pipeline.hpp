#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ary/builder.hpp"
#include "ary/corpus.hpp"
#include "ary/embeddings.hpp"
#include "ary/evaluate.hpp"

namespace ary {

/// Comments from a local file (plain text or .jsonl) or, for "http(s)://"
/// and "file://" inputs, from a paginated JSON endpoint.
std::vector<RawComment> load_comments(const std::string& input, std::size_t max_items = 0);

/// ingest -> train (one model per algorithm) -> build -> eval.
struct PipelineConfig {
  std::string input;
  std::filesystem::path lexicon;
  std::filesystem::path reference;
  std::filesystem::path out_dir;
  CleanConfig clean{};
  TrainConfig train{};  // algorithm is overridden per model
  std::vector<Algorithm> algorithms{Algorithm::cbow, Algorithm::skipgram, Algorithm::subword};
  BuildConfig build{};
  /// Single-threaded training and fixed timestamps (SOURCE_DATE_EPOCH or 0).
  bool deterministic = false;
};

/// Writes corpus.txt, stats.tsv, vectors/<algo>.txt, dict.tsv, report.tsv
/// and manifest.json into out_dir; returns the manifest.
nlohmann::ordered_json run_pipeline(const PipelineConfig& cfg, std::ostream* log = nullptr);

/// FNV-1a 64 of a file's bytes, hex.
std::string file_digest(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const CleanConfig& c);
nlohmann::ordered_json to_json(const TrainConfig& c);

}  // namespace ary
