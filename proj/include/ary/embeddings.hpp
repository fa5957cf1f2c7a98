#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ary/error.hpp"
#include "ary/corpus.hpp"

namespace ary {

enum class Algorithm { cbow, skipgram, subword };

std::string to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view s);

struct TrainConfig {
  Algorithm algorithm = Algorithm::skipgram;
  int dim = 100;
  int window = 7;
  int min_count = 2;
  int epochs = 5;
  int negatives = 5;
  /// 0 selects the per-algorithm default (0.05 for CBOW, 0.025 otherwise).
  double initial_lr = 0.0;
  /// The learning rate decays linearly to initial_lr * min_lr_fraction.
  double min_lr_fraction = 1e-4;
  double subsample_t = 1e-4;
  std::uint64_t seed = 1;
  int subword_min_n = 3;
  int subword_max_n = 6;
  int bucket_count = 200000;
  /// 1 is bit-reproducible; more threads share weights without locks.
  unsigned threads = 1;

  double effective_lr() const noexcept;
  void validate() const;
};

/// Words with count >= min_count, indexed by descending count then
/// lexicographic order.
struct Vocab {
  std::vector<std::string> words;
  std::vector<std::size_t> counts;
  std::unordered_map<std::string, std::int32_t> index;

  std::size_t size() const noexcept { return words.size(); }
  std::optional<std::int32_t> find(std::string_view w) const;
};

Vocab build_vocab(const CountMap& counts, int min_count);

/// Character n-grams of "<word>" with lengths in [min_n, max_n], the
/// full bracketed word excluded.
std::vector<std::string> char_ngrams(std::string_view word, int min_n, int max_n);
std::uint32_t ngram_hash(std::string_view ngram);

/// Hashed n-gram vectors kept by subword models for out-of-vocabulary lookups.
struct SubwordTable {
  int min_n = 3;
  int max_n = 6;
  int bucket_count = 200000;
  std::unordered_map<std::uint32_t, std::int32_t> rows;  // bucket -> row
  std::vector<double> vectors;                           // rows x dim
};

/// Trained word vectors. Immutable; safe for concurrent queries.
class VectorModel {
 public:
  VectorModel(std::string id, std::vector<std::string> words, std::vector<double> vectors, int dim,
              TrainConfig config = {}, std::string corpus_fingerprint = {},
              std::optional<SubwordTable> subwords = std::nullopt);

  const std::string& id() const noexcept { return id_; }
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::string& word(std::size_t i) const { return words_[i]; }
  std::optional<std::size_t> index_of(std::string_view w) const;
  bool contains(std::string_view w) const { return index_of(w).has_value(); }
  std::span<const double> vector(std::size_t i) const;
  std::span<const double> unit_vector(std::size_t i) const;
  const TrainConfig& config() const noexcept { return config_; }
  const std::string& corpus_fingerprint() const noexcept { return fingerprint_; }
  const std::optional<SubwordTable>& subwords() const noexcept { return subwords_; }
  std::set<std::string, std::less<>> vocab_set() const;

  /// Mean of the known n-gram vectors of `w`; nullopt without a subword
  /// table or when no n-gram of `w` was seen in training.
  std::optional<std::vector<double>> compose_oov(std::string_view w) const;

  VectorModel with_id(std::string id) const;

 private:
  std::string id_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> vectors_;
  std::vector<double> unit_;
  int dim_;
  TrainConfig config_;
  std::string fingerprint_;
  std::optional<SubwordTable> subwords_;
};

VectorModel train(const Corpus& corpus, const TrainConfig& cfg, std::string id = {});

/// Sum(u_i v_i) / sqrt(Sum(u_i^2) * Sum(v_i^2)). Throws on a dimension
/// mismatch or a zero vector.
double cosine(std::span<const double> u, std::span<const double> v);

struct Neighbor {
  std::string word;
  double score;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// The k vocabulary words closest to `word` by cosine, query excluded,
/// sorted by score descending then word. With `allow_oov` a subword model
/// composes a vector for an unknown query from its n-grams.
std::vector<Neighbor> most_similar(const VectorModel& model, std::string_view word, std::size_t k,
                                   bool allow_oov = false);

/// Raised when a query word has no vector.
class OutOfVocabulary : public Error {
 public:
  explicit OutOfVocabulary(const std::string& word)
      : Error("word '" + word + "' is not in the model vocabulary"), word_(word) {}
  const std::string& word() const noexcept { return word_; }

 private:
  std::string word_;
};

/// Text format: "<count> <dim>" then "<word> <v1> ... <vD>" per line.
/// Training metadata goes to "<path>.json" and subword n-gram vectors to
/// "<path>.ngrams" when present; load_vectors picks both up if they exist.
void save_vectors(const VectorModel& model, const std::filesystem::path& path);
VectorModel load_vectors(const std::filesystem::path& path, std::string id = {});

/// Negative-sampling objective shared by all three architectures. Exposed
/// for gradient checking.
namespace sgns {

struct Weights {
  int dim = 0;
  std::vector<double> input;   // input rows (words, then n-gram buckets)
  std::vector<double> output;  // output rows (words)
};

/// Hidden vector = mean of the input rows; predicts `target` against
/// `negatives` through the output rows.
struct Example {
  std::vector<std::int32_t> inputs;
  std::int32_t target = 0;
  std::vector<std::int32_t> negatives;
};

/// Gradient of the loss with respect to every distinct row touched.
struct Gradients {
  std::vector<std::int32_t> input_rows;
  std::vector<double> input;  // input_rows.size() x dim
  std::vector<std::int32_t> output_rows;
  std::vector<double> output;  // output_rows.size() x dim
};

/// -log s(h.o_t) - sum_n log s(-h.o_n)
double loss(const Weights& w, const Example& ex);
double compute_gradients(const Weights& w, const Example& ex, Gradients& g);

}  // namespace sgns

}  // namespace ary
