#include "ary/embeddings.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "ary/error.hpp"
#include "ary/text.hpp"

namespace ary {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::cbow: return "cbow";
    case Algorithm::skipgram: return "skipgram";
    case Algorithm::subword: return "subword";
  }
  return "skipgram";
}

std::optional<Algorithm> parse_algorithm(std::string_view s) {
  if (s == "cbow") return Algorithm::cbow;
  if (s == "skipgram") return Algorithm::skipgram;
  if (s == "subword") return Algorithm::subword;
  return std::nullopt;
}

double TrainConfig::effective_lr() const noexcept {
  if (initial_lr > 0) return initial_lr;
  return algorithm == Algorithm::cbow ? 0.05 : 0.025;
}

void TrainConfig::validate() const {
  if (dim < 1) throw InvalidArgument("dim must be >= 1");
  if (window < 1) throw InvalidArgument("window must be >= 1");
  if (min_count < 1) throw InvalidArgument("min_count must be >= 1");
  if (epochs < 1) throw InvalidArgument("epochs must be >= 1");
  if (negatives < 0) throw InvalidArgument("negatives must be >= 0");
  if (initial_lr < 0) throw InvalidArgument("initial_lr must be positive");
  if (!(min_lr_fraction >= 0 && min_lr_fraction <= 1)) throw InvalidArgument("min_lr_fraction must be in [0,1]");
  if (subsample_t < 0) throw InvalidArgument("subsample_t must be >= 0");
  if (threads < 1) throw InvalidArgument("threads must be >= 1");
  if (algorithm == Algorithm::subword) {
    if (subword_min_n < 1 || subword_max_n < 1) throw InvalidArgument("subword n-gram sizes must be >= 1");
    if (subword_min_n > subword_max_n) throw InvalidArgument("subword_min_n must be <= subword_max_n");
    if (bucket_count < 1) throw InvalidArgument("bucket_count must be >= 1");
  }
}

std::optional<std::int32_t> Vocab::find(std::string_view w) const {
  auto it = index.find(std::string(w));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

Vocab build_vocab(const CountMap& counts, int min_count) {
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (const auto& [w, c] : counts) {
    if (c >= static_cast<std::size_t>(min_count)) kept.emplace_back(w, c);
  }
  if (kept.empty())
    throw InvalidArgument("empty vocabulary: no word occurs at least " + std::to_string(min_count) + " times");
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocab v;
  for (auto& [w, c] : kept) {
    v.index.emplace(w, static_cast<std::int32_t>(v.words.size()));
    v.words.push_back(std::move(w));
    v.counts.push_back(c);
  }
  return v;
}

std::vector<std::string> char_ngrams(std::string_view word, int min_n, int max_n) {
  const std::string wrapped = "<" + std::string(word) + ">";
  std::vector<std::string> out;
  for (std::size_t i = 0; i < wrapped.size(); ++i) {
    for (int n = min_n; n <= max_n; ++n) {
      if (i + static_cast<std::size_t>(n) > wrapped.size()) break;
      if (i == 0 && static_cast<std::size_t>(n) == wrapped.size()) continue;
      out.push_back(wrapped.substr(i, static_cast<std::size_t>(n)));
    }
  }
  return out;
}

std::uint32_t ngram_hash(std::string_view ngram) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : ngram) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

// ---------------------------------------------------------------------------
// VectorModel

VectorModel::VectorModel(std::string id, std::vector<std::string> words, std::vector<double> vectors, int dim,
                         TrainConfig config, std::string corpus_fingerprint, std::optional<SubwordTable> subwords)
    : id_(std::move(id)),
      words_(std::move(words)),
      vectors_(std::move(vectors)),
      dim_(dim),
      config_(config),
      fingerprint_(std::move(corpus_fingerprint)),
      subwords_(std::move(subwords)) {
  if (dim_ < 1) throw InvalidArgument("vector dimension must be >= 1");
  if (vectors_.size() != words_.size() * static_cast<std::size_t>(dim_))
    throw InvalidArgument("vector storage does not match vocabulary size x dimension");
  config_.dim = dim_;
  unit_.resize(vectors_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) throw InvalidArgument("duplicate word '" + words_[i] + "'");
    const auto v = vector(i);
    double norm = 0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (int d = 0; d < dim_; ++d) unit_[i * dim_ + d] = norm > 0 ? v[d] / norm : 0.0;
  }
}

std::optional<std::size_t> VectorModel::index_of(std::string_view w) const {
  auto it = index_.find(std::string(w));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> VectorModel::vector(std::size_t i) const {
  return {vectors_.data() + i * dim_, static_cast<std::size_t>(dim_)};
}

std::span<const double> VectorModel::unit_vector(std::size_t i) const {
  return {unit_.data() + i * dim_, static_cast<std::size_t>(dim_)};
}

std::set<std::string, std::less<>> VectorModel::vocab_set() const { return {words_.begin(), words_.end()}; }

std::optional<std::vector<double>> VectorModel::compose_oov(std::string_view w) const {
  if (!subwords_) return std::nullopt;
  std::vector<double> acc(dim_, 0.0);
  std::size_t n = 0;
  for (const auto& g : char_ngrams(w, subwords_->min_n, subwords_->max_n)) {
    const auto bucket = ngram_hash(g) % static_cast<std::uint32_t>(subwords_->bucket_count);
    auto it = subwords_->rows.find(bucket);
    if (it == subwords_->rows.end()) continue;
    const double* row = subwords_->vectors.data() + static_cast<std::size_t>(it->second) * dim_;
    for (int d = 0; d < dim_; ++d) acc[d] += row[d];
    ++n;
  }
  if (n == 0) return std::nullopt;
  for (double& x : acc) x /= static_cast<double>(n);
  return acc;
}

VectorModel VectorModel::with_id(std::string id) const {
  VectorModel copy = *this;
  copy.id_ = std::move(id);
  return copy;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw InvalidArgument("cosine: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                          std::to_string(v.size()) + ")");
  double dot = 0, nu = 0, nv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0 || nv == 0) throw InvalidArgument("cosine: zero vector");
  return dot / std::sqrt(nu * nv);
}

std::vector<Neighbor> most_similar(const VectorModel& model, std::string_view word, std::size_t k, bool allow_oov) {
  const auto self = model.index_of(word);
  std::vector<double> query;
  if (self) {
    const auto u = model.unit_vector(*self);
    query.assign(u.begin(), u.end());
  } else {
    std::optional<std::vector<double>> composed;
    if (allow_oov) composed = model.compose_oov(word);
    if (!composed) throw OutOfVocabulary(std::string(word));
    double norm = 0;
    for (double x : *composed) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0) throw OutOfVocabulary(std::string(word));
    for (double& x : *composed) x /= norm;
    query = std::move(*composed);
  }
  if (k == 0) return {};

  std::vector<Neighbor> all;
  all.reserve(model.size());
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (self && i == *self) continue;
    const auto u = model.unit_vector(i);
    double dot = 0;
    for (int d = 0; d < model.dim(); ++d) dot += query[d] * u[d];
    all.push_back({model.word(i), dot});
  }
  const auto better = [](const Neighbor& a, const Neighbor& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.word < b.word;
  };
  const std::size_t n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n), all.end(), better);
  all.resize(n);
  return all;
}

// ---------------------------------------------------------------------------
// Negative-sampling objective

namespace sgns {
namespace {

template <bool Shared>
inline double load(const double& x) {
  if constexpr (Shared) {
    return std::atomic_ref<double>(const_cast<double&>(x)).load(std::memory_order_relaxed);
  } else {
    return x;
  }
}

template <bool Shared>
inline void add(double& x, double delta) {
  if constexpr (Shared) {
    std::atomic_ref<double> r(x);
    r.store(r.load(std::memory_order_relaxed) + delta, std::memory_order_relaxed);
  } else {
    x += delta;
  }
}

inline double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::size_t slot(std::vector<std::int32_t>& rows, std::int32_t r) {
  auto it = std::find(rows.begin(), rows.end(), r);
  if (it != rows.end()) return static_cast<std::size_t>(it - rows.begin());
  rows.push_back(r);
  return rows.size() - 1;
}

template <bool Shared>
double compute(const double* in, const double* out, int dim, const Example& ex, Gradients& g,
               std::vector<double>& hidden) {
  const std::size_t D = static_cast<std::size_t>(dim);
  hidden.assign(D, 0.0);
  for (auto r : ex.inputs) {
    const double* row = in + static_cast<std::size_t>(r) * D;
    for (std::size_t d = 0; d < D; ++d) hidden[d] += load<Shared>(row[d]);
  }
  const double inv_n = 1.0 / static_cast<double>(ex.inputs.size());
  for (double& x : hidden) x *= inv_n;

  g.output_rows.clear();
  g.output.clear();
  g.input_rows.clear();
  g.input.clear();
  std::vector<double> grad_hidden(D, 0.0);
  double loss = 0;

  auto visit = [&](std::int32_t r, double label) {
    const double* row = out + static_cast<std::size_t>(r) * D;
    double dot = 0;
    for (std::size_t d = 0; d < D; ++d) dot += hidden[d] * load<Shared>(row[d]);
    loss -= label > 0 ? log_sigmoid(dot) : log_sigmoid(-dot);
    const double coef = sigmoid(dot) - label;
    const std::size_t s = slot(g.output_rows, r);
    g.output.resize(g.output_rows.size() * D, 0.0);
    double* go = g.output.data() + s * D;
    for (std::size_t d = 0; d < D; ++d) {
      go[d] += coef * hidden[d];
      grad_hidden[d] += coef * load<Shared>(row[d]);
    }
  };
  visit(ex.target, 1.0);
  for (auto r : ex.negatives) {
    if (r == ex.target) continue;
    visit(r, 0.0);
  }

  for (auto r : ex.inputs) {
    const std::size_t s = slot(g.input_rows, r);
    g.input.resize(g.input_rows.size() * D, 0.0);
    double* gi = g.input.data() + s * D;
    for (std::size_t d = 0; d < D; ++d) gi[d] += grad_hidden[d] * inv_n;
  }
  return loss;
}

}  // namespace

double loss(const Weights& w, const Example& ex) {
  Gradients scratch;
  std::vector<double> hidden;
  return compute<false>(w.input.data(), w.output.data(), w.dim, ex, scratch, hidden);
}

double compute_gradients(const Weights& w, const Example& ex, Gradients& g) {
  if (ex.inputs.empty()) throw InvalidArgument("example has no input rows");
  std::vector<double> hidden;
  return compute<false>(w.input.data(), w.output.data(), w.dim, ex, g, hidden);
}

}  // namespace sgns

// ---------------------------------------------------------------------------
// Trainer

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

class NegativeSampler {
 public:
  explicit NegativeSampler(const std::vector<std::size_t>& counts) {
    cumulative_.reserve(counts.size());
    double acc = 0;
    for (auto c : counts) {
      acc += std::pow(static_cast<double>(c), 0.75);
      cumulative_.push_back(acc);
    }
  }

  std::int32_t sample(Rng& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::int32_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

struct TrainState {
  const TrainConfig& cfg;
  const Vocab& vocab;
  std::vector<std::vector<std::int32_t>> sentences;
  std::vector<std::vector<std::int32_t>> word_inputs;  // input rows representing each word
  std::vector<double> keep_prob;
  sgns::Weights weights;
  NegativeSampler sampler;
  std::uint64_t total_steps = 0;
  std::atomic<std::uint64_t> processed{0};
};

template <bool Shared>
void apply(sgns::Weights& w, const sgns::Gradients& g, double lr_in, double lr_out) {
  const std::size_t D = static_cast<std::size_t>(w.dim);
  for (std::size_t s = 0; s < g.output_rows.size(); ++s) {
    double* row = w.output.data() + static_cast<std::size_t>(g.output_rows[s]) * D;
    for (std::size_t d = 0; d < D; ++d) sgns::add<Shared>(row[d], -lr_out * g.output[s * D + d]);
  }
  for (std::size_t s = 0; s < g.input_rows.size(); ++s) {
    double* row = w.input.data() + static_cast<std::size_t>(g.input_rows[s]) * D;
    for (std::size_t d = 0; d < D; ++d) sgns::add<Shared>(row[d], -lr_in * g.input[s * D + d]);
  }
}

template <bool Shared>
void run_worker(TrainState& st, unsigned thread, unsigned threads) {
  const auto& cfg = st.cfg;
  Rng rng(cfg.seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL * (thread + 1));
  const double lr0 = cfg.effective_lr();
  sgns::Gradients grads;
  std::vector<double> hidden;
  sgns::Example ex;
  std::vector<std::int32_t> kept;

  auto step = [&](double lr) {
    ex.negatives.clear();
    for (int n = 0; n < cfg.negatives; ++n) ex.negatives.push_back(st.sampler.sample(rng));
    sgns::compute<Shared>(st.weights.input.data(), st.weights.output.data(), st.weights.dim, ex, grads, hidden);
    // Each input row moves by the full hidden-layer gradient, as in the
    // reference implementations; output rows take a plain SGD step.
    apply<Shared>(st.weights, grads, lr * static_cast<double>(ex.inputs.size()), lr);
  };

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t si = thread; si < st.sentences.size(); si += threads) {
      const auto& sent = st.sentences[si];
      kept.clear();
      for (auto w : sent) {
        if (st.keep_prob[w] >= 1.0 || rng.uniform() < st.keep_prob[w]) kept.push_back(w);
      }
      const auto done = st.processed.fetch_add(sent.size(), std::memory_order_relaxed);
      const double progress = static_cast<double>(done) / static_cast<double>(st.total_steps + 1);
      const double lr = lr0 * std::max(cfg.min_lr_fraction, 1.0 - progress);

      for (std::size_t pos = 0; pos < kept.size(); ++pos) {
        const auto reach = static_cast<std::size_t>(cfg.window) - rng.below(static_cast<std::size_t>(cfg.window));
        const std::size_t lo = pos >= reach ? pos - reach : 0;
        const std::size_t hi = std::min(kept.size() - 1, pos + reach);
        if (cfg.algorithm == Algorithm::cbow) {
          ex.inputs.clear();
          for (std::size_t c = lo; c <= hi; ++c) {
            if (c != pos) ex.inputs.push_back(kept[c]);
          }
          if (ex.inputs.empty()) continue;
          ex.target = kept[pos];
          step(lr);
        } else {
          for (std::size_t c = lo; c <= hi; ++c) {
            if (c == pos) continue;
            ex.inputs = st.word_inputs[kept[pos]];
            ex.target = kept[c];
            step(lr);
          }
        }
      }
    }
  }
}

}  // namespace

VectorModel train(const Corpus& corpus, const TrainConfig& cfg, std::string id) {
  cfg.validate();
  if (corpus.empty()) throw InvalidArgument("train: empty corpus");
  const Vocab vocab = build_vocab(corpus.vocab_counts(), cfg.min_count);
  const std::size_t V = vocab.size();
  const std::size_t D = static_cast<std::size_t>(cfg.dim);

  std::vector<std::vector<std::int32_t>> sentences;
  std::uint64_t train_words = 0;
  for (const auto& s : corpus.sentences()) {
    std::vector<std::int32_t> ids;
    for (const auto& t : s.tokens) {
      if (auto i = vocab.find(t)) ids.push_back(*i);
    }
    train_words += ids.size();
    if (ids.size() >= 2) sentences.push_back(std::move(ids));
  }
  if (train_words < static_cast<std::uint64_t>(2 * cfg.window + 1))
    throw InvalidArgument("train: corpus has " + std::to_string(train_words) +
                          " in-vocabulary tokens, fewer than one full window (" +
                          std::to_string(2 * cfg.window + 1) + ")");

  // Input rows: one per word, then one per n-gram bucket in first-use order.
  std::vector<std::vector<std::int32_t>> word_inputs(V);
  SubwordTable table;
  std::vector<std::uint32_t> bucket_order;
  if (cfg.algorithm == Algorithm::subword) {
    table.min_n = cfg.subword_min_n;
    table.max_n = cfg.subword_max_n;
    table.bucket_count = cfg.bucket_count;
  }
  for (std::size_t w = 0; w < V; ++w) {
    word_inputs[w].push_back(static_cast<std::int32_t>(w));
    if (cfg.algorithm != Algorithm::subword) continue;
    for (const auto& g : char_ngrams(vocab.words[w], cfg.subword_min_n, cfg.subword_max_n)) {
      const auto bucket = ngram_hash(g) % static_cast<std::uint32_t>(cfg.bucket_count);
      auto [it, inserted] = table.rows.emplace(bucket, static_cast<std::int32_t>(bucket_order.size()));
      if (inserted) bucket_order.push_back(bucket);
      word_inputs[w].push_back(static_cast<std::int32_t>(V) + it->second);
    }
  }
  const std::size_t input_rows = V + bucket_order.size();

  Rng init(cfg.seed);
  sgns::Weights weights;
  weights.dim = cfg.dim;
  weights.input.resize(input_rows * D);
  for (double& x : weights.input) x = (init.uniform() - 0.5) / static_cast<double>(D);
  weights.output.assign(V * D, 0.0);

  std::vector<double> keep(V, 1.0);
  if (cfg.subsample_t > 0) {
    const double threshold = cfg.subsample_t * static_cast<double>(train_words);
    for (std::size_t w = 0; w < V; ++w) {
      const double c = static_cast<double>(vocab.counts[w]);
      keep[w] = (std::sqrt(c / threshold) + 1.0) * threshold / c;
    }
  }

  TrainState st{cfg, vocab, std::move(sentences), std::move(word_inputs), std::move(keep), std::move(weights),
                NegativeSampler(vocab.counts)};
  st.total_steps = train_words * static_cast<std::uint64_t>(cfg.epochs);

  if (cfg.threads <= 1) {
    run_worker<false>(st, 0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < cfg.threads; ++t) pool.emplace_back([&st, t, &cfg] { run_worker<true>(st, t, cfg.threads); });
  }

  std::vector<double> vectors(V * D, 0.0);
  for (std::size_t w = 0; w < V; ++w) {
    const auto& rows = st.word_inputs[w];
    for (auto r : rows) {
      const double* src = st.weights.input.data() + static_cast<std::size_t>(r) * D;
      for (std::size_t d = 0; d < D; ++d) vectors[w * D + d] += src[d];
    }
    for (std::size_t d = 0; d < D; ++d) {
      vectors[w * D + d] /= static_cast<double>(rows.size());
      if (!std::isfinite(vectors[w * D + d]))
        throw Error("train: non-finite vector component for '" + vocab.words[w] + "'");
    }
  }

  std::optional<SubwordTable> subwords;
  if (cfg.algorithm == Algorithm::subword) {
    table.vectors.assign(st.weights.input.begin() + static_cast<std::ptrdiff_t>(V * D), st.weights.input.end());
    subwords = std::move(table);
  }
  if (id.empty()) id = to_string(cfg.algorithm);
  return VectorModel(std::move(id), vocab.words, std::move(vectors), cfg.dim, cfg, corpus.fingerprint(),
                     std::move(subwords));
}

// ---------------------------------------------------------------------------
// Text vector format

namespace {

void write_matrix(std::ostream& out, const std::vector<std::string>& labels, const std::vector<double>& data, int dim) {
  out << labels.size() << ' ' << dim << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << labels[i];
    for (int d = 0; d < dim; ++d) out << ' ' << format_double(data[i * dim + d]);
    out << '\n';
  }
}

struct Matrix {
  std::vector<std::string> labels;
  std::vector<double> data;
  int dim = 0;
};

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  Matrix m;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  ++lineno;
  auto header = split_whitespace(line);
  long long count = 0, dim = 0;
  try {
    if (header.size() != 2) throw InvalidArgument("");
    count = parse_int(header[0]);
    dim = parse_int(header[1]);
  } catch (const InvalidArgument&) {
    throw ParseError("header must be '<count> <dim>'", lineno);
  }
  if (count < 0 || dim < 1) throw ParseError("header must be '<count> <dim>' with dim >= 1", lineno);
  m.dim = static_cast<int>(dim);
  m.labels.reserve(static_cast<std::size_t>(count));
  m.data.reserve(static_cast<std::size_t>(count * dim));
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_whitespace(line);
    if (fields.size() != static_cast<std::size_t>(dim) + 1)
      throw ParseError("expected word and " + std::to_string(dim) + " components, got " +
                           std::to_string(fields.size() ? fields.size() - 1 : 0) + " components",
                       lineno);
    if (m.labels.size() == static_cast<std::size_t>(count))
      throw ParseError("more rows than the header count " + std::to_string(count), lineno);
    m.labels.push_back(fields[0]);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      try {
        m.data.push_back(parse_double(fields[k]));
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), lineno);
      }
    }
  }
  if (m.labels.size() != static_cast<std::size_t>(count))
    throw ParseError("header announces " + std::to_string(count) + " rows, found " + std::to_string(m.labels.size()),
                     lineno);
  return m;
}

std::filesystem::path sidecar(const std::filesystem::path& p, const char* ext) {
  auto s = p;
  s += ext;
  return s;
}

}  // namespace

void save_vectors(const VectorModel& model, const std::filesystem::path& path) {
  for (const auto& w : model.words()) {
    if (w.empty() || w.find_first_of(" \t\r\n\v\f") != std::string::npos)
      throw InvalidArgument("cannot save word '" + w + "': empty or contains whitespace");
  }
  std::vector<double> data;
  data.reserve(model.size() * model.dim());
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto v = model.vector(i);
    data.insert(data.end(), v.begin(), v.end());
  }
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_matrix(out, model.words(), data, model.dim());
  }

  const auto& c = model.config();
  nlohmann::ordered_json meta = {
      {"id", model.id()},
      {"algorithm", to_string(c.algorithm)},
      {"dim", c.dim},
      {"window", c.window},
      {"min_count", c.min_count},
      {"epochs", c.epochs},
      {"negatives", c.negatives},
      {"initial_lr", c.effective_lr()},
      {"min_lr_fraction", c.min_lr_fraction},
      {"subsample_t", c.subsample_t},
      {"seed", c.seed},
      {"subword_min_n", c.subword_min_n},
      {"subword_max_n", c.subword_max_n},
      {"bucket_count", c.bucket_count},
      {"threads", c.threads},
      {"corpus_fingerprint", model.corpus_fingerprint()},
  };
  std::ofstream mout(sidecar(path, ".json"), std::ios::binary);
  mout << meta.dump(2) << '\n';

  const auto ngram_path = sidecar(path, ".ngrams");
  if (const auto& sw = model.subwords()) {
    std::vector<std::pair<std::uint32_t, std::int32_t>> rows(sw->rows.begin(), sw->rows.end());
    std::sort(rows.begin(), rows.end());
    std::vector<std::string> labels;
    std::vector<double> vecs;
    for (auto [bucket, row] : rows) {
      labels.push_back(std::to_string(bucket));
      const double* src = sw->vectors.data() + static_cast<std::size_t>(row) * model.dim();
      vecs.insert(vecs.end(), src, src + model.dim());
    }
    std::ofstream nout(ngram_path, std::ios::binary);
    write_matrix(nout, labels, vecs, model.dim());
  } else {
    std::filesystem::remove(ngram_path);
  }
}

VectorModel load_vectors(const std::filesystem::path& path, std::string id) {
  Matrix m = read_matrix(path);
  TrainConfig cfg;
  cfg.dim = m.dim;
  std::string fp;
  std::string stored_id;
  const auto meta_path = sidecar(path, ".json");
  if (std::filesystem::exists(meta_path)) {
    std::ifstream in(meta_path, std::ios::binary);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
      stored_id = j.value("id", "");
      if (auto a = parse_algorithm(j.value("algorithm", "skipgram"))) cfg.algorithm = *a;
      cfg.window = j.value("window", cfg.window);
      cfg.min_count = j.value("min_count", cfg.min_count);
      cfg.epochs = j.value("epochs", cfg.epochs);
      cfg.negatives = j.value("negatives", cfg.negatives);
      cfg.initial_lr = j.value("initial_lr", cfg.initial_lr);
      cfg.min_lr_fraction = j.value("min_lr_fraction", cfg.min_lr_fraction);
      cfg.subsample_t = j.value("subsample_t", cfg.subsample_t);
      cfg.seed = j.value("seed", cfg.seed);
      cfg.subword_min_n = j.value("subword_min_n", cfg.subword_min_n);
      cfg.subword_max_n = j.value("subword_max_n", cfg.subword_max_n);
      cfg.bucket_count = j.value("bucket_count", cfg.bucket_count);
      cfg.threads = j.value("threads", cfg.threads);
      fp = j.value("corpus_fingerprint", "");
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(meta_path.string() + ": " + e.what());
    }
  }

  std::optional<SubwordTable> subwords;
  const auto ngram_path = sidecar(path, ".ngrams");
  if (std::filesystem::exists(ngram_path)) {
    Matrix g = read_matrix(ngram_path);
    if (g.dim != m.dim) throw ParseError(ngram_path.string() + ": dimension differs from the word vectors");
    SubwordTable t;
    t.min_n = cfg.subword_min_n;
    t.max_n = cfg.subword_max_n;
    t.bucket_count = cfg.bucket_count;
    for (std::size_t i = 0; i < g.labels.size(); ++i) {
      long long b = 0;
      try {
        b = parse_int(g.labels[i]);
      } catch (const InvalidArgument&) {
        throw ParseError(ngram_path.string() + ": bad bucket id '" + g.labels[i] + "'", i + 2);
      }
      t.rows.emplace(static_cast<std::uint32_t>(b), static_cast<std::int32_t>(i));
    }
    t.vectors = std::move(g.data);
    subwords = std::move(t);
  }

  if (id.empty()) id = stored_id.empty() ? path.stem().string() : stored_id;
  try {
    return VectorModel(std::move(id), std::move(m.labels), std::move(m.data), m.dim, cfg, fp, std::move(subwords));
  } catch (const InvalidArgument& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace ary
