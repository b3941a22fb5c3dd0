#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cnfepi/cnf.hpp"
#include "cnfepi/ontology.hpp"
#include "cnfepi/random.hpp"

namespace cnfepi {

struct EmbeddingConfig {
  std::size_t dim = 200;
  std::size_t window = 5;    // positions on each side of the centre
  std::size_t negative = 8;  // noise draws per position
  std::size_t epochs = 20;
  double alpha_start = 0.025;
  double alpha_end = 0.0001;
  std::uint64_t seed = 1;
  double noise_exponent = 0.75;

  // Throws InvalidArgument when an invariant is violated.
  void validate() const;
  bool operator==(const EmbeddingConfig&) const = default;
};

// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Cumulative noise distribution proportional to count^exponent.
class NoiseTable {
 public:
  NoiseTable() = default;
  NoiseTable(std::span<const std::uint64_t> counts, double exponent);
  static NoiseTable from_cdf(std::vector<double> cdf);

  std::size_t sample(Rng& rng) const;
  double probability(std::size_t index) const;
  const std::vector<double>& cdf() const { return cdf_; }
  std::size_t size() const { return cdf_.size(); }

  bool operator==(const NoiseTable&) const = default;

 private:
  std::vector<double> cdf_;
};

struct EmbeddingModel {
  EmbeddingConfig config;
  std::vector<std::string> symbols;
  std::vector<std::string> doc_ids;
  std::vector<std::uint64_t> counts;  // symbol frequencies in the training corpus
  Matrix input;                       // |symbols| x dim, context vectors
  Matrix output;                      // |symbols| x dim, prediction vectors
  Matrix docs;                        // |docs| x dim
  NoiseTable noise;

  std::optional<std::size_t> symbol_index(std::string_view symbol) const;
  std::optional<std::size_t> doc_index(std::string_view id) const;

  bool operator==(const EmbeddingModel&) const = default;
};

// One training position: the centre symbol, its in-window context symbols
// (with repetition) and the noise symbols drawn for it.
struct PositionSample {
  std::vector<std::size_t> context;
  std::size_t target = 0;
  std::vector<std::size_t> negatives;
};

// Per-position negative-sampling loss
//   -log s(u_o . v) - sum_j log s(-u_j . v)
// with v the mean of the document vector and the context input vectors.
double position_loss(const Matrix& input, const Matrix& output, std::span<const double> doc,
                     const PositionSample& sample);

struct PositionGradient {
  Matrix input;
  Matrix output;
  std::vector<double> doc;
};

PositionGradient position_gradient(const Matrix& input, const Matrix& output, std::span<const double> doc,
                                   const PositionSample& sample);

// Called after each completed epoch (1-based) during training.
using EpochCallback = std::function<void(std::size_t epoch, const EmbeddingModel& model)>;

// PV-DM with context averaging and negative sampling, single-threaded and
// bit-deterministic for a given seed. Every corpus symbol must belong to
// `vocabulary`. Throws EmptyCorpus, EmptyDocument, UnknownSymbol.
EmbeddingModel train_embeddings(const std::vector<CnfDocument>& corpus, const EmbeddingConfig& config,
                                const std::vector<std::string>& vocabulary, const EpochCallback& on_epoch = {});
EmbeddingModel train_embeddings(const std::vector<CnfDocument>& corpus, const EmbeddingConfig& config,
                                const SymbolTable& symbols, const EpochCallback& on_epoch = {});

// Trains a fresh document vector against frozen symbol vectors.
std::vector<double> infer_doc(const CnfDocument& doc, const EmbeddingModel& model, std::size_t epochs,
                              std::uint64_t seed);

// Mean per-position loss over a corpus with noise drawn from `noise_seed`.
double mean_corpus_loss(const EmbeddingModel& model, const std::vector<CnfDocument>& corpus, std::uint64_t noise_seed);

double cosine(std::span<const double> a, std::span<const double> b);

// Top-n symbols by cosine over input vectors, excluding the query; ties go to
// the lower symbol index. Throws UnknownSymbol.
std::vector<std::pair<std::string, double>> most_similar(std::string_view symbol, const EmbeddingModel& model,
                                                         std::size_t n);

std::string serialize(const EmbeddingModel& model);
EmbeddingModel parse_embedding_model(std::string_view bytes);
EmbeddingModel load_embedding_file(const std::string& path);

}  // namespace cnfepi
