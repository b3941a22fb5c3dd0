#include "cnfepi/learn.hpp"

#include <cmath>
#include <numeric>

#include "cnfepi/error.hpp"
#include "cnfepi/random.hpp"

namespace cnfepi {

Loss parse_loss(std::string_view text) {
  if (text == "hinge") return Loss::Hinge;
  if (text == "logistic") return Loss::Logistic;
  throw Error(ErrorCode::InvalidArgument, "unknown loss '" + std::string(text) + "'");
}

std::string_view to_string(Loss loss) { return loss == Loss::Hinge ? "hinge" : "logistic"; }

void TrainConfig::validate() const {
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) throw Error(ErrorCode::InvalidArgument, "alpha0 must be positive");
  if (!(l2 >= 0.0) || !std::isfinite(l2)) throw Error(ErrorCode::InvalidArgument, "l2 must be non-negative");
  if (alpha0 * l2 >= 1.0) throw Error(ErrorCode::InvalidArgument, "alpha0 * l2 must be below 1");
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

// log(1 + exp(-z)) without overflow.
double softplus_neg(double z) { return z >= 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z)); }

// d loss / d margin for signed label s.
double loss_slope(Loss loss, double s, double margin) {
  if (loss == Loss::Hinge) return s * margin < 1.0 ? -s : 0.0;
  return -s * sigmoid(-s * margin);
}

double loss_value(Loss loss, double s, double margin) {
  if (loss == Loss::Hinge) return std::max(0.0, 1.0 - s * margin);
  return softplus_neg(s * margin);
}

// Uniform row access for sparse and dense inputs, with optional unit scaling.
struct SparseRow {
  const SparseVector& v;
  double scale;

  double dot(const std::vector<double>& w) const {
    double s = 0.0;
    for (const auto& [i, c] : v.entries) s += w[i] * static_cast<double>(c);
    return s * scale;
  }
  void axpy(double a, std::vector<double>& w) const {
    for (const auto& [i, c] : v.entries) w[i] += a * scale * static_cast<double>(c);
  }
};

struct DenseRow {
  std::span<const double> v;
  double scale;

  double dot(const std::vector<double>& w) const {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i];
    return s * scale;
  }
  void axpy(double a, std::vector<double>& w) const {
    for (std::size_t i = 0; i < v.size(); ++i) w[i] += a * scale * v[i];
  }
};

double row_scale(bool normalize, const SparseVector& x) {
  if (!normalize) return 1.0;
  double ss = 0.0;
  for (const auto& e : x.entries) ss += static_cast<double>(e.second) * static_cast<double>(e.second);
  return ss > 0 ? 1.0 / std::sqrt(ss) : 1.0;
}

double row_scale(bool normalize, std::span<const double> x) {
  if (!normalize) return 1.0;
  double ss = 0.0;
  for (double v : x) ss += v * v;
  return ss > 0 ? 1.0 / std::sqrt(ss) : 1.0;
}

std::size_t row_dim(const SparseVector& x) { return x.dimension; }
std::size_t row_dim(const std::vector<double>& x) { return x.size(); }

SparseRow make_row(const SparseVector& x, bool normalize) { return {x, row_scale(normalize, x)}; }
DenseRow make_row(const std::vector<double>& x, bool normalize) { return {x, row_scale(normalize, x)}; }

template <typename Row>
LinearModel train_impl(const std::vector<Row>& x, const std::vector<int>& y, Loss loss, const TrainConfig& config,
                       std::uint64_t fingerprint) {
  config.validate();
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(x.size()) + " rows but " + std::to_string(y.size()) + " labels");
  }
  if (x.empty()) throw Error(ErrorCode::EmptyInput, "no training rows");
  const std::size_t dim = row_dim(x.front());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (row_dim(x[i]) != dim) {
      throw Error(ErrorCode::DimensionMismatch, "row " + std::to_string(i) + " has dimension " +
                                                    std::to_string(row_dim(x[i])) + ", expected " +
                                                    std::to_string(dim));
    }
    if (y[i] != 0 && y[i] != 1) throw Error(ErrorCode::BadLabel, "label at row " + std::to_string(i) + " is not 0/1");
  }

  LinearModel model;
  model.weights.assign(dim, 0.0);
  model.loss = loss;
  model.fingerprint = fingerprint;
  model.normalize_rows = config.row_l2_normalize;
  if (config.epochs == 0) return model;

  std::size_t positives = std::accumulate(y.begin(), y.end(), std::size_t{0});
  if (positives == 0 || positives == y.size()) {
    model.bias = positives ? 1.0 : -1.0;
    model.degenerate = true;
    return model;
  }

  // w = scale * v keeps the L2 shrink O(1) per step for sparse rows.
  std::vector<double> v(dim, 0.0);
  double scale = 1.0;
  double bias = 0.0;
  Rng rng(config.seed);
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t t = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) rng.shuffle(order);
    for (auto i : order) {
      auto row = make_row(x[i], config.row_l2_normalize);
      double eta = config.alpha0 / (1.0 + config.alpha0 * config.l2 * static_cast<double>(t));
      double s = y[i] ? 1.0 : -1.0;
      double margin = scale * row.dot(v) + bias;
      double g = loss_slope(loss, s, margin);
      scale *= 1.0 - eta * config.l2;
      if (g != 0.0) {
        row.axpy(-eta * g / scale, v);
        bias -= eta * g;
      }
      if (scale < 1e-9) {
        for (auto& e : v) e *= scale;
        scale = 1.0;
      }
      ++t;
    }
  }
  for (std::size_t j = 0; j < dim; ++j) model.weights[j] = scale * v[j];
  model.bias = bias;
  return model;
}

void check_dim(const LinearModel& model, std::size_t dim) {
  if (dim != model.weights.size()) {
    throw Error(ErrorCode::DimensionMismatch, "input has dimension " + std::to_string(dim) + ", model expects " +
                                                  std::to_string(model.weights.size()));
  }
}

void require_logistic(const LinearModel& model) {
  if (model.loss != Loss::Logistic) throw Error(ErrorCode::WrongLossKind, "probabilities need a logistic model");
}

}  // namespace

LinearModel sgd_train(const std::vector<SparseVector>& x, const std::vector<int>& y, Loss loss,
                      const TrainConfig& config, std::uint64_t fingerprint) {
  return train_impl(x, y, loss, config, fingerprint);
}

LinearModel sgd_train(const DenseRows& x, const std::vector<int>& y, Loss loss, const TrainConfig& config,
                      std::uint64_t fingerprint) {
  return train_impl(x, y, loss, config, fingerprint);
}

double decision(const LinearModel& model, const SparseVector& x) {
  check_dim(model, x.dimension);
  return SparseRow{x, row_scale(model.normalize_rows, x)}.dot(model.weights) + model.bias;
}

double decision(const LinearModel& model, std::span<const double> x) {
  check_dim(model, x.size());
  return DenseRow{x, row_scale(model.normalize_rows, x)}.dot(model.weights) + model.bias;
}

double predict_proba(const LinearModel& model, const SparseVector& x) {
  require_logistic(model);
  return sigmoid(decision(model, x));
}

double predict_proba(const LinearModel& model, std::span<const double> x) {
  require_logistic(model);
  return sigmoid(decision(model, x));
}

double score(const LinearModel& model, const SparseVector& x) {
  return model.loss == Loss::Logistic ? predict_proba(model, x) : decision(model, x);
}

double score(const LinearModel& model, std::span<const double> x) {
  return model.loss == Loss::Logistic ? predict_proba(model, x) : decision(model, x);
}

double default_threshold(const LinearModel& model) { return model.loss == Loss::Logistic ? 0.5 : 0.0; }

int predict(const LinearModel& model, const SparseVector& x, std::optional<double> threshold) {
  return score(model, x) > threshold.value_or(default_threshold(model)) ? 1 : 0;
}

int predict(const LinearModel& model, std::span<const double> x, std::optional<double> threshold) {
  return score(model, x) > threshold.value_or(default_threshold(model)) ? 1 : 0;
}

void check_fingerprint(const LinearModel& model, std::uint64_t fingerprint) {
  if (model.fingerprint != fingerprint) {
    throw Error(ErrorCode::FingerprintMismatch, "model was trained on feature space " +
                                                    std::to_string(model.fingerprint) + ", input uses " +
                                                    std::to_string(fingerprint));
  }
}

double regularized_loss(std::span<const double> w, double b, const DenseRows& x, const std::vector<int>& y,
                        Loss loss, double l2) {
  if (x.size() != y.size() || x.empty()) throw Error(ErrorCode::LengthMismatch, "rows and labels differ");
  double reg = 0.0;
  for (double v : w) reg += v * v;
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != w.size()) throw Error(ErrorCode::DimensionMismatch, "row " + std::to_string(i));
    double m = b;
    for (std::size_t j = 0; j < w.size(); ++j) m += w[j] * x[i][j];
    sum += loss_value(loss, y[i] ? 1.0 : -1.0, m);
  }
  return 0.5 * l2 * reg + sum / static_cast<double>(x.size());
}

std::pair<std::vector<double>, double> regularized_gradient(std::span<const double> w, double b, const DenseRows& x,
                                                            const std::vector<int>& y, Loss loss, double l2) {
  if (x.size() != y.size() || x.empty()) throw Error(ErrorCode::LengthMismatch, "rows and labels differ");
  std::vector<double> gw(w.size(), 0.0);
  double gb = 0.0;
  const double inv = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != w.size()) throw Error(ErrorCode::DimensionMismatch, "row " + std::to_string(i));
    double m = b;
    for (std::size_t j = 0; j < w.size(); ++j) m += w[j] * x[i][j];
    double g = loss_slope(loss, y[i] ? 1.0 : -1.0, m) * inv;
    for (std::size_t j = 0; j < w.size(); ++j) gw[j] += g * x[i][j];
    gb += g;
  }
  for (std::size_t j = 0; j < w.size(); ++j) gw[j] += l2 * w[j];
  return {gw, gb};
}

}  // namespace cnfepi
