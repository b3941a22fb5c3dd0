#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cnfepi/vectorize.hpp"

namespace cnfepi {

enum class Loss { Hinge, Logistic };

Loss parse_loss(std::string_view text);  // "hinge" | "logistic"
std::string_view to_string(Loss loss);

struct TrainConfig {
  std::size_t epochs = 50;
  double alpha0 = 0.01;
  double l2 = 1e-4;
  std::uint64_t seed = 1;
  bool shuffle = true;
  bool row_l2_normalize = false;

  // Throws InvalidArgument.
  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  Loss loss = Loss::Hinge;
  std::uint64_t fingerprint = 0;  // feature space the model was trained on
  bool normalize_rows = false;    // rows are scaled to unit L2 norm before scoring
  bool degenerate = false;        // single-class training data, constant predictor

  bool operator==(const LinearModel&) const = default;
};

using DenseRows = std::vector<std::vector<double>>;

// Per-example SGD on l2/2 ||w||^2 + loss(y, w.x + b), rate
// alpha0 / (1 + alpha0 l2 t), bias unregularized. Single-class labels give a
// constant predictor with `degenerate` set. Throws LengthMismatch,
// DimensionMismatch, EmptyInput, BadLabel.
LinearModel sgd_train(const std::vector<SparseVector>& x, const std::vector<int>& y, Loss loss,
                      const TrainConfig& config, std::uint64_t fingerprint = 0);
LinearModel sgd_train(const DenseRows& x, const std::vector<int>& y, Loss loss, const TrainConfig& config,
                      std::uint64_t fingerprint = 0);

// w.x + b. Throws DimensionMismatch.
double decision(const LinearModel& model, const SparseVector& x);
double decision(const LinearModel& model, std::span<const double> x);

// sigmoid(w.x + b). Throws WrongLossKind for hinge models.
double predict_proba(const LinearModel& model, const SparseVector& x);
double predict_proba(const LinearModel& model, std::span<const double> x);

// Probability for logistic models, margin for hinge models.
double score(const LinearModel& model, const SparseVector& x);
double score(const LinearModel& model, std::span<const double> x);

// Default cut on `score`: margin 0 for hinge, probability 0.5 for logistic.
double default_threshold(const LinearModel& model);

// 1 iff score > threshold.
int predict(const LinearModel& model, const SparseVector& x, std::optional<double> threshold = std::nullopt);
int predict(const LinearModel& model, std::span<const double> x, std::optional<double> threshold = std::nullopt);

// Throws FingerprintMismatch.
void check_fingerprint(const LinearModel& model, std::uint64_t fingerprint);

// Regularized objective l2/2 ||w||^2 + mean_i loss(y_i, w.x_i + b) and its
// gradient with respect to (w, b). Used to cross-check the trainer.
double regularized_loss(std::span<const double> w, double b, const DenseRows& x, const std::vector<int>& y,
                        Loss loss, double l2);
std::pair<std::vector<double>, double> regularized_gradient(std::span<const double> w, double b, const DenseRows& x,
                                                            const std::vector<int>& y, Loss loss, double l2);

double sigmoid(double z);

}  // namespace cnfepi
