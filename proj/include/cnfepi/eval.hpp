#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cnfepi/corpus.hpp"

namespace cnfepi {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionCounts&) const = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const Metrics&) const = default;
};

// Throws LengthMismatch, EmptyInput, BadLabel.
ConfusionCounts confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred);

// Precision, recall and F1, each 0 when its denominator is 0.
Metrics metrics(const ConfusionCounts& counts);
Metrics metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred);

// k disjoint folds covering 0..n-1 after a seeded shuffle; the first n % k
// folds hold one extra index. Throws BadK unless 2 <= k <= n.
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed);

struct DatasetMetrics {
  std::string name;
  Metrics metrics;
};

struct GeneralizationReport {
  std::vector<DatasetMetrics> per_dataset;
  Metrics mean;
  std::optional<Metrics> variance;  // sample variance, n - 1 denominator
};

double mean(const std::vector<double>& values);
// Throws TooFewDatasets for fewer than two values.
double sample_variance(const std::vector<double>& values);

// Unweighted means over all rows; variance when `with_variance` is set.
// Throws EmptyInput, TooFewDatasets.
GeneralizationReport generalization_report(std::vector<DatasetMetrics> rows, bool with_variance = true);

struct PRPoint {
  double threshold = 0.0;
  double recall = 0.0;
  double precision = 0.0;
};

// One point per distinct score, thresholds descending, prediction
// score >= threshold. auc = sum_i (R_i - R_{i-1}) P_i with R_0 = 0.
struct PRCurve {
  std::vector<PRPoint> points;
  double auc = 0.0;
};

// Throws LengthMismatch, EmptyInput, NoPositives.
PRCurve pr_curve(const std::vector<double>& scores, const std::vector<int>& y_true);

// A trainable scorer used by run_experiment.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual void fit(const Dataset& train) = 0;
  virtual std::vector<double> scores(const Dataset& data) const = 0;
  // Prediction is score > threshold.
  virtual double threshold() const = 0;
};

using ClassifierFactory = std::function<std::unique_ptr<Classifier>()>;

struct ExperimentConfig {
  std::size_t folds = 10;
  std::uint64_t seed = 1;
};

struct ExperimentResult {
  GeneralizationReport report;
  std::vector<PRCurve> curves;  // aligned with report.per_dataset
  std::size_t folds = 0;
};

// Row 0 is the training set scored by pooled k-fold cross-validation; the
// remaining rows score `fitted`, or a fresh classifier fitted on the whole
// training set when none is given. Throws UnlabeledData.
ExperimentResult run_experiment(const Dataset& train, const std::vector<Dataset>& eval_sets,
                                const ClassifierFactory& make_classifier, const ExperimentConfig& config = {},
                                const Classifier* fitted = nullptr);

// Table-shaped TSV: method, metric, one column per dataset, overall, variance.
std::string format_report(const GeneralizationReport& report, const std::string& method, std::size_t cv_folds);

// recall<TAB>precision rows followed by an `auc=` line.
std::string format_pr_curve(const PRCurve& curve);

}  // namespace cnfepi
