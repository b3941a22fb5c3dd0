#include "cnfepi/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "cnfepi/error.hpp"
#include "cnfepi/random.hpp"

namespace cnfepi {

ConfusionCounts confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(y_true.size()) + " labels but " + std::to_string(y_pred.size()) + " predictions");
  }
  if (y_true.empty()) throw Error(ErrorCode::EmptyInput, "no labels to score");
  ConfusionCounts c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    int t = y_true[i];
    int p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1)) throw Error(ErrorCode::BadLabel, "labels must be 0 or 1");
    if (t && p) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

Metrics metrics(const ConfusionCounts& c) {
  Metrics m;
  m.precision = c.tp + c.fp ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
  m.recall = c.tp + c.fn ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  double s = m.precision + m.recall;
  m.f1 = s > 0 ? 2.0 * m.precision * m.recall / s : 0.0;
  return m;
}

Metrics metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  return metrics(confusion(y_true, y_pred));
}

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > n) {
    throw Error(ErrorCode::BadK, "need 2 <= k <= n, got k=" + std::to_string(k) + " n=" + std::to_string(n));
  }
  Rng rng(seed);
  auto order = rng.permutation(n);
  std::vector<std::vector<std::size_t>> folds(k);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t at = 0;
  for (std::size_t f = 0; f < k; ++f) {
    std::size_t len = base + (f < extra ? 1 : 0);
    folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(at),
                    order.begin() + static_cast<std::ptrdiff_t>(at + len));
    at += len;
  }
  return folds;
}

double mean(const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "mean of no values");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_variance(const std::vector<double>& values) {
  if (values.size() < 2) throw Error(ErrorCode::TooFewDatasets, "variance needs at least two values");
  double mu = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  return ss / static_cast<double>(values.size() - 1);
}

GeneralizationReport generalization_report(std::vector<DatasetMetrics> rows, bool with_variance) {
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "report needs at least one dataset");
  if (with_variance && rows.size() < 2) {
    throw Error(ErrorCode::TooFewDatasets, "variance needs at least two datasets");
  }
  std::vector<double> p, r, f;
  for (const auto& row : rows) {
    p.push_back(row.metrics.precision);
    r.push_back(row.metrics.recall);
    f.push_back(row.metrics.f1);
  }
  GeneralizationReport report;
  report.per_dataset = std::move(rows);
  report.mean = {mean(p), mean(r), mean(f)};
  if (with_variance) report.variance = Metrics{sample_variance(p), sample_variance(r), sample_variance(f)};
  return report;
}

PRCurve pr_curve(const std::vector<double>& scores, const std::vector<int>& y_true) {
  if (scores.size() != y_true.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(scores.size()) + " scores but " + std::to_string(y_true.size()) + " labels");
  }
  if (scores.empty()) throw Error(ErrorCode::EmptyInput, "no scores");
  std::size_t positives = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i])) throw Error(ErrorCode::InvalidArgument, "score " + std::to_string(i) + " is NaN");
    if (y_true[i] != 0 && y_true[i] != 1) throw Error(ErrorCode::BadLabel, "labels must be 0 or 1");
    positives += static_cast<std::size_t>(y_true[i]);
  }
  if (positives == 0) throw Error(ErrorCode::NoPositives, "precision-recall needs at least one positive");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  PRCurve curve;
  std::size_t tp = 0, fp = 0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    double thr = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == thr; ++i) {
      if (y_true[order[i]]) ++tp;
      else ++fp;
    }
    double recall = static_cast<double>(tp) / static_cast<double>(positives);
    double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    curve.points.push_back({thr, recall, precision});
    curve.auc += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return curve;
}

ExperimentResult run_experiment(const Dataset& train, const std::vector<Dataset>& eval_sets,
                                const ClassifierFactory& make_classifier, const ExperimentConfig& config,
                                const Classifier* fitted) {
  const auto train_labels = train.labels();
  std::vector<std::vector<int>> eval_labels;
  for (const auto& ds : eval_sets) eval_labels.push_back(ds.labels());

  ExperimentResult result;
  result.folds = config.folds;
  std::vector<DatasetMetrics> rows;

  // Pooled cross-validation on the training set.
  auto folds = kfold_indices(train.size(), config.folds, config.seed);
  std::vector<double> cv_scores(train.size());
  std::vector<int> cv_pred(train.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::size_t> fit_idx;
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g != f) fit_idx.insert(fit_idx.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(fit_idx.begin(), fit_idx.end());
    std::vector<std::size_t> held = folds[f];
    std::sort(held.begin(), held.end());
    auto clf = make_classifier();
    clf->fit(train.subset(fit_idx, train.name() + "-fold" + std::to_string(f)));
    auto s = clf->scores(train.subset(held, train.name() + "-heldout" + std::to_string(f)));
    for (std::size_t j = 0; j < held.size(); ++j) {
      cv_scores[held[j]] = s[j];
      cv_pred[held[j]] = s[j] > clf->threshold() ? 1 : 0;
    }
  }
  rows.push_back({train.name(), metrics(train_labels, cv_pred)});
  result.curves.push_back(pr_curve(cv_scores, train_labels));

  if (!eval_sets.empty()) {
    std::unique_ptr<Classifier> own;
    const Classifier* clf = fitted;
    if (!clf) {
      own = make_classifier();
      own->fit(train);
      clf = own.get();
    }
    for (std::size_t e = 0; e < eval_sets.size(); ++e) {
      auto s = clf->scores(eval_sets[e]);
      std::vector<int> pred(s.size());
      for (std::size_t j = 0; j < s.size(); ++j) pred[j] = s[j] > clf->threshold() ? 1 : 0;
      rows.push_back({eval_sets[e].name(), metrics(eval_labels[e], pred)});
      bool any_positive = std::find(eval_labels[e].begin(), eval_labels[e].end(), 1) != eval_labels[e].end();
      result.curves.push_back(any_positive ? pr_curve(s, eval_labels[e]) : PRCurve{});
    }
  }
  bool with_variance = rows.size() >= 2;
  result.report = generalization_report(std::move(rows), with_variance);
  return result;
}

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string format_report(const GeneralizationReport& report, const std::string& method, std::size_t cv_folds) {
  std::string out;
  if (cv_folds && !report.per_dataset.empty()) {
    out += "# " + report.per_dataset.front().name + ": pooled " + std::to_string(cv_folds) +
           "-fold cross-validation; overall is the unweighted mean of all columns; variance uses n-1\n";
  }
  out += "method\tmetric";
  for (const auto& row : report.per_dataset) out += "\t" + row.name;
  out += "\toverall\tvariance\n";
  auto line = [&](const char* name, double Metrics::*field) {
    out += method + "\t" + name;
    for (const auto& row : report.per_dataset) out += "\t" + fixed(row.metrics.*field);
    out += "\t" + fixed(report.mean.*field);
    out += "\t" + (report.variance ? fixed((*report.variance).*field) : std::string("NA"));
    out += "\n";
  };
  line("precision", &Metrics::precision);
  line("recall", &Metrics::recall);
  line("f1", &Metrics::f1);
  return out;
}

std::string format_pr_curve(const PRCurve& curve) {
  std::string out = "recall\tprecision\n";
  char buf[64];
  for (const auto& p : curve.points) {
    std::snprintf(buf, sizeof buf, "%.6f\t%.6f\n", p.recall, p.precision);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "auc=%.6f\n", curve.auc);
  out += buf;
  return out;
}

}  // namespace cnfepi
