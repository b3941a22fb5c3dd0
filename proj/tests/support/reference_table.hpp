#pragma once

#include <array>
#include <string>

// Per-dataset rows with their printed overall mean and variance.
struct ReferenceRow {
  const char* method;
  const char* metric;
  std::array<double, 5> values;
  double overall;
  double variance;
};

inline const std::array<ReferenceRow, 12>& reference_rows() {
  static const std::array<ReferenceRow, 12> rows = {{
      {"unigram-bow", "f1", {0.8435, 0.6746, 0.6607, 0.0016, 0.8860}, 0.6133, 0.1269},
      {"unigram-bow", "precision", {0.8144, 0.8120, 0.7020, 0.0075, 0.8370}, 0.6346, 0.1256},
      {"unigram-bow", "recall", {0.8747, 0.5770, 0.6240, 0.0009, 0.9410}, 0.6035, 0.1379},
      {"cnf-unigram", "f1", {0.7278, 0.7592, 0.5946, 0.5929, 0.8954}, 0.7140, 0.0160},
      {"cnf-unigram", "precision", {0.7387, 0.6599, 0.4265, 0.5679, 0.8713}, 0.6529, 0.0284},
      {"cnf-unigram", "recall", {0.7173, 0.8937, 0.9814, 0.6203, 0.9209}, 0.8267, 0.0230},
      {"cnf-unibigram", "f1", {0.8130, 0.7375, 0.6270, 0.5288, 0.8766}, 0.7166, 0.0197},
      {"cnf-unibigram", "precision", {0.7890, 0.6813, 0.4702, 0.6247, 0.8976}, 0.6926, 0.0264},
      {"cnf-unibigram", "recall", {0.8385, 0.8038, 0.9405, 0.4584, 0.8566}, 0.7796, 0.0348},
      {"cnf-doc2vec", "f1", {0.7043, 0.8940, 0.8489, 0.9344, 0.9049}, 0.8573, 0.0083},
      {"cnf-doc2vec", "precision", {0.6977, 0.9068, 0.8194, 1.0000, 0.9330}, 0.8714, 0.0136},
      {"cnf-doc2vec", "recall", {0.7111, 0.8815, 0.8806, 0.8768, 0.8784}, 0.8457, 0.0057},
  }};
  return rows;
}
