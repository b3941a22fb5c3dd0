#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cnfepi/cnf.hpp"
#include "cnfepi/corpus.hpp"
#include "cnfepi/embed.hpp"
#include "cnfepi/eval.hpp"
#include "cnfepi/learn.hpp"
#include "cnfepi/ontology.hpp"
#include "cnfepi/postag.hpp"
#include "cnfepi/vectorize.hpp"

namespace cnfepi {

enum class PipelineKind { BowSgd, Doc2VecLogreg };

PipelineKind parse_pipeline_kind(std::string_view text);  // "bow-sgd" | "doc2vec-logreg"
std::string_view to_string(PipelineKind kind);

// How text becomes a symbol sequence before featurization. Raw keeps the
// normalized tokens themselves and serves as the word-level baseline.
enum class InputMode { Raw, PlainOov, PosPadded };

InputMode parse_input_mode(std::string_view text);  // "raw" | "plain" | "plain-oov" | "pos-padded"
std::string_view to_string(InputMode mode);

struct PipelineConfig {
  PipelineKind kind = PipelineKind::BowSgd;
  InputMode mode = InputMode::PosPadded;
  FeatureMode features = FeatureMode::Unigram;
  TrainConfig train;
  std::size_t infer_epochs = 20;
  std::uint64_t infer_seed = 1;

  bool operator==(const PipelineConfig&) const = default;
};

// Borrowed inputs a pipeline needs besides the corpus. The tagger is only
// used in pos-padded mode and the embedding model only by doc2vec-logreg.
struct PipelineResources {
  const Ontology* ontology = nullptr;
  const TaggerModel* tagger = nullptr;
  const EmbeddingModel* embedding = nullptr;
  std::size_t workers = 1;
};

struct PipelineModel {
  PipelineConfig config;
  FeatureMode space_mode = FeatureMode::Unigram;
  std::vector<std::string> feature_names;  // empty for doc2vec
  std::size_t unigram_count = 0;
  bool closed_space = true;
  LinearModel classifier;

  FeatureSpace feature_space() const;
};

// Symbol sequences for every record under `mode`.
std::vector<CnfDocument> symbolize(const Dataset& data, InputMode mode, const PipelineResources& res);

PipelineModel train_pipeline(const Dataset& train, const PipelineConfig& config, const PipelineResources& res);

// Classifier scores (margin or probability) for every record.
std::vector<double> pipeline_scores(const PipelineModel& model, const Dataset& data, const PipelineResources& res);

double pipeline_threshold(const PipelineModel& model);

// Eval-harness adapter: fit() trains a fresh PipelineModel.
class PipelineClassifier : public Classifier {
 public:
  PipelineClassifier(PipelineConfig config, PipelineResources res) : config_(config), res_(res) {}
  static PipelineClassifier fitted(PipelineModel model, PipelineResources res);

  void fit(const Dataset& train) override;
  std::vector<double> scores(const Dataset& data) const override;
  double threshold() const override;
  const PipelineModel& model() const { return model_; }

 private:
  PipelineConfig config_;
  PipelineResources res_;
  PipelineModel model_;
  bool fitted_ = false;
};

std::string serialize(const PipelineModel& model);
PipelineModel parse_pipeline_model(std::string_view text);
PipelineModel load_pipeline_file(const std::string& path);

// Deterministic per-document seed for embedding inference.
std::uint64_t inference_seed(std::uint64_t base, std::string_view doc_id);

}  // namespace cnfepi
