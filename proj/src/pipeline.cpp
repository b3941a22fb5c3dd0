#include "cnfepi/pipeline.hpp"

#include <json.hpp>

#include "cnfepi/error.hpp"
#include "cnfepi/io.hpp"

namespace cnfepi {

PipelineKind parse_pipeline_kind(std::string_view text) {
  if (text == "bow-sgd") return PipelineKind::BowSgd;
  if (text == "doc2vec-logreg") return PipelineKind::Doc2VecLogreg;
  throw Error(ErrorCode::InvalidArgument, "unknown pipeline '" + std::string(text) + "'");
}

std::string_view to_string(PipelineKind kind) { return kind == PipelineKind::BowSgd ? "bow-sgd" : "doc2vec-logreg"; }

InputMode parse_input_mode(std::string_view text) {
  if (text == "raw") return InputMode::Raw;
  if (text == "plain" || text == "plain-oov") return InputMode::PlainOov;
  if (text == "pos-padded") return InputMode::PosPadded;
  throw Error(ErrorCode::InvalidArgument, "unknown mode '" + std::string(text) + "'");
}

std::string_view to_string(InputMode mode) {
  switch (mode) {
    case InputMode::Raw:
      return "raw";
    case InputMode::PlainOov:
      return "plain-oov";
    default:
      return "pos-padded";
  }
}

FeatureSpace PipelineModel::feature_space() const {
  return FeatureSpace(space_mode, feature_names, unigram_count, closed_space);
}

std::uint64_t inference_seed(std::uint64_t base, std::string_view doc_id) {
  std::uint64_t h = 1469598103934665603ull ^ base;
  for (unsigned char c : doc_id) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

const Ontology& need_ontology(const PipelineResources& res) {
  if (!res.ontology) throw Error(ErrorCode::InvalidArgument, "this mode needs an ontology");
  return *res.ontology;
}

const EmbeddingModel& need_embedding(const PipelineResources& res) {
  if (!res.embedding) throw Error(ErrorCode::InvalidArgument, "doc2vec-logreg needs an embedding model");
  return *res.embedding;
}

std::uint64_t embedding_fingerprint(const EmbeddingModel& m) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  mix("doc2vec");
  mix(std::to_string(m.config.dim));
  for (const auto& s : m.symbols) mix(s);
  return h;
}

DenseRows doc_vectors(const std::vector<CnfDocument>& docs, const EmbeddingModel& m, const PipelineConfig& config) {
  DenseRows rows;
  rows.reserve(docs.size());
  for (const auto& d : docs) {
    if (auto i = m.doc_index(d.source_id)) {
      auto r = m.docs.row(*i);
      rows.emplace_back(r.begin(), r.end());
    } else {
      rows.push_back(infer_doc(d, m, config.infer_epochs, inference_seed(config.infer_seed, d.source_id)));
    }
  }
  return rows;
}

}  // namespace

std::vector<CnfDocument> symbolize(const Dataset& data, InputMode mode, const PipelineResources& res) {
  if (mode == InputMode::Raw) {
    std::vector<CnfDocument> docs;
    docs.reserve(data.size());
    for (const auto& r : data.records()) docs.push_back({surfaces(normalize_tokenize(r.text)), r.id, r.label});
    return docs;
  }
  static const TaggerModel empty_tagger;
  const TaggerModel& tagger = res.tagger ? *res.tagger : empty_tagger;
  if (mode == InputMode::PosPadded && !res.tagger) {
    throw Error(ErrorCode::InvalidArgument, "pos-padded mode needs a tagger model");
  }
  auto cnf_mode = mode == InputMode::PlainOov ? CnfMode::PlainOov : CnfMode::PosPadded;
  return transform_corpus(data, need_ontology(res), tagger, cnf_mode, res.workers);
}

PipelineModel train_pipeline(const Dataset& train, const PipelineConfig& config, const PipelineResources& res) {
  auto labels = train.labels();
  auto docs = symbolize(train, config.mode, res);
  PipelineModel model;
  model.config = config;
  if (config.kind == PipelineKind::BowSgd) {
    FeatureSpace space;
    if (config.mode == InputMode::Raw) {
      std::vector<std::vector<std::string>> seqs;
      for (auto& d : docs) seqs.push_back(d.symbols);
      space = fit_raw(config.features, seqs);
    } else {
      space = fit(config.features, docs, symbol_table(need_ontology(res), TagSet::canonical()));
    }
    std::vector<SparseVector> x;
    x.reserve(docs.size());
    for (const auto& d : docs) x.push_back(transform(d, space));
    model.classifier = sgd_train(x, labels, Loss::Hinge, config.train, space.fingerprint());
    model.space_mode = space.mode();
    model.feature_names = space.names();
    model.unigram_count = space.unigram_count();
    model.closed_space = space.closed();
  } else {
    if (config.mode == InputMode::Raw) throw Error(ErrorCode::InvalidArgument, "doc2vec-logreg needs a CNF mode");
    const auto& emb = need_embedding(res);
    model.classifier = sgd_train(doc_vectors(docs, emb, config), labels, Loss::Logistic, config.train,
                                 embedding_fingerprint(emb));
  }
  return model;
}

std::vector<double> pipeline_scores(const PipelineModel& model, const Dataset& data, const PipelineResources& res) {
  auto docs = symbolize(data, model.config.mode, res);
  std::vector<double> out;
  out.reserve(docs.size());
  if (model.config.kind == PipelineKind::BowSgd) {
    auto space = model.feature_space();
    check_fingerprint(model.classifier, space.fingerprint());
    for (const auto& d : docs) out.push_back(score(model.classifier, transform(d, space)));
  } else {
    const auto& emb = need_embedding(res);
    check_fingerprint(model.classifier, embedding_fingerprint(emb));
    for (const auto& row : doc_vectors(docs, emb, model.config)) out.push_back(score(model.classifier, row));
  }
  return out;
}

double pipeline_threshold(const PipelineModel& model) { return default_threshold(model.classifier); }

PipelineClassifier PipelineClassifier::fitted(PipelineModel model, PipelineResources res) {
  PipelineClassifier c(model.config, res);
  c.model_ = std::move(model);
  c.fitted_ = true;
  return c;
}

void PipelineClassifier::fit(const Dataset& train) {
  model_ = train_pipeline(train, config_, res_);
  fitted_ = true;
}

std::vector<double> PipelineClassifier::scores(const Dataset& data) const {
  if (!fitted_) throw Error(ErrorCode::InvalidArgument, "classifier used before fit");
  return pipeline_scores(model_, data, res_);
}

double PipelineClassifier::threshold() const { return pipeline_threshold(model_); }

namespace {

constexpr std::string_view kPipelineMagic = "cnfepi-pipeline";
constexpr int kPipelineVersion = 1;

}  // namespace

std::string serialize(const PipelineModel& model) {
  const auto& c = model.config;
  nlohmann::ordered_json j;
  j["format"] = kPipelineMagic;
  j["version"] = kPipelineVersion;
  j["pipeline"] = to_string(c.kind);
  j["mode"] = to_string(c.mode);
  j["features"] = to_string(c.features);
  j["train"] = {{"epochs", c.train.epochs},   {"alpha0", c.train.alpha0}, {"l2", c.train.l2},
                {"seed", c.train.seed},       {"shuffle", c.train.shuffle},
                {"row_l2_normalize", c.train.row_l2_normalize}};
  j["infer_epochs"] = c.infer_epochs;
  j["infer_seed"] = c.infer_seed;
  j["feature_space"] = {{"mode", to_string(model.space_mode)},
                        {"closed", model.closed_space},
                        {"unigram_count", model.unigram_count},
                        {"names", model.feature_names}};
  const auto& m = model.classifier;
  j["classifier"] = {{"loss", to_string(m.loss)},
                     {"bias", m.bias},
                     {"fingerprint", m.fingerprint},
                     {"normalize_rows", m.normalize_rows},
                     {"degenerate", m.degenerate},
                     {"weights", m.weights}};
  return j.dump() + "\n";
}

PipelineModel parse_pipeline_model(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    if (j.at("format") != kPipelineMagic) throw Error(ErrorCode::ModelFormat, "not a pipeline model");
    if (j.at("version") != kPipelineVersion) throw Error(ErrorCode::ModelFormat, "unsupported pipeline version");
    PipelineModel model;
    auto& c = model.config;
    c.kind = parse_pipeline_kind(j.at("pipeline").get<std::string>());
    c.mode = parse_input_mode(j.at("mode").get<std::string>());
    c.features = parse_feature_mode(j.at("features").get<std::string>());
    const auto& t = j.at("train");
    c.train.epochs = t.at("epochs").get<std::size_t>();
    c.train.alpha0 = t.at("alpha0").get<double>();
    c.train.l2 = t.at("l2").get<double>();
    c.train.seed = t.at("seed").get<std::uint64_t>();
    c.train.shuffle = t.at("shuffle").get<bool>();
    c.train.row_l2_normalize = t.at("row_l2_normalize").get<bool>();
    c.infer_epochs = j.at("infer_epochs").get<std::size_t>();
    c.infer_seed = j.at("infer_seed").get<std::uint64_t>();
    const auto& fs = j.at("feature_space");
    model.space_mode = parse_feature_mode(fs.at("mode").get<std::string>());
    model.closed_space = fs.at("closed").get<bool>();
    model.unigram_count = fs.at("unigram_count").get<std::size_t>();
    model.feature_names = fs.at("names").get<std::vector<std::string>>();
    const auto& m = j.at("classifier");
    model.classifier.loss = parse_loss(m.at("loss").get<std::string>());
    model.classifier.bias = m.at("bias").get<double>();
    model.classifier.fingerprint = m.at("fingerprint").get<std::uint64_t>();
    model.classifier.normalize_rows = m.at("normalize_rows").get<bool>();
    model.classifier.degenerate = m.at("degenerate").get<bool>();
    model.classifier.weights = m.at("weights").get<std::vector<double>>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ModelFormat, std::string("pipeline model: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ModelFormat) throw;
    throw Error(ErrorCode::ModelFormat, e.what());
  }
}

PipelineModel load_pipeline_file(const std::string& path) { return parse_pipeline_model(io::read_file(path)); }

}  // namespace cnfepi
