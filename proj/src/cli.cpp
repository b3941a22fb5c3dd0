#include "cnfepi/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cnfepi/cnf.hpp"
#include "cnfepi/corpus.hpp"
#include "cnfepi/embed.hpp"
#include "cnfepi/error.hpp"
#include "cnfepi/eval.hpp"
#include "cnfepi/io.hpp"
#include "cnfepi/ontology.hpp"
#include "cnfepi/pipeline.hpp"
#include "cnfepi/postag.hpp"
#include "cnfepi/synth.hpp"
#include "cnfepi/textnorm.hpp"

#ifndef CNFEPI_DATA_DIR
#define CNFEPI_DATA_DIR "data"
#endif

namespace cnfepi::cli {

std::string data_dir() { return CNFEPI_DATA_DIR; }

namespace {

namespace fs = std::filesystem;

struct Options {
  std::size_t workers = 1;
  std::string config;

  std::string path;  // positional file for ontology / corpus stats
  std::string in;
  std::string out;
  std::string log;
  std::string ontology = data_dir() + "/starter.ont";
  std::string tagger = data_dir() + "/default.tagger";
  std::string embed_model;
  std::string model;
  std::string corpus;
  std::string cnf;
  std::string mode = "pos-padded";

  int tagger_epochs = 5;
  std::uint64_t seed = 1;

  EmbeddingConfig embed;
  std::string symbol;
  std::size_t top = 10;

  std::string pipeline = "bow-sgd";
  std::string features = "unigram";
  std::string train;
  TrainConfig train_config;
  std::size_t infer_epochs = 20;

  std::vector<std::string> eval;
  std::string report;
  std::string pr_dir;
  std::size_t folds = 10;

  double frac = 0.8;
  bool stratified = false;
  std::string out_train;
  std::string out_test;

  std::string disease = "a";
  std::size_t count = 1000;
  double prevalence = 0.5;
  std::string id_prefix;
  std::string name;
};

// Wraps input either from a file or the caller's stream.
class Input {
 public:
  Input(const std::string& path, std::istream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_ = io::open_input(path);
      stream_ = &file_;
    }
  }
  std::istream& get() { return *stream_; }

 private:
  std::ifstream file_;
  std::istream* stream_;
};

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    io::write_file_atomic(path, content);
  }
}

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// Effective configuration of the invoked subcommand, next to its output or
// on the error stream when the command writes no file.
void echo_config(const CLI::App& sub, const std::string& primary_out, std::ostream& err) {
  std::string command = sub.get_name();
  for (auto* p = sub.get_parent(); p && p->get_parent(); p = p->get_parent()) command = p->get_name() + " " + command;
  std::string text = "# cnf-epi " + command + "\n" + sub.config_to_str(true, false);
  if (primary_out.empty() || primary_out == "-") {
    err << text;
  } else {
    io::write_file_atomic(primary_out + ".config", text);
  }
}

// Splices `--key=value` pairs from a flat config file into the argument list
// at the position of `--config FILE`, skipping keys already given as flags.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
      continue;
    }
    auto given = [&](const std::string& key) {
      for (const auto& a : args) {
        if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
      }
      return false;
    };
    auto text = io::read_file(path);
    std::size_t line_no = 0;
    for (auto raw : io::split(text, '\n')) {
      ++line_no;
      auto line = io::trim(raw);
      if (line.empty() || line.front() == '#') continue;
      auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw Error(ErrorCode::InvalidArgument, path + ":" + std::to_string(line_no) + ": expected key=value");
      }
      std::string key(io::trim(line.substr(0, eq)));
      std::string value(io::trim(line.substr(eq + 1)));
      if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
        value = value.substr(1, value.size() - 2);
      }
      if (key.empty()) throw Error(ErrorCode::InvalidArgument, path + ":" + std::to_string(line_no) + ": empty key");
      if (!given(key)) out.push_back("--" + key + "=" + value);
    }
    out.push_back("--config=" + path);
  }
  return out;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "Flat key=value file; command-line flags take precedence");
  sub->add_option("--workers", o.workers, "Worker threads where the command supports them")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_ontology(CLI::App* sub, Options& o) {
  sub->add_option("--ontology", o.ontology, "Ontology file")->capture_default_str();
}

void add_tagger(CLI::App* sub, Options& o) {
  sub->add_option("--tagger", o.tagger, "Tagger model file")->capture_default_str();
}

std::vector<std::string> mode_names() { return {"plain", "plain-oov", "pos-padded"}; }

// --- command bodies -------------------------------------------------------

int ontology_validate(const Options& o, std::ostream& out) {
  auto ont = load_ontology_file(o.path);
  out << "ok concepts=" << ont.size() << " words=" << ont.word_count() << "\n";
  return 0;
}

int ontology_stats(const Options& o, std::ostream& out) {
  auto ont = load_ontology_file(o.path);
  out << "concepts=" << ont.size() << " words=" << ont.word_count() << "\n";
  return 0;
}

int tokenize_cmd(const Options& o, std::istream& in, std::ostream& out) {
  Input input(o.in, in);
  std::string result;
  for (const auto& line : read_lines(input.get())) result += join(surfaces(normalize_tokenize(line))) + "\n";
  emit(o.out, result, out);
  return 0;
}

int tagger_train_cmd(const Options& o, std::ostream& err) {
  auto in = io::open_input(o.corpus);
  auto corpus = read_tagged_corpus(in);
  auto model = train_tagger(corpus, o.tagger_epochs, o.seed);
  io::write_file_atomic(o.out, serialize(model));
  err << "trained tagger on " << corpus.size() << " sentences, " << model.weights().size() << " features\n";
  return 0;
}

int tagger_tag_cmd(const Options& o, std::istream& in, std::ostream& out) {
  auto model = load_tagger_file(o.model);
  Input input(o.in, in);
  std::string result;
  for (const auto& line : read_lines(input.get())) {
    auto tokens = surfaces(normalize_tokenize(line));
    result += format_tagged({tokens, tag(tokens, model)}) + "\n";
  }
  emit(o.out, result, out);
  return 0;
}

int transform_cmd(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  auto ont = load_ontology_file(o.ontology);
  auto mode = parse_cnf_mode(o.mode);
  TaggerModel tagger;
  if (mode == CnfMode::PosPadded) tagger = load_tagger_file(o.tagger);
  Input input(o.in, in);
  auto ds = read_corpus(input.get(), o.in.empty() ? "stdin" : fs::path(o.in).stem().string());
  auto docs = transform_corpus(ds, ont, tagger, mode, o.workers);
  emit(o.out, write_cnf_jsonl(docs), out);
  err << "transformed " << docs.size() << " records (" << to_string(mode) << ")\n";
  return 0;
}

int embed_train_cmd(const Options& o, std::ostream& err) {
  auto docs = read_cnf_file(o.cnf);
  auto ont = load_ontology_file(o.ontology);
  auto table = symbol_table(ont, TagSet::canonical());
  auto model = train_embeddings(docs, o.embed, table, [&](std::size_t epoch, const EmbeddingModel&) {
    err << "epoch " << epoch << "/" << o.embed.epochs << "\n";
  });
  io::write_file_atomic(o.out, serialize(model));
  return 0;
}

int embed_similar_cmd(const Options& o, std::ostream& out) {
  auto model = load_embedding_file(o.model);
  if (!model.symbol_index(o.symbol)) {
    throw Error(ErrorCode::InvalidArgument, "symbol '" + o.symbol + "' is not in " + o.model);
  }
  std::string result;
  for (const auto& [sym, cos] : most_similar(o.symbol, model, o.top)) {
    result += sym + "\t" + io::format_double(cos) + "\n";
  }
  emit(o.out, result, out);
  return 0;
}

struct LoadedResources {
  std::optional<Ontology> ontology;
  std::optional<TaggerModel> tagger;
  std::optional<EmbeddingModel> embedding;
  PipelineResources view;
};

void load_resources(const Options& o, const PipelineConfig& config, LoadedResources& r) {
  if (config.mode != InputMode::Raw) r.ontology = load_ontology_file(o.ontology);
  if (config.mode == InputMode::PosPadded) r.tagger = load_tagger_file(o.tagger);
  if (config.kind == PipelineKind::Doc2VecLogreg) {
    if (o.embed_model.empty()) throw Error(ErrorCode::InvalidArgument, "doc2vec-logreg needs --embed-model");
    r.embedding = load_embedding_file(o.embed_model);
  }
  r.view.ontology = r.ontology ? &*r.ontology : nullptr;
  r.view.tagger = r.tagger ? &*r.tagger : nullptr;
  r.view.embedding = r.embedding ? &*r.embedding : nullptr;
  r.view.workers = o.workers;
}

int train_cmd(const Options& o, std::ostream& err) {
  PipelineConfig config;
  config.kind = parse_pipeline_kind(o.pipeline);
  config.mode = parse_input_mode(o.mode);
  config.features = parse_feature_mode(o.features);
  config.train = o.train_config;
  config.train.seed = o.seed;
  config.infer_epochs = o.infer_epochs;
  config.infer_seed = o.seed;
  LoadedResources res;
  load_resources(o, config, res);
  auto ds = read_corpus_file(o.train);
  auto model = train_pipeline(ds, config, res.view);
  if (model.classifier.degenerate) err << "warning: training labels contain a single class; constant predictor\n";
  io::write_file_atomic(o.out, serialize(model));
  err << "trained " << to_string(config.kind) << " on " << ds.size() << " records\n";
  return 0;
}

int evaluate_cmd(const Options& o, std::ostream& out, std::ostream& err) {
  auto model = load_pipeline_file(o.model);
  LoadedResources res;
  load_resources(o, model.config, res);
  auto train = read_corpus_file(o.train);
  std::vector<Dataset> evals;
  for (const auto& path : o.eval) evals.push_back(read_corpus_file(path));

  auto fitted = PipelineClassifier::fitted(model, res.view);
  auto factory = [&]() { return std::make_unique<PipelineClassifier>(model.config, res.view); };
  ExperimentConfig ec;
  ec.folds = o.folds;
  ec.seed = o.seed;
  auto result = run_experiment(train, evals, factory, ec, &fitted);

  std::string method = std::string(to_string(model.config.kind)) + "/" + std::string(to_string(model.config.mode)) +
                       "/" + std::string(to_string(model.config.features));
  emit(o.report, format_report(result.report, method, result.folds), out);
  if (!o.pr_dir.empty()) {
    fs::create_directories(o.pr_dir);
    for (std::size_t i = 0; i < result.curves.size(); ++i) {
      const auto& name = result.report.per_dataset[i].name;
      if (result.curves[i].points.empty()) {
        err << "no positives in " << name << "; skipping its precision-recall curve\n";
        continue;
      }
      io::write_file_atomic(fs::path(o.pr_dir) / (name + ".tsv"), format_pr_curve(result.curves[i]));
    }
  }
  return 0;
}

int corpus_stats_cmd(const Options& o, std::ostream& out) {
  auto ds = read_corpus_file(o.path);
  auto s = ds.stats();
  char frac[32];
  std::snprintf(frac, sizeof frac, "%.4f", s.positive_fraction);
  out << "name=" << ds.name() << " count=" << s.count << " labeled=" << s.labeled << " positives=" << s.positives
      << " negatives=" << (s.labeled - s.positives) << " positive_fraction=" << frac << "\n";
  return 0;
}

int corpus_dedup_cmd(const Options& o, std::ostream& err) {
  auto ds = read_corpus_file(o.in);
  auto result = dedup(ds);
  std::string log;
  for (const auto& e : result.log) log += e.id + "\t" + e.reason + "\n";
  io::write_file_atomic(o.out, write_corpus(result.dataset));
  if (!o.log.empty()) io::write_file_atomic(o.log, log);
  err << "kept " << result.dataset.size() << " of " << ds.size() << " records\n";
  return 0;
}

int corpus_split_cmd(const Options& o) {
  auto ds = read_corpus_file(o.in);
  auto [train, test] = split(ds, o.frac, o.seed, o.stratified);
  io::write_file_atomic(o.out_train, write_corpus(train));
  io::write_file_atomic(o.out_test, write_corpus(test));
  return 0;
}

int corpus_synth_cmd(const Options& o, std::ostream& out) {
  SynthConfig c;
  c.disease = parse_synth_disease(o.disease);
  c.count = o.count;
  c.prevalence = o.prevalence;
  c.seed = o.seed;
  c.id_prefix = o.id_prefix.empty() ? o.disease : o.id_prefix;
  c.name = o.name.empty() ? "synth-" + o.disease : o.name;
  emit(o.out, write_corpus(synth_corpus(c)), out);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Concept Normal Form pipeline for disease-incidence text classification", "cnf-epi"};
  app.require_subcommand(1);

  // ontology
  auto* ontology = app.add_subcommand("ontology", "Validate or summarize an ontology file");
  ontology->require_subcommand(1);
  auto* ont_validate = ontology->add_subcommand("validate", "Check an ontology file");
  auto* ont_stats = ontology->add_subcommand("stats", "Print concept and word counts");
  for (auto* sub : {ont_validate, ont_stats}) {
    add_common(sub, o);
    sub->add_option("path", o.path, "Ontology file")->required();
  }

  // tokenize
  auto* tokenize = app.add_subcommand("tokenize", "Normalize and tokenize one text per line");
  add_common(tokenize, o);
  tokenize->add_option("--in", o.in, "Input file (default stdin)");
  tokenize->add_option("--out", o.out, "Output file (default stdout)");

  // tagger
  auto* tagger = app.add_subcommand("tagger", "Train or apply the part-of-speech tagger");
  tagger->require_subcommand(1);
  auto* tagger_train = tagger->add_subcommand("train", "Train an averaged-perceptron tagger");
  add_common(tagger_train, o);
  tagger_train->add_option("--corpus", o.corpus, "Tagged corpus, surface_TAG tokens")->required();
  tagger_train->add_option("--epochs", o.tagger_epochs, "Training epochs")->check(CLI::PositiveNumber)->capture_default_str();
  tagger_train->add_option("--seed", o.seed, "Shuffle seed")->capture_default_str();
  tagger_train->add_option("--out", o.out, "Model output file")->required();
  auto* tagger_tag = tagger->add_subcommand("tag", "Tag one text per line");
  add_common(tagger_tag, o);
  o.model = data_dir() + "/default.tagger";
  tagger_tag->add_option("--model", o.model, "Tagger model file")->capture_default_str();
  tagger_tag->add_option("--in", o.in, "Input file (default stdin)");
  tagger_tag->add_option("--out", o.out, "Output file (default stdout)");

  // transform
  auto* transform = app.add_subcommand("transform", "Convert a corpus to Concept Normal Form");
  add_common(transform, o);
  transform->add_option("--in", o.in, "Corpus JSONL (default stdin)");
  transform->add_option("--out", o.out, "CNF JSONL output (default stdout)");
  transform->add_option("--mode", o.mode, "plain | pos-padded")->check(CLI::IsMember(mode_names()))->capture_default_str();
  add_ontology(transform, o);
  add_tagger(transform, o);

  // embed
  auto* embed = app.add_subcommand("embed", "Train or query paragraph-vector embeddings");
  embed->require_subcommand(1);
  auto* embed_train = embed->add_subcommand("train", "Train PV-DM embeddings on a CNF corpus");
  add_common(embed_train, o);
  embed_train->add_option("--cnf", o.cnf, "CNF JSONL corpus")->required();
  add_ontology(embed_train, o);
  embed_train->add_option("--dim", o.embed.dim, "Vector dimension")->check(CLI::PositiveNumber)->capture_default_str();
  embed_train->add_option("--window", o.embed.window, "Context positions per side")->check(CLI::PositiveNumber)->capture_default_str();
  embed_train->add_option("--negative", o.embed.negative, "Noise draws per position")->check(CLI::PositiveNumber)->capture_default_str();
  embed_train->add_option("--epochs", o.embed.epochs, "Training epochs")->check(CLI::PositiveNumber)->capture_default_str();
  embed_train->add_option("--alpha-start", o.embed.alpha_start, "Initial learning rate")->capture_default_str();
  embed_train->add_option("--alpha-end", o.embed.alpha_end, "Final learning rate")->capture_default_str();
  embed_train->add_option("--noise-exponent", o.embed.noise_exponent, "Unigram noise exponent")->capture_default_str();
  embed_train->add_option("--seed", o.embed.seed, "Initialization and sampling seed")->capture_default_str();
  embed_train->add_option("--out", o.out, "Model output file")->required();
  auto* embed_similar = embed->add_subcommand("similar", "Nearest symbols by cosine");
  add_common(embed_similar, o);
  embed_similar->add_option("--model", o.model, "Embedding model file")->required();
  embed_similar->add_option("--symbol", o.symbol, "Query symbol")->required();
  embed_similar->add_option("--top", o.top, "Number of neighbours")->check(CLI::PositiveNumber)->capture_default_str();
  embed_similar->add_option("--out", o.out, "Output file (default stdout)");

  // train
  auto* train = app.add_subcommand("train", "Train a relevance classifier pipeline");
  add_common(train, o);
  train->add_option("--pipeline", o.pipeline, "bow-sgd | doc2vec-logreg")
      ->check(CLI::IsMember({"bow-sgd", "doc2vec-logreg"}))
      ->capture_default_str();
  train->add_option("--mode", o.mode, "raw | plain | pos-padded")
      ->check(CLI::IsMember({"raw", "plain", "plain-oov", "pos-padded"}))
      ->capture_default_str();
  train->add_option("--features", o.features, "unigram | unibigram")
      ->check(CLI::IsMember({"unigram", "unibigram", "unigram+bigram"}))
      ->capture_default_str();
  train->add_option("--train", o.train, "Labeled training corpus")->required();
  add_ontology(train, o);
  add_tagger(train, o);
  train->add_option("--embed-model", o.embed_model, "Embedding model (doc2vec-logreg)");
  train->add_option("--seed", o.seed, "Training seed")->capture_default_str();
  train->add_option("--epochs", o.train_config.epochs, "SGD epochs")->capture_default_str();
  train->add_option("--alpha0", o.train_config.alpha0, "Initial SGD rate")->capture_default_str();
  train->add_option("--l2", o.train_config.l2, "L2 penalty")->capture_default_str();
  train->add_flag("--shuffle,!--no-shuffle", o.train_config.shuffle, "Shuffle rows every epoch")->capture_default_str();
  train->add_flag("--row-l2-normalize", o.train_config.row_l2_normalize, "Scale rows to unit norm")->capture_default_str();
  train->add_option("--infer-epochs", o.infer_epochs, "Inference epochs for unseen documents")->capture_default_str();
  train->add_option("--out", o.out, "Model output file")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Cross-dataset evaluation report");
  add_common(evaluate, o);
  evaluate->add_option("--model", o.model, "Pipeline model file")->required();
  evaluate->add_option("--train", o.train, "Training corpus, scored by cross-validation")->required();
  evaluate->add_option("--eval", o.eval, "Evaluation corpus (repeatable)");
  add_ontology(evaluate, o);
  add_tagger(evaluate, o);
  evaluate->add_option("--embed-model", o.embed_model, "Embedding model (doc2vec-logreg)");
  evaluate->add_option("--folds", o.folds, "Cross-validation folds")->check(CLI::Range(2, 1000000))->capture_default_str();
  evaluate->add_option("--seed", o.seed, "Fold seed")->capture_default_str();
  evaluate->add_option("--report", o.report, "Report TSV (default stdout)");
  evaluate->add_option("--pr-curve-dir", o.pr_dir, "Directory for precision-recall curves");

  // corpus
  auto* corpus = app.add_subcommand("corpus", "Corpus statistics, deduplication, splitting and synthesis");
  corpus->require_subcommand(1);
  auto* corpus_stats = corpus->add_subcommand("stats", "Record and label counts");
  add_common(corpus_stats, o);
  corpus_stats->add_option("path", o.path, "Corpus JSONL")->required();
  auto* corpus_dedup = corpus->add_subcommand("dedup", "Drop retweets and exact duplicates");
  add_common(corpus_dedup, o);
  corpus_dedup->add_option("--in", o.in, "Corpus JSONL")->required();
  corpus_dedup->add_option("--out", o.out, "Deduplicated corpus")->required();
  corpus_dedup->add_option("--log", o.log, "Removal log, id<TAB>reason");
  auto* corpus_split = corpus->add_subcommand("split", "Seeded train/test split");
  add_common(corpus_split, o);
  corpus_split->add_option("--in", o.in, "Corpus JSONL")->required();
  corpus_split->add_option("--frac", o.frac, "Training fraction in (0, 1)")->capture_default_str();
  corpus_split->add_option("--seed", o.seed, "Shuffle seed")->capture_default_str();
  corpus_split->add_flag("--stratified", o.stratified, "Preserve the positive fraction")->capture_default_str();
  corpus_split->add_option("--out-train", o.out_train, "Training part")->required();
  corpus_split->add_option("--out-test", o.out_test, "Test part")->required();
  auto* corpus_synth = corpus->add_subcommand("synth", "Generate a labeled synthetic corpus");
  add_common(corpus_synth, o);
  corpus_synth->add_option("--disease", o.disease, "a | b")->check(CLI::IsMember({"a", "b"}))->capture_default_str();
  corpus_synth->add_option("--count", o.count, "Number of records")->capture_default_str();
  corpus_synth->add_option("--prevalence", o.prevalence, "Positive fraction")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  corpus_synth->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  corpus_synth->add_option("--id-prefix", o.id_prefix, "Record id prefix (default: disease)");
  corpus_synth->add_option("--name", o.name, "Dataset name (default: synth-<disease>)");
  corpus_synth->add_option("--out", o.out, "Output file (default stdout)");

  std::vector<std::string> expanded;
  try {
    expanded = expand_config(args);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_validation_error(e.code()) ? 2 : 1;
  }
  std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    auto echo = [&](const CLI::App* sub, const std::string& primary) { echo_config(*sub, primary, err); };
    if (ont_validate->parsed()) return ontology_validate(o, out);
    if (ont_stats->parsed()) return ontology_stats(o, out);
    if (tokenize->parsed()) return tokenize_cmd(o, in, out);
    if (tagger_train->parsed()) {
      echo(tagger_train, o.out);
      return tagger_train_cmd(o, err);
    }
    if (tagger_tag->parsed()) return tagger_tag_cmd(o, in, out);
    if (transform->parsed()) {
      int rc = transform_cmd(o, in, out, err);
      echo(transform, o.out);
      return rc;
    }
    if (embed_train->parsed()) {
      int rc = embed_train_cmd(o, err);
      echo(embed_train, o.out);
      return rc;
    }
    if (embed_similar->parsed()) return embed_similar_cmd(o, out);
    if (train->parsed()) {
      int rc = train_cmd(o, err);
      echo(train, o.out);
      return rc;
    }
    if (evaluate->parsed()) {
      int rc = evaluate_cmd(o, out, err);
      echo(evaluate, o.report);
      return rc;
    }
    if (corpus_stats->parsed()) return corpus_stats_cmd(o, out);
    if (corpus_dedup->parsed()) {
      int rc = corpus_dedup_cmd(o, err);
      echo(corpus_dedup, o.out);
      return rc;
    }
    if (corpus_split->parsed()) {
      int rc = corpus_split_cmd(o);
      echo(corpus_split, o.out_train);
      return rc;
    }
    if (corpus_synth->parsed()) {
      int rc = corpus_synth_cmd(o, out);
      echo(corpus_synth, o.out);
      return rc;
    }
    err << app.help();
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_validation_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cnfepi::cli
