#include "cnfepi/embed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "cnfepi/error.hpp"
#include "cnfepi/io.hpp"

namespace cnfepi {

void EmbeddingConfig::validate() const {
  auto bad = [](const std::string& msg) { return Error(ErrorCode::InvalidArgument, "embedding config: " + msg); };
  if (dim < 1) throw bad("dim must be at least 1");
  if (window < 1) throw bad("window must be at least 1");
  if (negative < 1) throw bad("negative must be at least 1");
  if (epochs < 1) throw bad("epochs must be at least 1");
  if (!(alpha_end > 0.0 && alpha_end <= alpha_start)) throw bad("need 0 < alpha_end <= alpha_start");
  if (!std::isfinite(noise_exponent)) throw bad("noise exponent must be finite");
}

NoiseTable::NoiseTable(std::span<const std::uint64_t> counts, double exponent) {
  cdf_.resize(counts.size());
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    total += counts[i] ? std::pow(static_cast<double>(counts[i]), exponent) : 0.0;
    cdf_[i] = total;
  }
  if (total <= 0.0) throw Error(ErrorCode::EmptyCorpus, "noise distribution has no mass");
  for (auto& c : cdf_) c /= total;
  // Pin the tail so sampling never runs off the end.
  for (std::size_t i = cdf_.size(); i-- > 0;) {
    if (counts[i]) {
      for (std::size_t j = i; j < cdf_.size(); ++j) cdf_[j] = 1.0;
      break;
    }
  }
}

NoiseTable NoiseTable::from_cdf(std::vector<double> cdf) {
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    if (!(cdf[i] >= 0.0) || (i && cdf[i] < cdf[i - 1])) throw Error(ErrorCode::ModelFormat, "noise table is not monotone");
  }
  if (cdf.empty() || std::abs(cdf.back() - 1.0) > 1e-9) throw Error(ErrorCode::ModelFormat, "noise table must end at 1");
  NoiseTable t;
  t.cdf_ = std::move(cdf);
  return t;
}

std::size_t NoiseTable::sample(Rng& rng) const {
  double u = rng.uniform();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<std::size_t>(it - cdf_.begin());
}

double NoiseTable::probability(std::size_t index) const {
  return index == 0 ? cdf_[0] : cdf_[index] - cdf_[index - 1];
}

std::optional<std::size_t> EmbeddingModel::symbol_index(std::string_view symbol) const {
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i] == symbol) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> EmbeddingModel::doc_index(std::string_view id) const {
  for (std::size_t i = 0; i < doc_ids.size(); ++i) {
    if (doc_ids[i] == id) return i;
  }
  return std::nullopt;
}

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Scratch buffers reused across positions.
struct Workspace {
  std::vector<double> mean;
  std::vector<double> grad_mean;
  std::vector<double> coef;

  explicit Workspace(std::size_t dim) : mean(dim), grad_mean(dim) {}
};

void context_mean(const Matrix& input, std::span<const double> doc, const PositionSample& s, std::vector<double>& out) {
  std::copy(doc.begin(), doc.end(), out.begin());
  for (auto c : s.context) {
    auto r = input.row(c);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += r[k];
  }
  double inv = 1.0 / static_cast<double>(1 + s.context.size());
  for (auto& x : out) x *= inv;
}

// Fills ws.mean, ws.coef (dL/dscore for target then negatives) and
// ws.grad_mean (dL/dmean). Returns the loss.
double evaluate_position(const Matrix& input, const Matrix& output, std::span<const double> doc,
                         const PositionSample& s, Workspace& ws) {
  context_mean(input, doc, s, ws.mean);
  ws.coef.resize(1 + s.negatives.size());
  std::fill(ws.grad_mean.begin(), ws.grad_mean.end(), 0.0);

  double score = dot(output.row(s.target), ws.mean);
  double loss = -log_sigmoid(score);
  ws.coef[0] = sigmoid(score) - 1.0;
  for (std::size_t j = 0; j < s.negatives.size(); ++j) {
    double sn = dot(output.row(s.negatives[j]), ws.mean);
    loss -= log_sigmoid(-sn);
    ws.coef[1 + j] = sigmoid(sn);
  }
  auto accumulate = [&](std::size_t row, double coef) {
    auto u = output.row(row);
    for (std::size_t k = 0; k < ws.grad_mean.size(); ++k) ws.grad_mean[k] += coef * u[k];
  };
  accumulate(s.target, ws.coef[0]);
  for (std::size_t j = 0; j < s.negatives.size(); ++j) accumulate(s.negatives[j], ws.coef[1 + j]);
  return loss;
}

// One SGD step at rate alpha from a single evaluation point.
double sgd_step(Matrix& input, Matrix& output, std::span<double> doc, const PositionSample& s, double alpha,
                bool update_symbols, Workspace& ws) {
  double loss = evaluate_position(input, output, doc, s, ws);
  const std::size_t dim = ws.mean.size();
  if (update_symbols) {
    auto push = [&](std::size_t row, double coef) {
      auto u = output.row(row);
      double g = alpha * coef;
      for (std::size_t k = 0; k < dim; ++k) u[k] -= g * ws.mean[k];
    };
    push(s.target, ws.coef[0]);
    for (std::size_t j = 0; j < s.negatives.size(); ++j) push(s.negatives[j], ws.coef[1 + j]);
  }
  double share = alpha / static_cast<double>(1 + s.context.size());
  for (std::size_t k = 0; k < dim; ++k) doc[k] -= share * ws.grad_mean[k];
  if (update_symbols) {
    for (auto c : s.context) {
      auto r = input.row(c);
      for (std::size_t k = 0; k < dim; ++k) r[k] -= share * ws.grad_mean[k];
    }
  }
  return loss;
}

std::vector<std::vector<std::size_t>> encode_corpus(const std::vector<CnfDocument>& corpus,
                                                    const std::unordered_map<std::string, std::size_t>& index) {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(corpus.size());
  for (const auto& doc : corpus) {
    if (doc.symbols.empty()) throw Error(ErrorCode::EmptyDocument, "document '" + doc.source_id + "' is empty");
    std::vector<std::size_t> ids;
    ids.reserve(doc.symbols.size());
    for (const auto& s : doc.symbols) {
      auto it = index.find(s);
      if (it == index.end()) {
        throw Error(ErrorCode::UnknownSymbol, "symbol '" + s + "' in '" + doc.source_id + "' is not in the vocabulary");
      }
      ids.push_back(it->second);
    }
    out.push_back(std::move(ids));
  }
  return out;
}

void fill_sample(const std::vector<std::size_t>& doc, std::size_t i, std::size_t window, std::size_t negative,
                 const NoiseTable& noise, Rng& rng, PositionSample& s) {
  s.target = doc[i];
  s.context.clear();
  std::size_t lo = i >= window ? i - window : 0;
  std::size_t hi = std::min(doc.size() - 1, i + window);
  for (std::size_t j = lo; j <= hi; ++j) {
    if (j != i) s.context.push_back(doc[j]);
  }
  s.negatives.clear();
  if (noise.probability(s.target) >= 1.0 - 1e-12) return;  // nothing else to contrast with
  for (std::size_t n = 0; n < negative; ++n) {
    std::size_t draw;
    do {
      draw = noise.sample(rng);
    } while (draw == s.target);
    s.negatives.push_back(draw);
  }
}

void init_uniform(std::span<double> values, double half_width, Rng& rng) {
  for (auto& v : values) v = rng.uniform(-half_width, half_width);
}

}  // namespace

double position_loss(const Matrix& input, const Matrix& output, std::span<const double> doc,
                     const PositionSample& sample) {
  Workspace ws(doc.size());
  return evaluate_position(input, output, doc, sample, ws);
}

PositionGradient position_gradient(const Matrix& input, const Matrix& output, std::span<const double> doc,
                                   const PositionSample& sample) {
  Workspace ws(doc.size());
  evaluate_position(input, output, doc, sample, ws);
  const std::size_t dim = doc.size();
  PositionGradient g{Matrix(input.rows(), dim), Matrix(output.rows(), dim), std::vector<double>(dim)};
  auto out_row = [&](std::size_t row, double coef) {
    auto r = g.output.row(row);
    for (std::size_t k = 0; k < dim; ++k) r[k] += coef * ws.mean[k];
  };
  out_row(sample.target, ws.coef[0]);
  for (std::size_t j = 0; j < sample.negatives.size(); ++j) out_row(sample.negatives[j], ws.coef[1 + j]);
  double inv = 1.0 / static_cast<double>(1 + sample.context.size());
  for (std::size_t k = 0; k < dim; ++k) g.doc[k] = ws.grad_mean[k] * inv;
  for (auto c : sample.context) {
    auto r = g.input.row(c);
    for (std::size_t k = 0; k < dim; ++k) r[k] += ws.grad_mean[k] * inv;
  }
  return g;
}

EmbeddingModel train_embeddings(const std::vector<CnfDocument>& corpus, const EmbeddingConfig& config,
                                const std::vector<std::string>& vocabulary, const EpochCallback& on_epoch) {
  config.validate();
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "embedding training needs at least one document");

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    if (!index.emplace(vocabulary[i], i).second) {
      throw Error(ErrorCode::InvalidArgument, "vocabulary lists '" + vocabulary[i] + "' twice");
    }
  }
  auto encoded = encode_corpus(corpus, index);

  EmbeddingModel model;
  model.config = config;
  model.symbols = vocabulary;
  model.counts.assign(vocabulary.size(), 0);
  std::size_t positions = 0;
  for (const auto& doc : encoded) {
    positions += doc.size();
    for (auto s : doc) ++model.counts[s];
  }
  model.doc_ids.reserve(corpus.size());
  for (const auto& doc : corpus) model.doc_ids.push_back(doc.source_id);
  model.noise = NoiseTable(model.counts, config.noise_exponent);

  const std::size_t dim = config.dim;
  const double half = 0.5 / static_cast<double>(dim);
  Rng rng(config.seed);
  model.input = Matrix(vocabulary.size(), dim);
  model.output = Matrix(vocabulary.size(), dim);
  model.docs = Matrix(corpus.size(), dim);
  init_uniform(model.input.data(), half, rng);
  init_uniform(model.docs.data(), half, rng);

  Workspace ws(dim);
  PositionSample sample;
  const double total = static_cast<double>(positions) * static_cast<double>(config.epochs);
  std::size_t done = 0;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t d = 0; d < encoded.size(); ++d) {
      const auto& doc = encoded[d];
      for (std::size_t i = 0; i < doc.size(); ++i) {
        double alpha = config.alpha_start - (config.alpha_start - config.alpha_end) * (static_cast<double>(done) / total);
        fill_sample(doc, i, config.window, config.negative, model.noise, rng, sample);
        sgd_step(model.input, model.output, model.docs.row(d), sample, alpha, true, ws);
        ++done;
      }
    }
    if (on_epoch) on_epoch(epoch, model);
  }
  return model;
}

EmbeddingModel train_embeddings(const std::vector<CnfDocument>& corpus, const EmbeddingConfig& config,
                                const SymbolTable& symbols, const EpochCallback& on_epoch) {
  return train_embeddings(corpus, config, symbols.symbols(), on_epoch);
}

std::vector<double> infer_doc(const CnfDocument& doc, const EmbeddingModel& model, std::size_t epochs,
                              std::uint64_t seed) {
  if (doc.symbols.empty()) throw Error(ErrorCode::EmptyDocument, "document '" + doc.source_id + "' is empty");
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < model.symbols.size(); ++i) index.emplace(model.symbols[i], i);
  auto encoded = encode_corpus({doc}, index).front();

  const auto& config = model.config;
  const std::size_t dim = config.dim;
  Rng rng(seed);
  std::vector<double> vec(dim);
  init_uniform(vec, 0.5 / static_cast<double>(dim), rng);

  // Symbol matrices stay frozen; sgd_step only writes them when asked to.
  auto& input = const_cast<Matrix&>(model.input);
  auto& output = const_cast<Matrix&>(model.output);
  Workspace ws(dim);
  PositionSample sample;
  const double total = static_cast<double>(encoded.size()) * static_cast<double>(epochs);
  std::size_t done = 0;
  for (std::size_t e = 0; e < epochs; ++e) {
    for (std::size_t i = 0; i < encoded.size(); ++i) {
      double alpha = config.alpha_start - (config.alpha_start - config.alpha_end) * (static_cast<double>(done) / total);
      fill_sample(encoded, i, config.window, config.negative, model.noise, rng, sample);
      sgd_step(input, output, vec, sample, alpha, false, ws);
      ++done;
    }
  }
  return vec;
}

double mean_corpus_loss(const EmbeddingModel& model, const std::vector<CnfDocument>& corpus, std::uint64_t noise_seed) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < model.symbols.size(); ++i) index.emplace(model.symbols[i], i);
  auto encoded = encode_corpus(corpus, index);
  Rng rng(noise_seed);
  Workspace ws(model.config.dim);
  PositionSample sample;
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t d = 0; d < encoded.size(); ++d) {
    auto doc_vec = d < model.docs.rows() ? model.docs.row(d) : std::span<const double>{};
    if (doc_vec.empty()) throw Error(ErrorCode::InvalidArgument, "corpus is larger than the trained document set");
    for (std::size_t i = 0; i < encoded[d].size(); ++i) {
      fill_sample(encoded[d], i, model.config.window, model.config.negative, model.noise, rng, sample);
      sum += evaluate_position(model.input, model.output, doc_vec, sample, ws);
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double na = std::sqrt(dot(a, a));
  double nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

std::vector<std::pair<std::string, double>> most_similar(std::string_view symbol, const EmbeddingModel& model,
                                                         std::size_t n) {
  auto q = model.symbol_index(symbol);
  if (!q) throw Error(ErrorCode::UnknownSymbol, "symbol '" + std::string(symbol) + "' is not in the model");
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < model.symbols.size(); ++i) {
    if (i != *q) scored.emplace_back(cosine(model.input.row(*q), model.input.row(i)), i);
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < scored.size() && i < n; ++i) out.emplace_back(model.symbols[scored[i].second], scored[i].first);
  return out;
}

namespace {

constexpr std::string_view kMagic = "cnfepi-embed";
constexpr int kEmbedFormatVersion = 1;

void append_doubles(std::string& out, const std::vector<double>& values) {
  std::size_t offset = out.size();
  out.resize(offset + values.size() * sizeof(double));
  std::memcpy(out.data() + offset, values.data(), values.size() * sizeof(double));
}

}  // namespace

std::string serialize(const EmbeddingModel& model) {
  static_assert(std::endian::native == std::endian::little, "model files are little-endian");
  const auto& c = model.config;
  std::ostringstream h;
  h << kMagic << ' ' << kEmbedFormatVersion << '\n';
  h << "dim=" << c.dim << '\n'
    << "window=" << c.window << '\n'
    << "negative=" << c.negative << '\n'
    << "epochs=" << c.epochs << '\n'
    << "alpha_start=" << io::format_double(c.alpha_start) << '\n'
    << "alpha_end=" << io::format_double(c.alpha_end) << '\n'
    << "seed=" << c.seed << '\n'
    << "noise_exponent=" << io::format_double(c.noise_exponent) << '\n';
  h << "symbols=" << model.symbols.size() << '\n';
  for (std::size_t i = 0; i < model.symbols.size(); ++i) {
    h << nlohmann::json(model.symbols[i]).dump() << '\t' << model.counts[i] << '\n';
  }
  h << "docs=" << model.doc_ids.size() << '\n';
  for (const auto& id : model.doc_ids) h << nlohmann::json(id).dump() << '\n';
  h << "binary\n";
  std::string out = h.str();
  append_doubles(out, model.input.data());
  append_doubles(out, model.output.data());
  append_doubles(out, model.docs.data());
  append_doubles(out, model.noise.cdf());
  return out;
}

EmbeddingModel parse_embedding_model(std::string_view bytes) {
  auto fail = [](const std::string& msg) { return Error(ErrorCode::ModelFormat, "embedding model: " + msg); };
  std::size_t pos = 0;
  auto next_line = [&]() -> std::string_view {
    auto nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) throw fail("truncated header");
    auto line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    return line;
  };
  auto keyed = [&](std::string_view key) -> std::string_view {
    auto line = next_line();
    if (line.substr(0, key.size()) != key || line.size() <= key.size() || line[key.size()] != '=') {
      throw fail("expected '" + std::string(key) + "='");
    }
    return line.substr(key.size() + 1);
  };
  auto as_size = [&](std::string_view v) -> std::size_t {
    std::size_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) throw fail("bad integer '" + std::string(v) + "'");
    return out;
  };

  if (next_line() != std::string(kMagic) + " " + std::to_string(kEmbedFormatVersion)) throw fail("bad magic line");
  EmbeddingModel m;
  m.config.dim = as_size(keyed("dim"));
  m.config.window = as_size(keyed("window"));
  m.config.negative = as_size(keyed("negative"));
  m.config.epochs = as_size(keyed("epochs"));
  m.config.alpha_start = io::parse_double(keyed("alpha_start"));
  m.config.alpha_end = io::parse_double(keyed("alpha_end"));
  m.config.seed = as_size(keyed("seed"));
  m.config.noise_exponent = io::parse_double(keyed("noise_exponent"));
  std::size_t n_symbols = as_size(keyed("symbols"));
  for (std::size_t i = 0; i < n_symbols; ++i) {
    auto line = next_line();
    auto tab = line.rfind('\t');
    if (tab == std::string_view::npos) throw fail("bad symbol line");
    m.symbols.push_back(nlohmann::json::parse(line.substr(0, tab)).get<std::string>());
    m.counts.push_back(as_size(line.substr(tab + 1)));
  }
  std::size_t n_docs = as_size(keyed("docs"));
  for (std::size_t i = 0; i < n_docs; ++i) m.doc_ids.push_back(nlohmann::json::parse(next_line()).get<std::string>());
  if (next_line() != "binary") throw fail("missing binary marker");

  const std::size_t dim = m.config.dim;
  auto take = [&](Matrix& mat, std::size_t rows) {
    mat = Matrix(rows, dim);
    std::size_t n = rows * dim * sizeof(double);
    if (bytes.size() - pos < n) throw fail("truncated payload");
    std::memcpy(mat.data().data(), bytes.data() + pos, n);
    pos += n;
  };
  take(m.input, n_symbols);
  take(m.output, n_symbols);
  take(m.docs, n_docs);
  std::vector<double> cdf(n_symbols);
  if (bytes.size() - pos != n_symbols * sizeof(double)) throw fail("payload size mismatch");
  std::memcpy(cdf.data(), bytes.data() + pos, n_symbols * sizeof(double));
  m.noise = NoiseTable::from_cdf(std::move(cdf));
  return m;
}

EmbeddingModel load_embedding_file(const std::string& path) { return parse_embedding_model(io::read_file(path)); }

}  // namespace cnfepi
