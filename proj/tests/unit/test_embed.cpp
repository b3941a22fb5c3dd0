#include <doctest.h>

#include <cmath>
#include <numeric>

#include "cnfepi/embed.hpp"
#include "cnfepi/error.hpp"

using namespace cnfepi;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double scale) {
  Matrix m(r, c);
  for (auto& x : m.data()) x = rng.uniform(-scale, scale);
  return m;
}

// Straight transcription of the negative-sampling objective.
double oracle_loss(const Matrix& in, const Matrix& out, const std::vector<double>& doc, const PositionSample& s) {
  std::size_t dim = doc.size();
  std::vector<double> v(doc);
  for (auto c : s.context)
    for (std::size_t k = 0; k < dim; ++k) v[k] += in(c, k);
  for (auto& x : v) x /= static_cast<double>(s.context.size() + 1);
  auto score = [&](std::size_t row) {
    double t = 0;
    for (std::size_t k = 0; k < dim; ++k) t += out(row, k) * v[k];
    return t;
  };
  double loss = -std::log(1.0 / (1.0 + std::exp(-score(s.target))));
  for (auto n : s.negatives) loss -= std::log(1.0 / (1.0 + std::exp(score(n))));
  return loss;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6}); }

std::vector<CnfDocument> toy_corpus(std::size_t docs, std::size_t vocab, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CnfDocument> out;
  for (std::size_t d = 0; d < docs; ++d) {
    CnfDocument doc{{}, "d" + std::to_string(d), std::nullopt};
    for (std::size_t i = 0, n = 3 + rng.index(8); i < n; ++i) doc.symbols.push_back("s" + std::to_string(rng.index(vocab)));
    out.push_back(doc);
  }
  return out;
}

std::vector<std::string> vocab(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back("s" + std::to_string(i));
  return v;
}

EmbeddingConfig small_config() {
  EmbeddingConfig c;
  c.dim = 16;
  c.window = 2;
  c.negative = 4;
  c.epochs = 5;
  c.seed = 9;
  return c;
}

}  // namespace

TEST_CASE("loss matches the oracle and the gradient matches finite differences") {
  Rng rng(21);
  const std::size_t dim = 5, symbols = 12;
  Matrix in = random_matrix(symbols, dim, rng, 0.8);
  Matrix out = random_matrix(symbols, dim, rng, 0.8);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<double> doc(dim);
    for (auto& x : doc) x = rng.uniform(-0.8, 0.8);
    PositionSample s;
    s.target = rng.index(symbols);
    for (std::size_t i = 0, n = 1 + rng.index(4); i < n; ++i) s.context.push_back(rng.index(symbols));
    for (int i = 0; i < 3; ++i) s.negatives.push_back((s.target + 1 + rng.index(symbols - 1)) % symbols);

    CHECK(position_loss(in, out, doc, s) == doctest::Approx(oracle_loss(in, out, doc, s)).epsilon(1e-12));

    auto g = position_gradient(in, out, doc, s);
    const double h = 1e-5;
    auto fd = [&](double& param) {
      double keep = param;
      param = keep + h;
      double up = oracle_loss(in, out, doc, s);
      param = keep - h;
      double down = oracle_loss(in, out, doc, s);
      param = keep;
      return (up - down) / (2 * h);
    };
    for (std::size_t r = 0; r < symbols; ++r)
      for (std::size_t k = 0; k < dim; ++k) {
        CHECK(rel_err(g.input(r, k), fd(in(r, k))) < 1e-4);
        CHECK(rel_err(g.output(r, k), fd(out(r, k))) < 1e-4);
      }
    for (std::size_t k = 0; k < dim; ++k) CHECK(rel_err(g.doc[k], fd(doc[k])) < 1e-4);
  }
}

TEST_CASE("noise distribution follows count^0.75") {
  std::vector<std::uint64_t> counts = {50, 1, 0, 7, 300, 12, 3};
  NoiseTable t(counts, 0.75);
  std::vector<double> expected(counts.size());
  double z = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) z += expected[i] = std::pow(static_cast<double>(counts[i]), 0.75) * (counts[i] > 0);
  for (auto& e : expected) e /= z;
  for (std::size_t i = 0; i < counts.size(); ++i) CHECK(t.probability(i) == doctest::Approx(expected[i]).epsilon(1e-12));

  Rng rng(4);
  const int draws = 1000000;
  std::vector<double> hist(counts.size());
  for (int i = 0; i < draws; ++i) hist[t.sample(rng)] += 1.0 / draws;
  double tv = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) tv += 0.5 * std::abs(hist[i] - expected[i]);
  CHECK(tv < 0.01);
  CHECK(hist[2] == 0.0);
}

TEST_CASE("noise table construction errors") {
  std::vector<std::uint64_t> zeros = {0, 0};
  CHECK_THROWS_AS(NoiseTable(zeros, 0.75), Error);
  CHECK_THROWS_AS(NoiseTable::from_cdf({0.5, 0.4, 1.0}), Error);
  CHECK_THROWS_AS(NoiseTable::from_cdf({0.2, 0.9}), Error);
  CHECK(NoiseTable::from_cdf({0.25, 1.0}).probability(1) == doctest::Approx(0.75));
}

TEST_CASE("training is deterministic for a seed") {
  auto corpus = toy_corpus(20, 10, 1);
  auto a = train_embeddings(corpus, small_config(), vocab(10));
  auto b = train_embeddings(corpus, small_config(), vocab(10));
  CHECK(a == b);
  auto c = small_config();
  c.seed = 10;
  CHECK_FALSE(train_embeddings(corpus, c, vocab(10)) == a);
  CHECK(infer_doc(corpus[0], a, 10, 3) == infer_doc(corpus[0], a, 10, 3));
}

TEST_CASE("initialization ranges") {
  auto corpus = toy_corpus(5, 6, 2);
  auto cfg = small_config();
  cfg.epochs = 1;
  cfg.alpha_start = cfg.alpha_end = 1e-300;
  auto m = train_embeddings(corpus, cfg, vocab(6));
  const double half = 0.5 / static_cast<double>(cfg.dim);
  for (double x : m.input.data()) CHECK(std::abs(x) <= half);
  for (double x : m.docs.data()) CHECK(std::abs(x) <= half);
  for (double x : m.output.data()) CHECK(std::abs(x) < 1e-200);
}

TEST_CASE("inference with zero epochs returns the initial vector") {
  auto corpus = toy_corpus(5, 6, 2);
  auto m = train_embeddings(corpus, small_config(), vocab(6));
  auto v = infer_doc(corpus[1], m, 0, 77);
  Rng rng(77);
  const double half = 0.5 / static_cast<double>(m.config.dim);
  for (double x : v) CHECK(x == rng.uniform(-half, half));
}

TEST_CASE("inferred vectors are closest to their own training vector") {
  EmbeddingConfig cfg;
  cfg.dim = 20;
  cfg.window = 3;
  cfg.negative = 5;
  cfg.epochs = 40;
  cfg.seed = 5;
  // Documents built from disjoint symbol groups so each has a distinct signature.
  Rng rng(8);
  std::vector<CnfDocument> corpus;
  for (std::size_t d = 0; d < 50; ++d) {
    CnfDocument doc{{}, "d" + std::to_string(d), std::nullopt};
    std::size_t group = d % 10;
    for (int i = 0; i < 12; ++i) doc.symbols.push_back("s" + std::to_string(group * 4 + rng.index(4)));
    corpus.push_back(doc);
  }
  auto m = train_embeddings(corpus, cfg, vocab(40));
  Rng pick(12);
  double own = 0, other = 0;
  for (int t = 0; t < 20; ++t) {
    std::size_t d = pick.index(corpus.size());
    auto v = infer_doc(corpus[d], m, 40, 100 + t);
    own += cosine(v, m.docs.row(d));
    double mean = 0;
    for (std::size_t o = 0; o < corpus.size(); ++o)
      if (o != d) mean += cosine(v, m.docs.row(o)) / static_cast<double>(corpus.size() - 1);
    other += mean;
  }
  CHECK(own > other);
}

TEST_CASE("input errors") {
  auto check_code = [](auto fn, ErrorCode code) {
    try {
      fn();
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == code);
    }
  };
  check_code([] { train_embeddings({}, small_config(), vocab(3)); }, ErrorCode::EmptyCorpus);
  check_code([] { train_embeddings({CnfDocument{{}, "e", std::nullopt}}, small_config(), vocab(3)); },
             ErrorCode::EmptyDocument);
  check_code([] { train_embeddings({CnfDocument{{"zz"}, "e", std::nullopt}}, small_config(), vocab(3)); },
             ErrorCode::UnknownSymbol);
  auto m = train_embeddings(toy_corpus(3, 4, 1), small_config(), vocab(4));
  check_code([&] { infer_doc(CnfDocument{{}, "e", std::nullopt}, m, 5, 1); }, ErrorCode::EmptyDocument);
  auto bad = small_config();
  bad.dim = 0;
  check_code([&] { bad.validate(); }, ErrorCode::InvalidArgument);
}

TEST_CASE("loss decreases over early epochs") {
  auto corpus = toy_corpus(30, 12, 3);
  std::vector<double> losses;
  auto cfg = small_config();
  cfg.epochs = 5;
  train_embeddings(corpus, cfg, vocab(12), [&](std::size_t, const EmbeddingModel& m) {
    losses.push_back(mean_corpus_loss(m, corpus, 99));
  });
  REQUIRE(losses.size() == 5);
  for (std::size_t i = 1; i < losses.size(); ++i) {
    CHECK(std::isfinite(losses[i]));
    CHECK(losses[i] <= losses[i - 1] + 1e-3);
  }
  CHECK(losses.back() < losses.front());
}

TEST_CASE("a symbol holding all the noise mass draws no negatives") {
  std::vector<CnfDocument> corpus = {{{"s0", "s0", "s0"}, "a", std::nullopt}};
  auto m = train_embeddings(corpus, small_config(), vocab(3));
  for (double x : m.output.data()) CHECK(std::isfinite(x));
  CHECK(std::isfinite(mean_corpus_loss(m, corpus, 1)));
}

TEST_CASE("serialization is bit exact") {
  auto corpus = toy_corpus(6, 5, 4);
  auto m = train_embeddings(corpus, small_config(), vocab(5));
  auto bytes = serialize(m);
  auto back = parse_embedding_model(bytes);
  CHECK(back == m);
  CHECK(serialize(back) == bytes);
  CHECK_THROWS_AS(parse_embedding_model("cnfepi-embed 1\n"), Error);
  CHECK_THROWS_AS(parse_embedding_model(bytes.substr(0, bytes.size() - 3)), Error);
}

TEST_CASE("cosine and most_similar") {
  std::vector<double> a = {1, 0}, b = {0, 3}, z = {0, 0};
  CHECK(cosine(a, b) == 0.0);
  CHECK(cosine(a, z) == 0.0);
  CHECK(cosine(a, a) == doctest::Approx(1.0));

  EmbeddingModel m;
  m.config.dim = 2;
  m.symbols = {"q", "x", "y", "w"};
  m.input = Matrix(4, 2);
  m.input(0, 0) = 1;
  m.input(1, 0) = 2;  // same direction as q
  m.input(2, 1) = 1;
  m.input(3, 0) = 5;  // ties with x, later index
  auto top = most_similar("q", m, 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0].first == "x");
  CHECK(top[1].first == "w");
  CHECK(most_similar("q", m, 10).size() == 3);
  CHECK_THROWS_AS(most_similar("nope", m, 1), Error);
}
