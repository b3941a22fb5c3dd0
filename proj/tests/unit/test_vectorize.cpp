#include <doctest.h>

#include <map>
#include <sstream>

#include "cnfepi/error.hpp"
#include "cnfepi/random.hpp"
#include "cnfepi/vectorize.hpp"

using namespace cnfepi;

namespace {

SymbolTable table_186() {
  std::string text;
  for (int i = 0; i < 136; ++i) text += "C" + std::to_string(i) + "\tw" + std::to_string(i) + "\n";
  std::istringstream in(text);
  return symbol_table(load_ontology(in), TagSet::canonical());
}

CnfDocument doc(std::vector<std::string> symbols) { return {std::move(symbols), "d", std::nullopt}; }

std::map<std::string, std::uint32_t> named(const SparseVector& v, const FeatureSpace& space) {
  std::map<std::string, std::uint32_t> out;
  for (auto [i, c] : v.entries) out[space.names()[i]] = c;
  return out;
}

}  // namespace

TEST_CASE("unigram dimension is the symbol table size") {
  auto table = table_186();
  CHECK(fit(FeatureMode::Unigram, {}, table).dimension() == 186);
  CHECK(fit(FeatureMode::Unigram, {doc({"C1", "C2", "NN"})}, table).dimension() == 186);
}

TEST_CASE("bigram fit on one document") {
  auto table = table_186();
  auto space = fit(FeatureMode::UnigramBigram, {doc({"C0", "C1", "C0"})}, table);
  CHECK(space.dimension() == 188);
  CHECK(space.unigram_count() == 186);
  CHECK(space.names()[186] == bigram_name("C0", "C1"));
  CHECK(space.names()[187] == bigram_name("C1", "C0"));
  CHECK(bigram_name("C0", "C1") == "C0__C1");
}

TEST_CASE("bigram fit on an empty corpus") {
  try {
    fit(FeatureMode::UnigramBigram, {}, table_186());
    FAIL("expected EmptyCorpus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyCorpus);
  }
}

TEST_CASE("transform counts unigrams and bigrams") {
  auto table = table_186();
  auto d = doc({"C0", "C1", "C0"});
  auto space = fit(FeatureMode::UnigramBigram, {d}, table);
  auto v = transform(d, space);
  CHECK(named(v, space) == std::map<std::string, std::uint32_t>{{"C0", 2}, {"C1", 1}, {"C0__C1", 1}, {"C1__C0", 1}});
  CHECK(v.total() == 5);
  CHECK(v.dimension == 188);
}

TEST_CASE("single-symbol document has only its unigram") {
  auto table = table_186();
  auto space = fit(FeatureMode::UnigramBigram, {doc({"C0", "C1"})}, table);
  auto v = transform(doc({"C5"}), space);
  CHECK(named(v, space) == std::map<std::string, std::uint32_t>{{"C5", 1}});
  CHECK(transform(doc({}), space).entries.empty());
}

TEST_CASE("unseen bigrams are dropped, unknown symbols are errors") {
  auto table = table_186();
  auto space = fit(FeatureMode::UnigramBigram, {doc({"C0", "C1"})}, table);
  auto v = transform(doc({"C1", "C0"}), space);
  CHECK(named(v, space) == std::map<std::string, std::uint32_t>{{"C0", 1}, {"C1", 1}});
  try {
    transform(doc({"C0", "notasymbol"}), space);
    FAIL("expected UnknownSymbol");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownSymbol);
  }
}

TEST_CASE("open raw space drops unseen tokens") {
  auto space = fit_raw(FeatureMode::UnigramBigram, {{"i", "have", "flu"}, {"flu", "season"}});
  CHECK_FALSE(space.closed());
  CHECK(space.unigram_count() == 4);
  std::vector<std::string> seq = {"i", "have", "listeria"};
  auto v = transform(std::span<const std::string>(seq), space);
  CHECK(named(v, space) == std::map<std::string, std::uint32_t>{{"have", 1}, {"i", 1}, {"i__have", 1}});
}

TEST_CASE("fingerprint tracks the feature space") {
  auto table = table_186();
  auto a = fit(FeatureMode::UnigramBigram, {doc({"C0", "C1"})}, table);
  auto b = fit(FeatureMode::UnigramBigram, {doc({"C0", "C1"})}, table);
  auto c = fit(FeatureMode::UnigramBigram, {doc({"C1", "C0"})}, table);
  auto u = fit(FeatureMode::Unigram, {doc({"C0", "C1"})}, table);
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a.fingerprint() != c.fingerprint());
  CHECK(a.fingerprint() != u.fingerprint());
}

TEST_CASE("mode parsing") {
  CHECK(parse_feature_mode("unigram") == FeatureMode::Unigram);
  CHECK(parse_feature_mode("unibigram") == FeatureMode::UnigramBigram);
  CHECK_THROWS_AS(parse_feature_mode("trigram"), Error);
}

TEST_CASE("property: counts are sorted, positive and sum to the expected totals") {
  auto table = table_186();
  Rng rng(3);
  std::vector<CnfDocument> corpus;
  for (int i = 0; i < 60; ++i) {
    std::vector<std::string> s;
    for (std::size_t j = 0, n = rng.index(12); j < n; ++j) s.push_back(table.at(rng.index(table.size())));
    corpus.push_back(doc(s));
  }
  auto space = fit(FeatureMode::UnigramBigram, corpus, table);
  for (const auto& d : corpus) {
    auto v = transform(d, space);
    std::size_t n = d.symbols.size();
    CHECK(v.total() == n + (n > 0 ? n - 1 : 0));
    for (std::size_t k = 0; k < v.entries.size(); ++k) {
      CHECK(v.entries[k].second > 0);
      if (k > 0) CHECK(v.entries[k - 1].first < v.entries[k].first);
    }
  }
}
