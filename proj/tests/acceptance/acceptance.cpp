// Acceptance gate: one PASS/FAIL line per criterion, WARN for the soft check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../support/reference_table.hpp"
#include "cnfepi/cnf.hpp"
#include "cnfepi/corpus.hpp"
#include "cnfepi/embed.hpp"
#include "cnfepi/error.hpp"
#include "cnfepi/eval.hpp"
#include "cnfepi/learn.hpp"
#include "cnfepi/pipeline.hpp"
#include "cnfepi/postag.hpp"
#include "cnfepi/random.hpp"
#include "cnfepi/synth.hpp"

using namespace cnfepi;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

const Ontology& starter() {
  static const Ontology ont = load_ontology_file(CNFEPI_DATA_DIR "/starter.ont");
  return ont;
}

const TaggerModel& default_tagger() {
  static const TaggerModel model = load_tagger_file(CNFEPI_DATA_DIR "/default.tagger");
  return model;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome cnf_transcript() {
  auto tokens = normalize_tokenize("I have never had the flu!");
  std::string plain = join(to_cnf(tokens, starter()).symbols);
  std::string padded = join(to_cnf_pos(tokens, tag(tokens, default_tagger()), starter()).symbols);
  bool ok = plain == "SELF_REF HAVE FREQUENCY HAVE THE OOV" && padded == "SELF_REF HAVE FREQUENCY HAVE THE NN";
  return {ok, "plain='" + plain + "' pos-padded='" + padded + "'"};
}

Outcome reference_arithmetic() {
  std::size_t good = 0;
  double worst = 0;
  for (const auto& row : reference_rows()) {
    std::vector<DatasetMetrics> per;
    for (std::size_t d = 0; d < row.values.size(); ++d) {
      double v = row.values[d];
      per.push_back({"d" + std::to_string(d), Metrics{v, v, v}});
    }
    auto rep = generalization_report(per);
    double dm = std::abs(rep.mean.f1 - row.overall);
    double dv = std::abs(rep.variance->f1 - row.variance);
    worst = std::max({worst, dm, dv});
    good += dm <= 1e-4 + 1e-12 && dv <= 1e-4 + 1e-12;
  }
  return {good == reference_rows().size(),
          std::to_string(good) + "/" + std::to_string(reference_rows().size()) + " rows, max deviation " +
              fmt("%.2e", worst)};
}

Outcome gradient_check() {
  const std::size_t symbols = 12;
  std::vector<std::string> vocab;
  for (std::size_t i = 0; i < symbols; ++i) vocab.push_back("s" + std::to_string(i));
  Rng rng(31);
  std::vector<CnfDocument> corpus;
  for (std::size_t d = 0; d < 8; ++d) {
    CnfDocument doc{{}, "d" + std::to_string(d), std::nullopt};
    for (std::size_t i = 0, n = 4 + rng.index(6); i < n; ++i) doc.symbols.push_back(vocab[rng.index(symbols)]);
    corpus.push_back(doc);
  }
  EmbeddingConfig cfg;
  cfg.dim = 5;
  cfg.window = 2;
  cfg.negative = 3;
  cfg.epochs = 3;
  cfg.alpha_start = 0.5;
  cfg.alpha_end = 0.1;
  cfg.seed = 7;
  auto model = train_embeddings(corpus, cfg, vocab);

  const double h = 1e-5;
  double worst = 0;
  std::size_t partials = 0;
  auto rel = [](double a, double b) {
    double den = std::max(std::abs(a), std::abs(b));
    return den == 0 ? 0.0 : std::abs(a - b) / den;
  };
  Rng noise(5);
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const auto& syms = corpus[d].symbols;
    for (std::size_t i = 0; i < syms.size(); ++i) {
      PositionSample s;
      s.target = *model.symbol_index(syms[i]);
      for (std::size_t j = (i >= 2 ? i - 2 : 0); j <= std::min(syms.size() - 1, i + 2); ++j)
        if (j != i) s.context.push_back(*model.symbol_index(syms[j]));
      for (int k = 0; k < 3; ++k) {
        std::size_t n;
        do n = model.noise.sample(noise);
        while (n == s.target);
        s.negatives.push_back(n);
      }
      std::vector<double> doc(model.docs.row(d).begin(), model.docs.row(d).end());
      Matrix in = model.input, out = model.output;
      auto g = position_gradient(in, out, doc, s);
      auto fd = [&](double& p) {
        double keep = p;
        p = keep + h;
        double up = position_loss(in, out, doc, s);
        p = keep - h;
        double down = position_loss(in, out, doc, s);
        p = keep;
        return (up - down) / (2 * h);
      };
      for (std::size_t r = 0; r < symbols; ++r)
        for (std::size_t k = 0; k < cfg.dim; ++k) {
          worst = std::max(worst, rel(g.input(r, k), fd(in(r, k))));
          worst = std::max(worst, rel(g.output(r, k), fd(out(r, k))));
          partials += 2;
        }
      for (std::size_t k = 0; k < cfg.dim; ++k) {
        worst = std::max(worst, rel(g.doc[k], fd(doc[k])));
        ++partials;
      }
    }
  }
  return {worst < 1e-4, std::to_string(partials) + " partials, max relative error " + fmt("%.2e", worst)};
}

Outcome noise_fidelity() {
  SynthConfig sc;
  sc.count = 500;
  auto docs = transform_corpus(synth_corpus(sc), starter(), default_tagger(), CnfMode::PosPadded);
  auto table = symbol_table(starter(), TagSet::canonical());
  std::vector<std::uint64_t> counts(table.size(), 0);
  for (const auto& d : docs)
    for (const auto& s : d.symbols) ++counts[*table.index_of(s)];
  NoiseTable noise(counts, 0.75);
  std::vector<double> expected(counts.size());
  double z = 0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    z += expected[i] = counts[i] ? std::pow(static_cast<double>(counts[i]), 0.75) : 0.0;
  std::vector<double> hist(counts.size(), 0.0);
  Rng rng(1);
  const std::size_t draws = 1000000;
  for (std::size_t i = 0; i < draws; ++i) hist[noise.sample(rng)] += 1.0;
  double tv = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) tv += 0.5 * std::abs(hist[i] / draws - expected[i] / z);
  return {tv < 0.01, "TV distance " + fmt("%.5f", tv)};
}

Dataset synth(SynthDisease d, std::size_t n, double prevalence, std::uint64_t seed, const std::string& name) {
  SynthConfig c;
  c.disease = d;
  c.count = n;
  c.prevalence = prevalence;
  c.seed = seed;
  c.id_prefix = name;
  c.name = name;
  return synth_corpus(c);
}

double f1_on(const PipelineModel& model, const Dataset& ds, const PipelineResources& res) {
  auto s = pipeline_scores(model, ds, res);
  std::vector<int> pred;
  for (double x : s) pred.push_back(x > pipeline_threshold(model));
  return metrics(ds.labels(), pred).f1;
}

Outcome cross_lexicon() {
  auto train = synth(SynthDisease::A, 1000, 0.5, 1, "a-train");
  auto heldout = synth(SynthDisease::A, 500, 0.5, 2, "a-heldout");
  auto other = synth(SynthDisease::B, 500, 0.4, 3, "b");
  PipelineResources res{&starter(), &default_tagger(), nullptr, 1};
  PipelineConfig cnf;
  cnf.mode = InputMode::PosPadded;
  PipelineConfig raw = cnf;
  raw.mode = InputMode::Raw;
  auto cnf_model = train_pipeline(train, cnf, res);
  auto raw_model = train_pipeline(train, raw, res);
  double ca = f1_on(cnf_model, heldout, res), cb = f1_on(cnf_model, other, res);
  double ra = f1_on(raw_model, heldout, res), rb = f1_on(raw_model, other, res);
  bool ok = cb >= 0.9 && std::abs(ca - cb) < std::abs(ra - rb) && rb <= 0.6;
  return {ok, "cnf F1 A=" + fmt("%.4f", ca) + " B=" + fmt("%.4f", cb) + "; raw F1 A=" + fmt("%.4f", ra) +
                  " B=" + fmt("%.4f", rb)};
}

Outcome pr_oracle() {
  Rng rng(77);
  std::size_t exact = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s(30);
    std::vector<int> y(30);
    for (std::size_t i = 0; i < 30; ++i) {
      s[i] = static_cast<double>(rng.index(12)) / 12.0;
      y[i] = static_cast<int>(rng.index(2));
    }
    y[rng.index(30)] = 1;
    std::set<double, std::greater<>> thresholds(s.begin(), s.end());
    double pos = std::count(y.begin(), y.end(), 1), prev = 0, auc = 0;
    for (double t : thresholds) {
      double tp = 0, pp = 0;
      for (std::size_t i = 0; i < 30; ++i)
        if (s[i] >= t) {
          ++pp;
          tp += y[i];
        }
      auc += (tp / pos - prev) * (tp / pp);
      prev = tp / pos;
    }
    exact += pr_curve(s, y).auc == auc;
  }
  double perfect = pr_curve({0.9, 0.8, 0.7, 0.3, 0.2}, {1, 1, 1, 0, 0}).auc;
  double constant = pr_curve({0.4, 0.4, 0.4, 0.4, 0.4, 0.4, 0.4, 0.4}, {1, 0, 0, 1, 0, 1, 0, 0}).auc;
  bool ok = exact == 50 && perfect == 1.0 && constant == 3.0 / 8.0;
  return {ok, std::to_string(exact) + "/50 exact, perfect=" + fmt("%.6f", perfect) + " constant=" +
                  fmt("%.6f", constant) + " (prevalence 0.375)"};
}

Outcome determinism() {
  std::vector<std::string> failed;
  auto check = [&](const char* what, bool same) {
    if (!same) failed.push_back(what);
  };
  std::ifstream fixture(CNFEPI_DATA_DIR "/tagged_fixture.txt");
  auto tagged = read_tagged_corpus(fixture);
  check("tagger", serialize(train_tagger(tagged, 5, 3)) == serialize(train_tagger(tagged, 5, 3)));

  auto ds = synth(SynthDisease::A, 400, 0.5, 9, "det");
  auto docs = transform_corpus(ds, starter(), default_tagger(), CnfMode::PosPadded);
  EmbeddingConfig ec;
  ec.dim = 32;
  ec.epochs = 3;
  auto table = symbol_table(starter(), TagSet::canonical());
  check("embedding", serialize(train_embeddings(docs, ec, table)) == serialize(train_embeddings(docs, ec, table)));

  PipelineResources res{&starter(), &default_tagger(), nullptr, 1};
  PipelineConfig pc;
  pc.features = FeatureMode::UnigramBigram;
  check("classifier", serialize(train_pipeline(ds, pc, res)) == serialize(train_pipeline(ds, pc, res)));
  check("kfold", kfold_indices(ds.size(), 10, 4) == kfold_indices(ds.size(), 10, 4));
  auto [a1, b1] = split(ds, 0.8, 6, true);
  auto [a2, b2] = split(ds, 0.8, 6, true);
  check("corpus split", write_corpus(a1) == write_corpus(a2) && write_corpus(b1) == write_corpus(b2));
  std::string detail = failed.empty() ? "tagger, embedding, classifier, kfold, corpus split identical" : "differs:";
  for (const auto& f : failed) detail += " " + f;
  return {failed.empty(), detail};
}

Outcome metric_conventions() {
  auto m = metrics(ConfusionCounts{3, 1, 2, 0});
  bool ok = m.precision == 0.75 && m.recall == 0.6 && std::abs(m.f1 - 2.0 / 3.0) < 1e-15;
  ok = ok && metrics(ConfusionCounts{0, 0, 5, 5}) == Metrics{0, 0, 0};
  ok = ok && metrics(ConfusionCounts{0, 5, 0, 5}) == Metrics{0, 0, 0};
  ok = ok && metrics(ConfusionCounts{0, 0, 0, 5}) == Metrics{0, 0, 0};
  return {ok, "P=" + fmt("%.4f", m.precision) + " R=" + fmt("%.4f", m.recall) + " F1=" + fmt("%.4f", m.f1) +
                  "; zero denominators give 0"};
}

Outcome nn_neighbours() {
  auto a = synth(SynthDisease::A, 2500, 0.5, 11, "nn-a");
  auto b = synth(SynthDisease::B, 2500, 0.5, 12, "nn-b");
  std::vector<Record> all = a.records();
  all.insert(all.end(), b.records().begin(), b.records().end());
  auto docs = transform_corpus(Dataset("nn", all), starter(), default_tagger(), CnfMode::PosPadded);
  EmbeddingConfig ec;
  ec.dim = 100;
  ec.epochs = 10;
  auto model = train_embeddings(docs, ec, symbol_table(starter(), TagSet::canonical()));
  auto top = most_similar("NN", model, 10);
  bool nnp = false, nns = false;
  std::string list;
  for (const auto& [s, c] : top) {
    nnp |= s == "NNP";
    nns |= s == "NNS";
    list += (list.empty() ? "" : ",") + s;
  }
  return {nnp && nns, std::to_string(docs.size()) + " docs, top-10 of NN: " + list};
}

Outcome kfold_sizes() {
  auto folds = kfold_indices(13004, 10, 1);
  bool ok = folds.size() == 10;
  for (std::size_t f = 0; ok && f < 10; ++f) ok = folds[f].size() == (f < 4 ? 1301u : 1300u);
  std::size_t configs = 0;
  for (std::size_t n = 2; ok && n <= 200; ++n) {
    for (std::size_t k = 2; ok && k <= n; ++k) {
      auto fs = kfold_indices(n, k, n * 1000 + k);
      std::vector<int> seen(n, 0);
      for (const auto& f : fs)
        for (auto i : f) ok = ok && i < n && ++seen[i] == 1;
      ok = ok && fs.size() == k && std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
      ++configs;
    }
  }
  return {ok, "13004/10 sizes ok; " + std::to_string(configs) + " (n, k) pairs disjoint and exhaustive"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    bool soft;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "cnf-golden-transcript", 1, false, cnf_transcript},
      {2, "reference-table-arithmetic", 1, false, reference_arithmetic},
      {3, "embedding-gradient-check", 10, false, gradient_check},
      {4, "negative-sampling-fidelity", 5, false, noise_fidelity},
      {5, "synthetic-cross-lexicon", 60, false, cross_lexicon},
      {6, "pr-curve-oracle", 5, false, pr_oracle},
      {7, "determinism", 60, false, determinism},
      {8, "metric-conventions", 1, false, metric_conventions},
      {9, "nn-neighbours", 600, true, nn_neighbours},
      {10, "kfold", 60, false, kfold_sizes},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = secs <= c.budget_s;
    bool ok = o.ok && in_time;
    const char* verdict = ok ? "PASS" : (c.soft ? "WARN" : "FAIL");
    if (!ok && !c.soft) ++failures;
    std::printf("%s %2d %-28s %.2fs%s  %s\n", verdict, c.id, c.name, secs, in_time ? "" : " (over budget)",
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
