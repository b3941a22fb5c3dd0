#include "cnfepi/postag.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

#include "cnfepi/error.hpp"
#include "cnfepi/io.hpp"
#include "cnfepi/random.hpp"

namespace cnfepi {

TagSet::TagSet(std::vector<std::string> ptb_tags, std::vector<std::string> special_tags)
    : ptb_(std::move(ptb_tags)), special_(std::move(special_tags)) {
  all_ = ptb_;
  all_.insert(all_.end(), special_.begin(), special_.end());
  for (std::size_t i = 0; i < all_.size(); ++i) {
    for (std::size_t j = i + 1; j < all_.size(); ++j) {
      if (all_[i] == all_[j]) throw Error(ErrorCode::InvalidArgument, "duplicate tag '" + all_[i] + "'");
    }
  }
}

const TagSet& TagSet::canonical() {
  static const TagSet kCanonical(
      {"CC",  "CD",  "DT",   "EX",  "FW",  "IN",  "JJ",  "JJR", "JJS", "LS",  "MD", "NN",
       "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM",
       "TO",  "UH",  "VB",   "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP",  "WP$", "WRB",
       "#",   "$",   ".",    ",",   ":",   "(",   ")",   "``",  "''"},
      {std::string(tags::kRetweet), std::string(tags::kUser), std::string(tags::kHashtag),
       std::string(tags::kUrl)});
  return kCanonical;
}

std::optional<std::size_t> TagSet::index_of(std::string_view tag) const {
  for (std::size_t i = 0; i < all_.size(); ++i) {
    if (all_[i] == tag) return i;
  }
  return std::nullopt;
}

std::optional<std::string> special_tag(std::string_view token) {
  if (token == "rt") return std::string(tags::kRetweet);
  if (token.starts_with('@')) return std::string(tags::kUser);
  if (token.starts_with('#')) return std::string(tags::kHashtag);
  if (token.starts_with("http")) return std::string(tags::kUrl);
  return std::nullopt;
}

TaggerModel::TaggerModel() : tags_(TagSet::canonical().all()), priors_(tags_.size(), 0) {}

std::size_t TaggerModel::tag_index(std::string_view tag) const {
  for (std::size_t i = 0; i < tags_.size(); ++i) {
    if (tags_[i] == tag) return i;
  }
  throw Error(ErrorCode::UnknownTag, "tag '" + std::string(tag) + "' is not in the tag set");
}

void TaggerModel::set_weight(const std::string& feature, std::string_view tag, double value) {
  auto& row = weights_[feature];
  row.resize(tags_.size(), 0.0);
  row[tag_index(tag)] = value;
}

void TaggerModel::set_prior(std::string_view tag, std::uint64_t count) { priors_[tag_index(tag)] = count; }

std::size_t TaggerModel::predict(const std::vector<std::string>& features) const {
  std::vector<double> scores(tags_.size(), 0.0);
  for (const auto& f : features) {
    auto it = weights_.find(f);
    if (it == weights_.end()) continue;
    for (std::size_t t = 0; t < scores.size(); ++t) scores[t] += it->second[t];
  }
  std::size_t best = 0;
  for (std::size_t t = 1; t < scores.size(); ++t) {
    if (scores[t] > scores[best] || (scores[t] == scores[best] && priors_[t] > priors_[best])) best = t;
  }
  return best;
}

namespace {

constexpr std::string_view kStart1 = "-START-";
constexpr std::string_view kStart2 = "-START2-";

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// Perceptron state with lazily accumulated totals for averaging.
struct Trainer {
  struct Cell {
    double weight = 0.0;
    double total = 0.0;
    std::uint64_t stamp = 0;
  };

  std::size_t n_tags;
  std::unordered_map<std::string, std::vector<Cell>> cells;
  std::uint64_t instances = 0;

  explicit Trainer(std::size_t n) : n_tags(n) {}

  std::size_t predict(const std::vector<std::string>& features, const std::vector<std::uint64_t>& priors) const {
    std::vector<double> scores(n_tags, 0.0);
    for (const auto& f : features) {
      auto it = cells.find(f);
      if (it == cells.end()) continue;
      for (std::size_t t = 0; t < n_tags; ++t) scores[t] += it->second[t].weight;
    }
    std::size_t best = 0;
    for (std::size_t t = 1; t < n_tags; ++t) {
      if (scores[t] > scores[best] || (scores[t] == scores[best] && priors[t] > priors[best])) best = t;
    }
    return best;
  }

  void bump(Cell& c, double delta) {
    c.total += static_cast<double>(instances - c.stamp) * c.weight;
    c.stamp = instances;
    c.weight += delta;
  }

  void update(std::size_t truth, std::size_t guess, const std::vector<std::string>& features) {
    ++instances;
    if (truth == guess) return;
    for (const auto& f : features) {
      auto& row = cells[f];
      if (row.empty()) row.resize(n_tags);
      bump(row[truth], 1.0);
      bump(row[guess], -1.0);
    }
  }
};

}  // namespace

std::vector<std::string> tagger_features(const std::vector<std::string>& tokens, std::size_t i,
                                         std::string_view prev_tag, std::string_view prev2_tag) {
  const std::string& w = tokens[i];
  std::string lw = lower_ascii(w);
  std::vector<std::string> f;
  f.reserve(12);
  f.emplace_back("bias");
  f.push_back("w=" + w);
  for (std::size_t k = 1; k <= 3 && k <= lw.size(); ++k) {
    f.push_back("s" + std::to_string(k) + "=" + lw.substr(lw.size() - k));
  }
  if (!w.empty()) f.push_back("p1=" + w.substr(0, 1));
  if (std::any_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; })) f.emplace_back("has-digit");
  if (w.find('-') != std::string::npos) f.emplace_back("has-hyphen");
  f.push_back("t-1=" + std::string(prev_tag));
  f.push_back("t-2=" + std::string(prev2_tag));
  f.push_back("w-1=" + (i > 0 ? tokens[i - 1] : std::string("<s>")));
  f.push_back("w+1=" + (i + 1 < tokens.size() ? tokens[i + 1] : std::string("</s>")));
  return f;
}

TaggerModel train_tagger(const std::vector<TaggedSentence>& corpus, int epochs, std::uint64_t seed) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "tagged corpus is empty");
  if (epochs < 1) throw Error(ErrorCode::InvalidArgument, "epochs must be positive");

  TaggerModel model;
  const TagSet& tagset = TagSet::canonical();
  std::vector<std::vector<std::size_t>> gold(corpus.size());
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const auto& sent = corpus[s];
    if (sent.tokens.size() != sent.tags.size()) {
      throw Error(ErrorCode::LengthMismatch, "sentence " + std::to_string(s + 1) + " has " +
                                                 std::to_string(sent.tokens.size()) + " tokens but " +
                                                 std::to_string(sent.tags.size()) + " tags");
    }
    for (const auto& t : sent.tags) {
      auto idx = tagset.index_of(t);
      if (!idx) throw Error(ErrorCode::UnknownTag, "sentence " + std::to_string(s + 1) + ": unknown tag '" + t + "'");
      gold[s].push_back(*idx);
      ++model.priors_[*idx];
    }
  }

  Trainer trainer(model.tags_.size());
  Rng rng(seed);
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t s : order) {
      const auto& tokens = corpus[s].tokens;
      std::string prev(kStart1), prev2(kStart2);
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string assigned;
        if (auto special = special_tag(tokens[i])) {
          assigned = *special;
        } else {
          auto feats = tagger_features(tokens, i, prev, prev2);
          std::size_t guess = trainer.predict(feats, model.priors_);
          trainer.update(gold[s][i], guess, feats);
          assigned = model.tags_[guess];
        }
        prev2 = std::move(prev);
        prev = std::move(assigned);
      }
    }
  }

  for (auto& [feature, row] : trainer.cells) {
    std::vector<double> averaged(row.size(), 0.0);
    bool any = false;
    for (std::size_t t = 0; t < row.size(); ++t) {
      auto& c = row[t];
      double total = c.total + static_cast<double>(trainer.instances - c.stamp) * c.weight;
      averaged[t] = trainer.instances ? total / static_cast<double>(trainer.instances) : 0.0;
      any = any || averaged[t] != 0.0;
    }
    if (any) model.weights_.emplace(feature, std::move(averaged));
  }
  return model;
}

std::vector<std::string> tag(const std::vector<std::string>& tokens, const TaggerModel& model) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  std::string prev(kStart1), prev2(kStart2);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string assigned;
    if (auto special = special_tag(tokens[i])) {
      assigned = *special;
    } else {
      assigned = model.tags()[model.predict(tagger_features(tokens, i, prev, prev2))];
    }
    out.push_back(assigned);
    prev2 = std::move(prev);
    prev = std::move(assigned);
  }
  return out;
}

std::vector<std::string> tag(const std::vector<Token>& tokens, const TaggerModel& model) {
  return tag(surfaces(tokens), model);
}

std::vector<TaggedSentence> read_tagged_corpus(std::istream& in) {
  std::vector<TaggedSentence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    TaggedSentence sent;
    std::istringstream words(line);
    std::string item;
    while (words >> item) {
      auto us = item.rfind('_');
      if (us == std::string::npos || us == 0 || us + 1 == item.size()) {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line_no) + ": expected surface_TAG, got '" + item + "'");
      }
      sent.tokens.push_back(item.substr(0, us));
      sent.tags.push_back(item.substr(us + 1));
    }
    if (!sent.tokens.empty()) out.push_back(std::move(sent));
  }
  return out;
}

std::string format_tagged(const TaggedSentence& sentence) {
  std::string out;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += sentence.tokens[i];
    out.push_back('_');
    out += i < sentence.tags.size() ? sentence.tags[i] : std::string("?");
  }
  return out;
}

std::string serialize(const TaggerModel& model) {
  std::ostringstream out;
  out << "cnfepi-tagger " << model.version() << '\n';
  out << "tags";
  for (const auto& t : model.tags()) out << '\t' << t;
  out << "\npriors";
  for (auto p : model.tag_priors()) out << '\t' << p;
  out << '\n';

  std::vector<const std::string*> names;
  names.reserve(model.weights().size());
  for (const auto& kv : model.weights()) names.push_back(&kv.first);
  std::sort(names.begin(), names.end(), [](auto* a, auto* b) { return *a < *b; });
  out << "features\t" << names.size() << '\n';
  for (const auto* name : names) {
    const auto& row = model.weights().at(*name);
    out << *name;
    for (std::size_t t = 0; t < row.size(); ++t) {
      if (row[t] != 0.0) out << '\t' << t << '=' << io::format_double(row[t]);
    }
    out << '\n';
  }
  return out.str();
}

TaggerModel parse_tagger_model(std::string_view text) {
  auto fail = [](const std::string& msg) { return Error(ErrorCode::ModelFormat, "tagger model: " + msg); };
  auto lines = io::split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.size() < 4) throw fail("truncated header");

  TaggerModel model;
  auto header = io::split(lines[0], ' ');
  if (header.size() != 2 || header[0] != "cnfepi-tagger") throw fail("bad magic line");
  model.version_ = static_cast<int>(io::parse_double(header[1]));
  if (model.version_ != TaggerModel::kFormatVersion) throw fail("unsupported version");

  auto tag_fields = io::split(lines[1], '\t');
  if (tag_fields.empty() || tag_fields[0] != "tags") throw fail("missing tags line");
  model.tags_.clear();
  for (std::size_t i = 1; i < tag_fields.size(); ++i) {
    if (!TagSet::canonical().contains(tag_fields[i])) throw fail("tag outside the tag set: " + std::string(tag_fields[i]));
    model.tags_.emplace_back(tag_fields[i]);
  }
  auto prior_fields = io::split(lines[2], '\t');
  if (prior_fields.empty() || prior_fields[0] != "priors" || prior_fields.size() != model.tags_.size() + 1) {
    throw fail("bad priors line");
  }
  model.priors_.assign(model.tags_.size(), 0);
  for (std::size_t i = 1; i < prior_fields.size(); ++i) {
    model.priors_[i - 1] = std::stoull(std::string(prior_fields[i]));
  }
  auto count_fields = io::split(lines[3], '\t');
  if (count_fields.size() != 2 || count_fields[0] != "features") throw fail("bad features line");
  std::size_t n = std::stoull(std::string(count_fields[1]));
  if (lines.size() != 4 + n) throw fail("feature count does not match body");

  for (std::size_t l = 4; l < lines.size(); ++l) {
    auto fields = io::split(lines[l], '\t');
    std::vector<double> row(model.tags_.size(), 0.0);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto eq = fields[i].find('=');
      if (eq == std::string_view::npos) throw fail("bad weight entry on line " + std::to_string(l + 1));
      std::size_t t = std::stoull(std::string(fields[i].substr(0, eq)));
      if (t >= row.size()) throw fail("tag index out of range on line " + std::to_string(l + 1));
      row[t] = io::parse_double(fields[i].substr(eq + 1));
    }
    model.weights_.emplace(std::string(fields[0]), std::move(row));
  }
  return model;
}

TaggerModel load_tagger_file(const std::string& path) { return parse_tagger_model(io::read_file(path)); }

}  // namespace cnfepi
