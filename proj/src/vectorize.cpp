#include "cnfepi/vectorize.hpp"

#include <map>

#include "cnfepi/error.hpp"

namespace cnfepi {

FeatureMode parse_feature_mode(std::string_view text) {
  if (text == "unigram") return FeatureMode::Unigram;
  if (text == "unibigram" || text == "unigram+bigram") return FeatureMode::UnigramBigram;
  throw Error(ErrorCode::InvalidArgument, "unknown feature mode '" + std::string(text) + "'");
}

std::string_view to_string(FeatureMode mode) { return mode == FeatureMode::Unigram ? "unigram" : "unibigram"; }

std::string bigram_name(std::string_view left, std::string_view right) {
  std::string out;
  out.reserve(left.size() + right.size() + 2);
  out.append(left).append("__").append(right);
  return out;
}

std::uint64_t SparseVector::total() const {
  std::uint64_t sum = 0;
  for (const auto& e : entries) sum += e.second;
  return sum;
}

FeatureSpace::FeatureSpace(FeatureMode mode, std::vector<std::string> names, std::size_t unigram_count, bool closed)
    : mode_(mode), names_(std::move(names)), unigram_count_(unigram_count), closed_(closed) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second) {
      throw Error(ErrorCode::InvalidArgument, "feature '" + names_[i] + "' listed twice");
    }
  }
}

std::optional<std::size_t> FeatureSpace::index_of(std::string_view feature) const {
  auto it = index_.find(std::string(feature));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t FeatureSpace::fingerprint() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  mix(to_string(mode_));
  mix(closed_ ? "closed" : "open");
  for (const auto& n : names_) mix(n);
  return h;
}

namespace {

void append_bigrams(std::span<const std::string> seq, std::vector<std::string>& names,
                    std::unordered_map<std::string, std::size_t>& seen) {
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    auto name = bigram_name(seq[i], seq[i + 1]);
    if (seen.emplace(name, names.size()).second) names.push_back(std::move(name));
  }
}

}  // namespace

FeatureSpace fit(FeatureMode mode, const std::vector<CnfDocument>& corpus, const SymbolTable& symbols) {
  std::vector<std::string> names = symbols.symbols();
  if (mode == FeatureMode::Unigram) return FeatureSpace(mode, std::move(names), symbols.size(), true);
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "bigram features need a non-empty corpus");

  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < names.size(); ++i) seen.emplace(names[i], i);
  for (const auto& doc : corpus) {
    for (const auto& s : doc.symbols) {
      if (!symbols.contains(s)) throw Error(ErrorCode::UnknownSymbol, "symbol '" + s + "' in " + doc.source_id);
    }
    append_bigrams(doc.symbols, names, seen);
  }
  return FeatureSpace(mode, std::move(names), symbols.size(), true);
}

FeatureSpace fit_raw(FeatureMode mode, const std::vector<std::vector<std::string>>& corpus) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "cannot fit a vocabulary on no documents");
  std::vector<std::string> names;
  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& doc : corpus) {
    for (const auto& t : doc) {
      if (seen.emplace(t, names.size()).second) names.push_back(t);
    }
  }
  std::size_t unigrams = names.size();
  if (mode == FeatureMode::UnigramBigram) {
    for (const auto& doc : corpus) append_bigrams(doc, names, seen);
  }
  return FeatureSpace(mode, std::move(names), unigrams, false);
}

SparseVector transform(std::span<const std::string> sequence, const FeatureSpace& space) {
  std::map<std::size_t, std::uint32_t> counts;
  for (const auto& s : sequence) {
    auto idx = space.index_of(s);
    if (!idx || *idx >= space.unigram_count()) {
      if (space.closed()) throw Error(ErrorCode::UnknownSymbol, "symbol '" + s + "' is not in the feature space");
      continue;
    }
    ++counts[*idx];
  }
  if (space.mode() == FeatureMode::UnigramBigram) {
    for (std::size_t i = 0; i + 1 < sequence.size(); ++i) {
      if (auto idx = space.index_of(bigram_name(sequence[i], sequence[i + 1]))) {
        if (*idx >= space.unigram_count()) ++counts[*idx];
      }
    }
  }
  SparseVector v;
  v.dimension = space.dimension();
  v.entries.assign(counts.begin(), counts.end());
  return v;
}

SparseVector transform(const CnfDocument& doc, const FeatureSpace& space) {
  return transform(std::span<const std::string>(doc.symbols), space);
}

}  // namespace cnfepi
