#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cnfepi/cnf.hpp"
#include "cnfepi/ontology.hpp"

namespace cnfepi {

enum class FeatureMode { Unigram, UnigramBigram };

FeatureMode parse_feature_mode(std::string_view text);  // "unigram" | "unibigram"
std::string_view to_string(FeatureMode mode);

std::string bigram_name(std::string_view left, std::string_view right);

// Count vector with strictly increasing indices and positive counts.
struct SparseVector {
  std::vector<std::pair<std::size_t, std::uint32_t>> entries;
  std::size_t dimension = 0;

  std::uint64_t total() const;
  bool operator==(const SparseVector&) const = default;
};

// Dense feature indices. Closed spaces are built on a SymbolTable, so an
// unknown unigram is a pipeline bug; open spaces are fitted on raw tokens
// and silently drop anything unseen.
class FeatureSpace {
 public:
  FeatureSpace() = default;
  FeatureSpace(FeatureMode mode, std::vector<std::string> names, std::size_t unigram_count, bool closed);

  FeatureMode mode() const { return mode_; }
  bool closed() const { return closed_; }
  std::size_t dimension() const { return names_.size(); }
  std::size_t unigram_count() const { return unigram_count_; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index_of(std::string_view feature) const;

  // FNV-1a over mode, closedness and feature names.
  std::uint64_t fingerprint() const;

 private:
  FeatureMode mode_ = FeatureMode::Unigram;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t unigram_count_ = 0;
  bool closed_ = true;
};

// Unigrams are exactly the symbol table; bigrams are appended in first-seen
// order over the corpus. Throws EmptyCorpus for bigram mode on no documents.
FeatureSpace fit(FeatureMode mode, const std::vector<CnfDocument>& corpus, const SymbolTable& symbols);

// Open-vocabulary space over untransformed tokens (the word-level baseline).
FeatureSpace fit_raw(FeatureMode mode, const std::vector<std::vector<std::string>>& corpus);

// Raw unigram (and adjacent-pair) counts. Throws UnknownSymbol for a symbol
// outside a closed space.
SparseVector transform(const CnfDocument& doc, const FeatureSpace& space);
SparseVector transform(std::span<const std::string> sequence, const FeatureSpace& space);

}  // namespace cnfepi
