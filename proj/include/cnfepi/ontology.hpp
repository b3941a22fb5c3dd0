#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cnfepi/tagset.hpp"

namespace cnfepi {

// Dense position of a concept in file order.
struct ConceptId {
  std::size_t index = 0;
  auto operator<=>(const ConceptId&) const = default;
};

struct Concept {
  std::string name;
  std::vector<std::string> words;
  std::optional<ConceptId> parent;  // hierarchy metadata only
};

// Ordered concept dictionaries flattened into a word -> concept index.
// Immutable once built; every word belongs to exactly one concept.
class Ontology {
 public:
  // Validates the invariants and builds the word index. Throws
  // DuplicateConcept, DuplicateWord, EmptyOntology or SyntaxError.
  static Ontology build(std::vector<Concept> concepts);

  const std::vector<Concept>& concepts() const { return concepts_; }
  std::size_t size() const { return concepts_.size(); }
  std::size_t word_count() const { return word_index_.size(); }

  const Concept& concept_at(ConceptId id) const { return concepts_.at(id.index); }
  std::optional<ConceptId> find_concept(std::string_view name) const;

  // Token must already be normalized. Absent means out of vocabulary.
  std::optional<ConceptId> lookup(std::string_view token) const;

 private:
  std::vector<Concept> concepts_;
  std::unordered_map<std::string, ConceptId> word_index_;
  std::unordered_map<std::string, ConceptId> name_index_;
};

// Native format: one concept per line, `NAME[:PARENT]<TAB>word1,word2,...`.
// Lines whose first non-blank character is `#` are comments; trailing
// whitespace is ignored. A concept without a tab has an empty dictionary.
Ontology load_ontology(std::istream& source);
Ontology load_ontology_file(const std::string& path);

std::string serialize(const Ontology& ontology);

inline constexpr std::string_view kOovSymbol = "OOV";

enum class SymbolKind { Concept, Tag, Oov };

// Closed CNF lexicon: concept names, then tags, then the OOV sentinel.
class SymbolTable {
 public:
  // Throws NameCollision if a concept name equals a tag name (or the sentinel).
  SymbolTable(const Ontology& ontology, const TagSet& tags);

  const std::vector<std::string>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  const std::string& at(std::size_t index) const { return symbols_.at(index); }

  std::optional<std::size_t> index_of(std::string_view symbol) const;
  bool contains(std::string_view symbol) const { return index_of(symbol).has_value(); }

  std::size_t oov_index() const { return symbols_.size() - 1; }
  SymbolKind kind(std::size_t index) const;

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::size_t> lookup_;
  std::size_t concept_count_ = 0;
  std::size_t tag_count_ = 0;
};

SymbolTable symbol_table(const Ontology& ontology, const TagSet& tags);

}  // namespace cnfepi
