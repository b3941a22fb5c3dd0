#include "cnfepi/ontology.hpp"

#include <istream>
#include <sstream>
#include <unordered_set>

#include "cnfepi/error.hpp"
#include "cnfepi/io.hpp"
#include "cnfepi/textnorm.hpp"

namespace cnfepi {
namespace {

bool valid_concept_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

bool has_whitespace(std::string_view s) {
  for (unsigned char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') return true;
  }
  return false;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

struct PendingConcept {
  Concept concept_;
  std::string parent_name;
  std::size_t line = 0;
};

}  // namespace

Ontology Ontology::build(std::vector<Concept> concepts) {
  if (concepts.empty()) throw Error(ErrorCode::EmptyOntology, "ontology defines no concepts");

  Ontology out;
  out.concepts_ = std::move(concepts);
  for (std::size_t i = 0; i < out.concepts_.size(); ++i) {
    const auto& c = out.concepts_[i];
    if (!valid_concept_name(c.name)) {
      throw Error(ErrorCode::SyntaxError, "invalid concept name '" + c.name + "'");
    }
    if (!out.name_index_.emplace(c.name, ConceptId{i}).second) {
      throw Error(ErrorCode::DuplicateConcept, "concept '" + c.name + "' defined twice");
    }
  }
  for (std::size_t i = 0; i < out.concepts_.size(); ++i) {
    const auto& c = out.concepts_[i];
    if (c.parent && c.parent->index >= out.concepts_.size()) {
      throw Error(ErrorCode::SyntaxError, "concept '" + c.name + "' has an out-of-range parent");
    }
    for (const auto& w : c.words) {
      if (w.empty() || has_whitespace(w) || to_lower(w) != w) {
        throw Error(ErrorCode::SyntaxError,
                    "concept '" + c.name + "': word '" + w + "' must be non-empty lowercase without whitespace");
      }
      auto [it, inserted] = out.word_index_.emplace(w, ConceptId{i});
      if (!inserted) {
        const auto& other = out.concepts_[it->second.index].name;
        throw Error(ErrorCode::DuplicateWord,
                    "word '" + w + "' appears in both " + other + " and " + c.name);
      }
    }
  }
  // Parent links must not form a cycle.
  for (std::size_t i = 0; i < out.concepts_.size(); ++i) {
    std::size_t steps = 0;
    auto cur = out.concepts_[i].parent;
    while (cur) {
      if (++steps > out.concepts_.size()) {
        throw Error(ErrorCode::SyntaxError, "parent cycle through '" + out.concepts_[i].name + "'");
      }
      cur = out.concepts_[cur->index].parent;
    }
  }
  return out;
}

std::optional<ConceptId> Ontology::find_concept(std::string_view name) const {
  auto it = name_index_.find(std::string(name));
  if (it == name_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ConceptId> Ontology::lookup(std::string_view token) const {
  auto it = word_index_.find(std::string(token));
  if (it == word_index_.end()) return std::nullopt;
  return it->second;
}

Ontology load_ontology(std::istream& source) {
  std::vector<PendingConcept> pending;
  std::unordered_map<std::string, std::size_t> seen;
  std::unordered_map<std::string, std::string> word_owner;
  std::string raw;
  std::size_t line_no = 0;

  while (std::getline(source, raw)) {
    ++line_no;
    std::string_view line = raw;
    auto end = line.find_last_not_of(" \t\r\f\v");
    line = (end == std::string_view::npos) ? std::string_view{} : line.substr(0, end + 1);
    auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    if (first != 0) throw Error(ErrorCode::SyntaxError, at_line(line_no) + "leading whitespace before concept name");

    auto tab = line.find('\t');
    std::string_view header = line.substr(0, tab);
    std::string_view body = tab == std::string_view::npos ? std::string_view{} : line.substr(tab + 1);

    PendingConcept pc;
    pc.line = line_no;
    auto colon = header.find(':');
    std::string_view name = header.substr(0, colon);
    if (colon != std::string_view::npos) {
      std::string_view parent = header.substr(colon + 1);
      if (!valid_concept_name(parent)) {
        throw Error(ErrorCode::SyntaxError, at_line(line_no) + "invalid parent name '" + std::string(parent) + "'");
      }
      pc.parent_name = std::string(parent);
    }
    if (!valid_concept_name(name)) {
      throw Error(ErrorCode::SyntaxError, at_line(line_no) + "invalid concept name '" + std::string(name) + "'");
    }
    pc.concept_.name = std::string(name);
    if (seen.count(pc.concept_.name)) {
      throw Error(ErrorCode::DuplicateConcept,
                  at_line(line_no) + "concept '" + pc.concept_.name + "' already defined on line " +
                      std::to_string(pending[seen[pc.concept_.name]].line));
    }

    if (!io::trim(body).empty()) {
      std::unordered_set<std::string> local;
      for (auto part : io::split(body, ',')) {
        auto word = io::trim(part);
        if (word.empty()) throw Error(ErrorCode::SyntaxError, at_line(line_no) + "empty dictionary entry");
        std::string w(word);
        if (has_whitespace(w)) {
          throw Error(ErrorCode::SyntaxError, at_line(line_no) + "entry '" + w + "' contains whitespace");
        }
        if (to_lower(w) != w) {
          throw Error(ErrorCode::SyntaxError, at_line(line_no) + "entry '" + w + "' is not lowercase");
        }
        if (!local.insert(w).second) {
          throw Error(ErrorCode::DuplicateWord,
                      at_line(line_no) + "word '" + w + "' listed twice in " + pc.concept_.name);
        }
        auto [it, inserted] = word_owner.emplace(w, pc.concept_.name);
        if (!inserted) {
          throw Error(ErrorCode::DuplicateWord,
                      at_line(line_no) + "word '" + w + "' appears in both " + it->second + " and " + pc.concept_.name);
        }
        pc.concept_.words.push_back(std::move(w));
      }
    }
    seen.emplace(pc.concept_.name, pending.size());
    pending.push_back(std::move(pc));
  }
  if (source.bad()) throw Error(ErrorCode::Io, "read failure while loading ontology");

  std::vector<Concept> concepts;
  concepts.reserve(pending.size());
  for (auto& pc : pending) {
    if (!pc.parent_name.empty()) {
      auto it = seen.find(pc.parent_name);
      if (it == seen.end()) {
        throw Error(ErrorCode::SyntaxError, at_line(pc.line) + "unknown parent '" + pc.parent_name + "'");
      }
      if (pc.parent_name == pc.concept_.name) {
        throw Error(ErrorCode::SyntaxError, at_line(pc.line) + "concept is its own parent");
      }
      pc.concept_.parent = ConceptId{it->second};
    }
    concepts.push_back(std::move(pc.concept_));
  }
  return Ontology::build(std::move(concepts));
}

Ontology load_ontology_file(const std::string& path) {
  auto in = io::open_input(path);
  return load_ontology(in);
}

std::string serialize(const Ontology& ontology) {
  std::ostringstream out;
  for (const auto& c : ontology.concepts()) {
    out << c.name;
    if (c.parent) out << ':' << ontology.concept_at(*c.parent).name;
    if (!c.words.empty()) {
      out << '\t';
      for (std::size_t i = 0; i < c.words.size(); ++i) {
        if (i) out << ',';
        out << c.words[i];
      }
    }
    out << '\n';
  }
  return out.str();
}

SymbolTable::SymbolTable(const Ontology& ontology, const TagSet& tags) {
  auto add = [this](const std::string& symbol) {
    if (!lookup_.emplace(symbol, symbols_.size()).second) {
      throw Error(ErrorCode::NameCollision, "symbol '" + symbol + "' is both a concept and a tag");
    }
    symbols_.push_back(symbol);
  };
  for (const auto& c : ontology.concepts()) add(c.name);
  for (const auto& t : tags.all()) add(t);
  add(std::string(kOovSymbol));
  concept_count_ = ontology.size();
  tag_count_ = tags.size();
}

std::optional<std::size_t> SymbolTable::index_of(std::string_view symbol) const {
  auto it = lookup_.find(std::string(symbol));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

SymbolKind SymbolTable::kind(std::size_t index) const {
  if (index < concept_count_) return SymbolKind::Concept;
  if (index < concept_count_ + tag_count_) return SymbolKind::Tag;
  return SymbolKind::Oov;
}

SymbolTable symbol_table(const Ontology& ontology, const TagSet& tags) { return SymbolTable(ontology, tags); }

}  // namespace cnfepi
