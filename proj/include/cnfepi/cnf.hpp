#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cnfepi/corpus.hpp"
#include "cnfepi/ontology.hpp"
#include "cnfepi/postag.hpp"
#include "cnfepi/textnorm.hpp"

namespace cnfepi {

// Concept Normal Form: one symbol per source token.
struct CnfDocument {
  std::vector<std::string> symbols;
  std::string source_id;
  std::optional<int> label;  // carried through from the source record

  bool operator==(const CnfDocument&) const = default;
};

enum class CnfMode {
  PlainOov,   // misses become the OOV sentinel
  PosPadded,  // misses become their POS / Twitter tag
};

CnfMode parse_cnf_mode(std::string_view text);  // "plain", "plain-oov", "pos-padded"
std::string_view to_string(CnfMode mode);

CnfDocument to_cnf(const std::vector<Token>& tokens, const Ontology& ontology);

// Throws LengthMismatch if tags are not aligned with tokens, UnknownTag if a
// tag is outside the canonical tag set.
CnfDocument to_cnf_pos(const std::vector<Token>& tokens, const std::vector<std::string>& tags,
                       const Ontology& ontology);

// Normalizes, tags (pos-padded only) and transforms every record, keeping
// record order. Errors are rethrown with the record id attached. With
// workers > 1 records are processed in parallel; output is unchanged.
std::vector<CnfDocument> transform_corpus(const Dataset& records, const Ontology& ontology, const TaggerModel& tagger,
                                          CnfMode mode, std::size_t workers = 1);

// JSONL with `id`, `symbols` and, when known, `label`.
std::string write_cnf_jsonl(const std::vector<CnfDocument>& docs);
std::vector<CnfDocument> read_cnf_jsonl(std::istream& in);
std::vector<CnfDocument> read_cnf_file(const std::string& path);

}  // namespace cnfepi
