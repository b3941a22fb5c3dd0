#include "cnfepi/cnf.hpp"

#include <exception>
#include <istream>
#include <thread>

#include <json.hpp>

#include "cnfepi/error.hpp"
#include "cnfepi/io.hpp"

namespace cnfepi {

CnfMode parse_cnf_mode(std::string_view text) {
  if (text == "plain" || text == "plain-oov") return CnfMode::PlainOov;
  if (text == "pos-padded") return CnfMode::PosPadded;
  throw Error(ErrorCode::InvalidArgument, "unknown CNF mode '" + std::string(text) + "'");
}

std::string_view to_string(CnfMode mode) { return mode == CnfMode::PlainOov ? "plain-oov" : "pos-padded"; }

CnfDocument to_cnf(const std::vector<Token>& tokens, const Ontology& ontology) {
  CnfDocument doc;
  doc.symbols.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto id = ontology.lookup(t.surface);
    doc.symbols.push_back(id ? ontology.concept_at(*id).name : std::string(kOovSymbol));
  }
  return doc;
}

CnfDocument to_cnf_pos(const std::vector<Token>& tokens, const std::vector<std::string>& tags,
                       const Ontology& ontology) {
  if (tokens.size() != tags.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(tokens.size()) + " tokens but " + std::to_string(tags.size()) + " tags");
  }
  CnfDocument doc;
  doc.symbols.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (auto id = ontology.lookup(tokens[i].surface)) {
      doc.symbols.push_back(ontology.concept_at(*id).name);
      continue;
    }
    if (!TagSet::canonical().contains(tags[i])) {
      throw Error(ErrorCode::UnknownTag, "tag '" + tags[i] + "' is not in the tag set");
    }
    doc.symbols.push_back(tags[i]);
  }
  return doc;
}

namespace {

CnfDocument transform_record(const Record& r, const Ontology& ontology, const TaggerModel& tagger, CnfMode mode) {
  try {
    auto tokens = normalize_tokenize(r.text);
    CnfDocument doc;
    if (mode == CnfMode::PlainOov) {
      doc = to_cnf(tokens, ontology);
    } else {
      doc = to_cnf_pos(tokens, tag(tokens, tagger), ontology);
    }
    doc.source_id = r.id;
    doc.label = r.label;
    return doc;
  } catch (const Error& e) {
    throw Error(e.code(), "record '" + r.id + "': " + e.what());
  }
}

}  // namespace

std::vector<CnfDocument> transform_corpus(const Dataset& records, const Ontology& ontology, const TaggerModel& tagger,
                                          CnfMode mode, std::size_t workers) {
  std::vector<CnfDocument> out(records.size());
  const std::size_t n = records.size();
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = transform_record(records[i], ontology, tagger, mode);
    return out;
  }

  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::size_t> error_at(workers, n);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t i = w; i < n; i += workers) {
          try {
            out[i] = transform_record(records[i], ontology, tagger, mode);
          } catch (...) {
            errors[w] = std::current_exception();
            error_at[w] = i;
            return;
          }
        }
      });
    }
  }
  // Report the failure a sequential run would have hit first.
  std::size_t first = workers;
  for (std::size_t w = 0; w < workers; ++w) {
    if (errors[w] && (first == workers || error_at[w] < error_at[first])) first = w;
  }
  if (first != workers) std::rethrow_exception(errors[first]);
  return out;
}

std::string write_cnf_jsonl(const std::vector<CnfDocument>& docs) {
  std::string out;
  for (const auto& d : docs) {
    nlohmann::ordered_json obj;
    obj["id"] = d.source_id;
    obj["symbols"] = d.symbols;
    if (d.label) obj["label"] = *d.label;
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<CnfDocument> read_cnf_jsonl(std::istream& in) {
  std::vector<CnfDocument> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    auto where = "line " + std::to_string(line_no) + ": ";
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw Error(ErrorCode::ParseError, where + "invalid JSON");
    }
    if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string() || !obj.contains("symbols") ||
        !obj["symbols"].is_array()) {
      throw Error(ErrorCode::ParseError, where + "expected {\"id\": string, \"symbols\": [string]}");
    }
    CnfDocument d;
    d.source_id = obj["id"].get<std::string>();
    for (const auto& s : obj["symbols"]) {
      if (!s.is_string()) throw Error(ErrorCode::ParseError, where + "symbols must be strings");
      d.symbols.push_back(s.get<std::string>());
    }
    if (obj.contains("label") && !obj["label"].is_null()) {
      if (!obj["label"].is_number_integer()) throw Error(ErrorCode::BadLabel, where + "label must be 0 or 1");
      auto v = obj["label"].get<long long>();
      if (v != 0 && v != 1) throw Error(ErrorCode::BadLabel, where + "label must be 0 or 1");
      d.label = static_cast<int>(v);
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<CnfDocument> read_cnf_file(const std::string& path) {
  auto in = io::open_input(path);
  return read_cnf_jsonl(in);
}

}  // namespace cnfepi
