#include "cnfepi/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <istream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "cnfepi/error.hpp"
#include "cnfepi/io.hpp"
#include "cnfepi/random.hpp"
#include "cnfepi/textnorm.hpp"

namespace cnfepi {

Dataset::Dataset(std::string name, std::vector<Record> records) : name_(std::move(name)), records_(std::move(records)) {
  std::unordered_set<std::string> ids;
  for (const auto& r : records_) {
    if (r.text.empty()) throw Error(ErrorCode::MissingText, "record '" + r.id + "' has no text");
    if (!ids.insert(r.id).second) throw Error(ErrorCode::DuplicateId, "record id '" + r.id + "' repeated in " + name_);
  }
}

DatasetStats Dataset::stats() const {
  DatasetStats s;
  s.count = records_.size();
  for (const auto& r : records_) {
    if (!r.label) continue;
    ++s.labeled;
    if (*r.label == 1) ++s.positives;
  }
  s.positive_fraction = s.labeled ? static_cast<double>(s.positives) / static_cast<double>(s.labeled) : 0.0;
  return s;
}

bool Dataset::fully_labeled() const {
  return std::all_of(records_.begin(), records_.end(), [](const Record& r) { return r.label.has_value(); });
}

std::vector<int> Dataset::labels() const {
  std::vector<int> y;
  y.reserve(records_.size());
  for (const auto& r : records_) {
    if (!r.label) throw Error(ErrorCode::UnlabeledData, "record '" + r.id + "' in " + name_ + " has no label");
    y.push_back(*r.label);
  }
  return y;
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices, std::string name) const {
  std::vector<Record> recs;
  recs.reserve(indices.size());
  for (auto i : indices) recs.push_back(records_.at(i));
  return Dataset(std::move(name), std::move(recs));
}

Dataset read_corpus(std::istream& source, const std::string& name) {
  std::vector<Record> records;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  auto where = [&]() { return name + " line " + std::to_string(line_no) + ": "; };

  while (std::getline(source, line)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::ParseError, where() + "invalid JSON");
    }
    if (!obj.is_object()) throw Error(ErrorCode::ParseError, where() + "expected a JSON object");
    for (const auto& [key, value] : obj.items()) {
      if (key != "id" && key != "text" && key != "label" && key != "dataset") {
        throw Error(ErrorCode::ParseError, where() + "unexpected field '" + key + "'");
      }
    }
    Record r;
    if (!obj.contains("id") || !obj["id"].is_string()) throw Error(ErrorCode::ParseError, where() + "id must be a string");
    r.id = obj["id"].get<std::string>();
    if (!obj.contains("text") || obj["text"].is_null()) throw Error(ErrorCode::MissingText, where() + "record '" + r.id + "' has no text");
    if (!obj["text"].is_string()) throw Error(ErrorCode::ParseError, where() + "text must be a string");
    r.text = obj["text"].get<std::string>();
    if (r.text.empty()) throw Error(ErrorCode::MissingText, where() + "record '" + r.id + "' has empty text");
    if (obj.contains("label") && !obj["label"].is_null()) {
      const auto& l = obj["label"];
      if (!l.is_number_integer()) throw Error(ErrorCode::BadLabel, where() + "label must be the integer 0 or 1");
      auto v = l.get<long long>();
      if (v != 0 && v != 1) throw Error(ErrorCode::BadLabel, where() + "label " + std::to_string(v) + " is not 0 or 1");
      r.label = static_cast<int>(v);
    }
    if (obj.contains("dataset") && !obj["dataset"].is_null()) {
      if (!obj["dataset"].is_string()) throw Error(ErrorCode::ParseError, where() + "dataset must be a string");
      r.dataset = obj["dataset"].get<std::string>();
    }
    if (!ids.insert(r.id).second) throw Error(ErrorCode::DuplicateId, where() + "duplicate id '" + r.id + "'");
    records.push_back(std::move(r));
  }
  return Dataset(name, std::move(records));
}

Dataset read_corpus_file(const std::string& path) {
  auto in = io::open_input(path);
  return read_corpus(in, std::filesystem::path(path).stem().string());
}

std::string write_corpus(const Dataset& ds) {
  std::string out;
  for (const auto& r : ds.records()) {
    nlohmann::ordered_json obj;
    obj["id"] = r.id;
    obj["text"] = r.text;
    if (r.label) obj["label"] = *r.label;
    if (r.dataset) obj["dataset"] = *r.dataset;
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

DedupResult dedup(const Dataset& ds) {
  DedupResult result;
  std::vector<Record> kept;
  std::set<std::vector<std::string>> seen;
  for (const auto& r : ds.records()) {
    auto tokens = surfaces(normalize_tokenize(r.text));
    if (std::find(tokens.begin(), tokens.end(), "rt") != tokens.end()) {
      result.log.push_back({r.id, "retweet"});
      continue;
    }
    if (!seen.insert(tokens).second) {
      result.log.push_back({r.id, "duplicate"});
      continue;
    }
    kept.push_back(r);
  }
  result.dataset = Dataset(ds.name(), std::move(kept));
  return result;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction, std::uint64_t seed, bool stratified) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "train fraction must lie strictly between 0 and 1");
  }
  Rng rng(seed);
  std::vector<std::size_t> train_idx, test_idx;
  auto take = [&](std::vector<std::size_t> pool) {
    rng.shuffle(pool);
    auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(pool.size())));
    train_idx.insert(train_idx.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_train));
    test_idx.insert(test_idx.end(), pool.begin() + static_cast<std::ptrdiff_t>(n_train), pool.end());
  };

  if (stratified) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const auto& r = ds[i];
      if (!r.label) throw Error(ErrorCode::UnlabeledData, "stratified split needs labels; '" + r.id + "' has none");
      (*r.label == 1 ? pos : neg).push_back(i);
    }
    take(std::move(pos));
    take(std::move(neg));
  } else {
    std::vector<std::size_t> all(ds.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    take(std::move(all));
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {ds.subset(train_idx, ds.name() + "-train"), ds.subset(test_idx, ds.name() + "-test")};
}

}  // namespace cnfepi
