#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cnfepi {

struct Record {
  std::string id;
  std::string text;
  std::optional<int> label;  // 1 = relevant incidence reference
  std::optional<std::string> dataset;

  bool operator==(const Record&) const = default;
};

struct DatasetStats {
  std::size_t count = 0;
  std::size_t labeled = 0;
  std::size_t positives = 0;
  double positive_fraction = 0.0;  // over labeled records
};

class Dataset {
 public:
  Dataset() = default;
  // Throws DuplicateId or MissingText.
  Dataset(std::string name, std::vector<Record> records);

  const std::string& name() const { return name_; }
  const std::vector<Record>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const Record& operator[](std::size_t i) const { return records_[i]; }

  DatasetStats stats() const;
  bool fully_labeled() const;
  // Throws UnlabeledData naming the first unlabeled record.
  std::vector<int> labels() const;

  Dataset subset(const std::vector<std::size_t>& indices, std::string name) const;

  bool operator==(const Dataset&) const = default;

 private:
  std::string name_;
  std::vector<Record> records_;
};

// One JSON object per line with fields id, text, optional label (0/1) and
// optional dataset. Blank lines are skipped.
Dataset read_corpus(std::istream& source, const std::string& name);
Dataset read_corpus_file(const std::string& path);
std::string write_corpus(const Dataset& ds);

struct RemovalEntry {
  std::string id;
  std::string reason;  // "retweet" or "duplicate"

  bool operator==(const RemovalEntry&) const = default;
};

struct DedupResult {
  Dataset dataset;
  std::vector<RemovalEntry> log;
};

// Drops retweets (normalized tokens contain `rt`), then exact duplicates of
// the normalized token sequence, keeping the first occurrence.
DedupResult dedup(const Dataset& ds);

// Seeded shuffle split; both parts keep the input order. Stratified mode
// rounds each class separately. Throws InvalidArgument for a fraction
// outside (0, 1) and UnlabeledData when stratifying unlabeled data.
std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction, std::uint64_t seed, bool stratified);

}  // namespace cnfepi
