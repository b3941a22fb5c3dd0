#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cnfepi/tagset.hpp"
#include "cnfepi/textnorm.hpp"

namespace cnfepi {

// Rule tags for Twitter phenomena. Exact `rt` wins, then the prefixes
// `@`, `#` and `http` in that order.
std::optional<std::string> special_tag(std::string_view token);

struct TaggedSentence {
  std::vector<std::string> tokens;
  std::vector<std::string> tags;
};

// Averaged-perceptron weights over the canonical tag set.
class TaggerModel {
 public:
  static constexpr int kFormatVersion = 1;

  TaggerModel();

  const std::vector<std::string>& tags() const { return tags_; }
  const std::vector<std::uint64_t>& tag_priors() const { return priors_; }
  int version() const { return version_; }

  // Feature weights indexed by tag position.
  const std::unordered_map<std::string, std::vector<double>>& weights() const { return weights_; }

  void set_weight(const std::string& feature, std::string_view tag, double value);
  void set_prior(std::string_view tag, std::uint64_t count);

  // Highest-scoring tag; ties go to the larger prior, then the earlier tag.
  std::size_t predict(const std::vector<std::string>& features) const;

  bool operator==(const TaggerModel&) const = default;

 private:
  friend TaggerModel train_tagger(const std::vector<TaggedSentence>&, int, std::uint64_t);
  friend TaggerModel parse_tagger_model(std::string_view);

  std::size_t tag_index(std::string_view tag) const;

  std::vector<std::string> tags_;
  std::vector<std::uint64_t> priors_;
  std::unordered_map<std::string, std::vector<double>> weights_;
  int version_ = kFormatVersion;
};

// Features for position i given the two previously assigned tags:
// bias, surface, lowercased 1-3 char suffixes, first char, digit and hyphen
// flags, previous and previous-previous tag, neighbouring surfaces.
std::vector<std::string> tagger_features(const std::vector<std::string>& tokens, std::size_t i,
                                         std::string_view prev_tag, std::string_view prev2_tag);

// Greedy left-to-right averaged perceptron. Sentence order is reshuffled
// every epoch from `seed`. Throws EmptyCorpus, UnknownTag, LengthMismatch.
TaggerModel train_tagger(const std::vector<TaggedSentence>& corpus, int epochs, std::uint64_t seed);

// One tag per token; special-tag rules override the model.
std::vector<std::string> tag(const std::vector<std::string>& tokens, const TaggerModel& model);
std::vector<std::string> tag(const std::vector<Token>& tokens, const TaggerModel& model);

// One sentence per line, tokens as `surface_TAG` separated by spaces. The
// tag follows the last underscore.
std::vector<TaggedSentence> read_tagged_corpus(std::istream& in);
std::string format_tagged(const TaggedSentence& sentence);

std::string serialize(const TaggerModel& model);
TaggerModel parse_tagger_model(std::string_view text);
TaggerModel load_tagger_file(const std::string& path);

}  // namespace cnfepi
