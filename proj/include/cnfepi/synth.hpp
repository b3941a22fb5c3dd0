#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cnfepi/corpus.hpp"

namespace cnfepi {

// Synthetic two-disease corpus. Both diseases express relevance through the
// same concepts, but every concept slot draws its surface word from a
// disease-specific sub-lexicon, so the two corpora share no label-bearing
// words. Shared filler and trailing noun phrases are inserted independently
// of the label.
enum class SynthDisease { A, B };

SynthDisease parse_synth_disease(std::string_view text);  // "a" | "b"

struct SynthConfig {
  SynthDisease disease = SynthDisease::A;
  std::size_t count = 1000;
  double prevalence = 0.5;  // exact positive count is round(prevalence * count)
  std::uint64_t seed = 1;
  std::string id_prefix = "a";
  std::string name = "synth-a";
};

struct SynthLexiconEntry {
  std::string concept_name;
  std::vector<std::string> a;
  std::vector<std::string> b;
};

const std::vector<SynthLexiconEntry>& synth_lexicon();
const std::vector<std::string>& synth_disease_names(SynthDisease disease);
const std::vector<std::string>& synth_filler();
// Label-independent trailing nouns, by Penn Treebank tag.
const std::vector<std::string>& synth_nouns(std::string_view tag);  // "NN" | "NNS" | "NNP"
const std::vector<std::string>& synth_prepositions();

Dataset synth_corpus(const SynthConfig& config);

}  // namespace cnfepi
