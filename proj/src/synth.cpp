#include "cnfepi/synth.hpp"

#include <cmath>
#include <map>

#include "cnfepi/error.hpp"
#include "cnfepi/random.hpp"
#include "cnfepi/textnorm.hpp"

namespace cnfepi {

SynthDisease parse_synth_disease(std::string_view text) {
  if (text == "a" || text == "A") return SynthDisease::A;
  if (text == "b" || text == "B") return SynthDisease::B;
  throw Error(ErrorCode::InvalidArgument, "unknown synthetic disease '" + std::string(text) + "'");
}

const std::vector<SynthLexiconEntry>& synth_lexicon() {
  static const std::vector<SynthLexiconEntry> lexicon = {
      {"SELF_REF", {"i", "my", "me"}, {"we", "our", "us"}},
      {"HAVE", {"have", "got", "caught"}, {"had", "has", "getting"}},
      {"BE", {"am", "is"}, {"was", "are"}},
      {"FEEL", {"feel", "feeling"}, {"felt", "feels"}},
      {"MORBIDITY",
       {"sick", "fever", "cough", "sneezing", "chills", "congestion", "sore", "coughing", "runny"},
       {"ill", "nausea", "vomiting", "diarrhea", "cramps", "rash", "itch", "itchy", "aches"}},
      {"WINDOW", {"today", "tonight", "now", "morning"}, {"yesterday", "recently", "lately", "currently"}},
      {"EXTENT", {"so", "really", "very"}, {"extremely", "super", "totally"}},
      {"ANATOMY", {"throat", "head", "nose", "chest"}, {"stomach", "skin", "body", "back"}},
      {"REPORT", {"news", "article", "headline", "reported", "says"}, {"study", "report", "paper", "confirmed", "announced"}},
      {"LARGE_QUANTITY", {"millions", "thousands", "many"}, {"billions", "hundreds", "dozens"}},
      {"PEOPLE", {"people", "citizens", "everyone"}, {"residents", "population", "folks"}},
      {"OTHER_TIME", {"years", "decades", "ago", "history"}, {"century", "past", "season", "annual"}},
      {"THIRD_PERSON", {"he", "she", "his"}, {"they", "their", "them"}},
      {"GOVERNMENT", {"officials", "government", "cdc"}, {"authorities", "agency", "fda"}},
      {"TREATMENT", {"vaccine", "shots", "medicine"}, {"antibiotics", "pills", "treatment"}},
      {"INCREMENT", {"outbreak", "spreading", "rise"}, {"epidemic", "surge", "increase"}},
      {"MORTALITY", {"died", "deaths", "killed"}, {"dead", "dies", "fatal"}},
      {"LOCALITY", {"country", "nationwide", "city"}, {"state", "worldwide", "region"}},
      {"FREQUENCY", {"never"}, {"rarely"}},
  };
  return lexicon;
}

const std::vector<std::string>& synth_disease_names(SynthDisease disease) {
  static const std::vector<std::string> a = {"flu", "influenza"};
  static const std::vector<std::string> b = {"listeria", "salmonella"};
  return disease == SynthDisease::A ? a : b;
}

const std::vector<std::string>& synth_filler() {
  static const std::vector<std::string> filler = {"lol", "ugh", "omg", "smh", "honestly", "literally"};
  return filler;
}

const std::vector<std::string>& synth_nouns(std::string_view tag) {
  static const std::vector<std::string> nn = {"party", "game", "class", "store", "gym", "church", "concert", "mall"};
  static const std::vector<std::string> nns = {"parties", "games", "classes", "stores", "meetings", "concerts"};
  static const std::vector<std::string> nnp = {"boston", "chicago", "texas", "london", "paris", "monday", "friday"};
  if (tag == "NN") return nn;
  if (tag == "NNS") return nns;
  if (tag == "NNP") return nnp;
  throw Error(ErrorCode::InvalidArgument, "no synthetic nouns for tag '" + std::string(tag) + "'");
}

const std::vector<std::string>& synth_prepositions() {
  static const std::vector<std::string> preps = {"at", "in"};
  return preps;
}

namespace {

// Slot grammar: CONCEPT draws from the lexicon, ?CONCEPT is optional, $D is
// a disease name.
using Template = std::vector<std::string>;

const std::vector<Template>& positive_templates() {
  static const std::vector<Template> t = {
      {"SELF_REF", "BE", "?EXTENT", "MORBIDITY", "WINDOW"},
      {"SELF_REF", "HAVE", "$D", "WINDOW"},
      {"WINDOW", "SELF_REF", "FEEL", "?EXTENT", "MORBIDITY"},
      {"SELF_REF", "ANATOMY", "BE", "MORBIDITY", "WINDOW"},
      {"SELF_REF", "HAVE", "MORBIDITY", "MORBIDITY", "WINDOW"},
      {"SELF_REF", "FEEL", "MORBIDITY", "WINDOW", "?$D"},
  };
  return t;
}

const std::vector<Template>& negative_templates() {
  static const std::vector<Template> t = {
      {"LARGE_QUANTITY", "PEOPLE", "HAVE", "$D", "?REPORT"},
      {"REPORT", "$D", "INCREMENT", "LOCALITY", "?WINDOW"},
      {"GOVERNMENT", "REPORT", "TREATMENT", "$D"},
      {"THIRD_PERSON", "HAVE", "$D", "OTHER_TIME"},
      {"SELF_REF", "FREQUENCY", "HAVE", "$D", "?OTHER_TIME"},
      {"$D", "MORTALITY", "LARGE_QUANTITY", "LOCALITY"},
      {"SELF_REF", "HAVE", "$D", "OTHER_TIME"},
  };
  return t;
}

template <typename T>
const T& pick(const std::vector<T>& items, Rng& rng) {
  return items[rng.index(items.size())];
}

std::vector<std::string> render(const Template& tpl, SynthDisease disease, Rng& rng) {
  static const auto index = [] {
    std::map<std::string, const SynthLexiconEntry*, std::less<>> m;
    for (const auto& e : synth_lexicon()) m.emplace(e.concept_name, &e);
    return m;
  }();
  std::vector<std::string> words;
  for (std::string_view slot : tpl) {
    if (slot.front() == '?') {
      if (rng.uniform() < 0.5) continue;
      slot.remove_prefix(1);
    }
    if (slot == "$D") {
      words.push_back(pick(synth_disease_names(disease), rng));
      continue;
    }
    const auto* entry = index.at(std::string(slot));
    words.push_back(pick(disease == SynthDisease::A ? entry->a : entry->b, rng));
  }
  return words;
}

void add_label_free_noise(std::vector<std::string>& words, Rng& rng) {
  static const std::vector<std::string> tags = {"NN", "NNS", "NNP"};
  if (rng.uniform() < 0.6) {
    words.push_back(pick(synth_prepositions(), rng));
    words.push_back(pick(synth_nouns(pick(tags, rng)), rng));
  }
  std::size_t fillers = rng.index(3);
  for (std::size_t f = 0; f < fillers; ++f) {
    auto at = static_cast<std::ptrdiff_t>(rng.index(words.size() + 1));
    words.insert(words.begin() + at, pick(synth_filler(), rng));
  }
}

std::string surface_text(std::vector<std::string> words, Rng& rng) {
  if (rng.uniform() < 0.5 && !words.front().empty()) {
    char& c = words.front()[0];
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  static const std::vector<std::string> endings = {"", "!", ".", "!!"};
  return join(words) + pick(endings, rng);
}

}  // namespace

Dataset synth_corpus(const SynthConfig& config) {
  if (!(config.prevalence >= 0.0 && config.prevalence <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "prevalence must lie in [0, 1]");
  }
  Rng rng(config.seed);
  auto positives = static_cast<std::size_t>(std::llround(config.prevalence * static_cast<double>(config.count)));
  std::vector<int> labels(config.count, 0);
  for (std::size_t i = 0; i < positives; ++i) labels[i] = 1;
  rng.shuffle(labels);

  std::vector<Record> records;
  records.reserve(config.count);
  for (std::size_t i = 0; i < config.count; ++i) {
    const auto& tpl = pick(labels[i] ? positive_templates() : negative_templates(), rng);
    auto words = render(tpl, config.disease, rng);
    add_label_free_noise(words, rng);
    Record r;
    r.id = config.id_prefix + "-" + std::to_string(i);
    r.text = surface_text(std::move(words), rng);
    r.label = labels[i];
    r.dataset = config.name;
    records.push_back(std::move(r));
  }
  return Dataset(config.name, std::move(records));
}

}  // namespace cnfepi
