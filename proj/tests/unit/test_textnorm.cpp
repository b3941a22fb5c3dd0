#include <doctest.h>

#include <sstream>

#include "cnfepi/random.hpp"
#include "cnfepi/textnorm.hpp"

using namespace cnfepi;

namespace {

std::vector<std::string> toks(std::string_view text) { return surfaces(normalize_tokenize(text)); }

// Random text over letters, punctuation, markers, URL prefixes and several
// kinds of whitespace.
std::string random_text(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "a",  "B",  "flu", "Fever", "x1", "!",      "?",     ".",         ",",       "'",  "-",   "@",  "#",    "@cdc",
      "#Flu", "RT", "http://X.co/Ab", "https://a.b/#c", " ", "  ", "\t", "\n", "\xC2\xA0", "\xE2\x80\x83", "\xC3\x89t\xC3\xA9",
      "\xCE\x94", "don't", "self-care", ":)", "(", ")", "\xF0\x9F\x98\xB7"};
  std::string out;
  std::size_t n = rng.index(15);
  for (std::size_t i = 0; i < n; ++i) out += pieces[rng.index(pieces.size())];
  return out;
}

// Whitespace-separated chunk count, treating the two non-ASCII spaces the
// generator emits as spaces.
std::size_t whitespace_split_count(std::string s) {
  for (const std::string sp : {"\xC2\xA0", "\xE2\x80\x83"}) {
    for (auto at = s.find(sp); at != std::string::npos; at = s.find(sp)) s.replace(at, sp.size(), " ");
  }
  std::istringstream in(s);
  std::size_t n = 0;
  std::string w;
  while (in >> w) ++n;
  return n;
}

}  // namespace

TEST_CASE("worked example sentence") {
  CHECK(toks("I have never had the flu!") == std::vector<std::string>{"i", "have", "never", "had", "the", "flu"});
}

TEST_CASE("twitter markers survive") {
  CHECK(toks("@CDC #Flu http://x.co/Ab RT") == std::vector<std::string>{"@cdc", "#flu", "http://x.co/ab", "rt"});
}

TEST_CASE("empty and blank input") {
  CHECK(toks("").empty());
  CHECK(toks("   \t\n").empty());
  CHECK(toks("!!! ... ,").empty());
}

TEST_CASE("punctuation handling") {
  CHECK(toks("don't") == std::vector<std::string>{"dont"});
  CHECK(toks("self-care") == std::vector<std::string>{"selfcare"});
  CHECK(toks("a@b #x#y @@z") == std::vector<std::string>{"ab", "#xy", "@z"});
  CHECK(toks("(http://x.co)") == std::vector<std::string>{"httpxco"});
}

TEST_CASE("positions index the output sequence") {
  auto t = normalize_tokenize("hi ... there");
  REQUIRE(t.size() == 2);
  CHECK(t[0].position == 0);
  CHECK(t[1].position == 1);
}

TEST_CASE("unicode whitespace and lowercasing") {
  CHECK(toks("A\xC2\xA0" "B\xE2\x80\x83" "C") == std::vector<std::string>{"a", "b", "c"});
  CHECK(to_lower("\xC3\x89T\xC3\x89") == "\xC3\xA9t\xC3\xA9");
  CHECK(to_lower("\xCE\x94\xD0\x96") == "\xCE\xB4\xD0\xB6");
  CHECK(to_lower("\xFF" "A") == "\xFF" "a");
}

TEST_CASE("property: idempotent, marker placement, no growth") {
  Rng rng(11);
  for (int trial = 0; trial < 3000; ++trial) {
    auto text = random_text(rng);
    auto first = toks(text);
    CHECK(toks(join(first)) == first);
    CHECK(first.size() <= whitespace_split_count(text));
    for (const auto& t : first) {
      CHECK_FALSE(t.empty());
      if (t.rfind("http", 0) == 0) continue;
      for (std::size_t i = 0; i < t.size(); ++i) {
        bool marker = t[i] == '@' || t[i] == '#';
        if (i == 0 && marker) continue;
        CHECK_FALSE(is_strip_char(t[i]));
      }
    }
  }
}
