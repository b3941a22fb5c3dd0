#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cnfepi {

struct Token {
  std::string surface;
  std::size_t position = 0;  // index in the normalized sequence

  bool operator==(const Token&) const = default;
};

// Lowercases ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic letters.
// Invalid UTF-8 bytes pass through unchanged.
std::string to_lower(std::string_view utf8);

bool is_unicode_space(char32_t cp);

// ASCII punctuation, the characters removed by normalize_tokenize.
bool is_strip_char(char c);

// Lowercase, split on Unicode whitespace and strip ASCII punctuation.
// A token-initial `@` or `#` survives, and tokens starting with `http` are
// kept verbatim (after lowercasing). Empty tokens are dropped.
std::vector<Token> normalize_tokenize(std::string_view text);

std::vector<std::string> surfaces(const std::vector<Token>& tokens);

std::vector<Token> make_tokens(const std::vector<std::string>& surfaces);

std::string join(const std::vector<std::string>& parts, std::string_view sep = " ");

}  // namespace cnfepi
