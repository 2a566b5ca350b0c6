#include "tempsweep/tokenize.hpp"

#include <cctype>

namespace tempsweep::metrics {

namespace {

bool is_word_char(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80;
}

}  // namespace

std::vector<std::string> DefaultTokenizer::tokenize(std::string_view text) const {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_word_char(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

const Tokenizer& default_tokenizer() {
  static const DefaultTokenizer instance;
  return instance;
}

}  // namespace tempsweep::metrics
