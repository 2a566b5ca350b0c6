#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace tempsweep::metrics {

/// Injected so a learned-subword tokenizer can replace the lexical default
/// when the user supplies one.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<std::string> tokenize(std::string_view text) const = 0;
};

/// Casefolds and splits on whitespace and punctuation boundaries; tokens are
/// runs of alphanumeric characters (bytes >= 0x80 count as word characters so
/// UTF-8 words survive intact).
class DefaultTokenizer final : public Tokenizer {
 public:
  std::vector<std::string> tokenize(std::string_view text) const override;
};

const Tokenizer& default_tokenizer();

}  // namespace tempsweep::metrics
