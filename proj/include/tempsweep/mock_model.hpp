#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tempsweep/sampling.hpp"

namespace tempsweep {

std::uint64_t fnv1a64(std::string_view text);

/// Tiny trigram language model backing the bundled mock endpoint. Logits for
/// the next token are bigram[prev] plus any sparse boost keyed on the last
/// two tokens; the starting context is derived from the prompt hash, so
/// different prompts take different paths while (prompt, seed, config)
/// replays exactly.
class TrigramModel {
 public:
  static TrigramModel load(const std::filesystem::path& path);

  std::string generate(const std::string& prompt, const sampling::SamplingConfig& config) const;
  std::vector<double> next_logits(int prev2, int prev1) const;

  int vocab_size() const { return static_cast<int>(vocab_.size()); }
  const std::vector<std::string>& vocab() const { return vocab_; }

 private:
  std::vector<std::string> vocab_;
  std::vector<double> unigram_;
  std::vector<std::vector<double>> bigram_;
  std::map<std::pair<int, int>, std::map<int, double>> trigram_;
};

}  // namespace tempsweep
