#include "tempsweep/mock_model.hpp"

#include <fstream>

#include <json.hpp>

#include "tempsweep/errors.hpp"

namespace tempsweep {

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

TrigramModel TrigramModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mock model file: " + path.string());

  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("bad mock model json: " + std::string(e.what()));
  }

  TrigramModel model;
  model.vocab_ = doc.at("vocab").get<std::vector<std::string>>();
  model.unigram_ = doc.at("unigram").get<std::vector<double>>();
  model.bigram_ = doc.at("bigram").get<std::vector<std::vector<double>>>();

  const auto v = model.vocab_.size();
  if (v == 0 || model.unigram_.size() != v || model.bigram_.size() != v)
    throw ParseError("mock model tables disagree on vocab size");
  for (const auto& row : model.bigram_)
    if (row.size() != v) throw ParseError("mock model bigram row has wrong width");

  for (const auto& entry : doc.at("trigram")) {
    const int a = entry.at(0).get<int>();
    const int b = entry.at(1).get<int>();
    const int c = entry.at(2).get<int>();
    if (a < 0 || b < 0 || c < 0 || a >= static_cast<int>(v) || b >= static_cast<int>(v) ||
        c >= static_cast<int>(v))
      throw ParseError("mock model trigram entry out of range");
    model.trigram_[{a, b}][c] = entry.at(3).get<double>();
  }
  return model;
}

std::vector<double> TrigramModel::next_logits(int prev2, int prev1) const {
  std::vector<double> logits = bigram_[static_cast<std::size_t>(prev1)];
  const auto it = trigram_.find({prev2, prev1});
  if (it != trigram_.end())
    for (const auto& [token, boost] : it->second) logits[static_cast<std::size_t>(token)] += boost;
  return logits;
}

std::string TrigramModel::generate(const std::string& prompt,
                                   const sampling::SamplingConfig& config) const {
  const int v = vocab_size();
  const std::uint64_t hash = fnv1a64(prompt);
  int prev1 = static_cast<int>(hash % static_cast<std::uint64_t>(v));
  int prev2 = static_cast<int>((hash >> 6) % static_cast<std::uint64_t>(v));

  // Mixing the prompt hash into the seed keeps distinct prompts on distinct
  // sample paths while (prompt, config) stays exactly replayable.
  Rng rng(config.seed ^ hash);

  std::string out;
  std::vector<int> history{prev2, prev1};
  for (int step = 0; step < config.max_new_tokens; ++step) {
    const auto logits = next_logits(prev2, prev1);
    const auto picked = sampling::sample_pipeline(logits, history, config, rng);
    const int token = static_cast<int>(picked.token);
    if (!out.empty()) out += ' ';
    out += vocab_[picked.token];
    history.push_back(token);
    prev2 = prev1;
    prev1 = token;
  }
  return out;
}

}  // namespace tempsweep
