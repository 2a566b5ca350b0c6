#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tempsweep/ability.hpp"
#include "tempsweep/endpoint.hpp"

namespace tempsweep {

struct AbilityPrediction {
  Ability label = Ability::CR;
  double confidence = 0.0;  // in [0, 1]
  std::string source;       // "local-baseline" or "remote-llm"
};

/// The ability predictor F. Implementations must be deterministic for a
/// fixed state: same prompt, same prediction.
class AbilityClassifier {
 public:
  virtual ~AbilityClassifier() = default;
  /// Throws ClassificationError when no label can be produced.
  virtual AbilityPrediction classify(const std::string& prompt) const = 0;
};

struct Exemplar {
  std::string prompt_text;
  Ability ability = Ability::CR;
};

/// Line-delimited (prompt_text, ability) pairs.
std::vector<Exemplar> load_exemplars(const std::filesystem::path& path);

/// Lexical baseline: tf-idf vectors, one L2-normalized centroid per ability,
/// cosine similarity. Confidence is the normalized margin between the best
/// and second-best centroid.
class LocalCentroidClassifier : public AbilityClassifier {
 public:
  static LocalCentroidClassifier train(std::span<const Exemplar> exemplars);
  static LocalCentroidClassifier train_from_file(const std::filesystem::path& path);

  AbilityPrediction classify(const std::string& prompt) const override;

 private:
  std::map<std::string, std::size_t> vocab_;  // term -> column
  std::vector<double> idf_;
  std::map<int, std::vector<double>> centroids_;  // ability -> unit vector
};

/// Remote variant: sends a fixed classification template with the prompt
/// substituted and parses the single ability code out of the reply.
/// Ambiguous replies are retried with a bumped seed, then raise
/// ClassificationError.
class RemoteLlmClassifier : public AbilityClassifier {
 public:
  RemoteLlmClassifier(ChatClient client, std::string template_text,
                      std::string model = "gpt-3.5-turbo-0125", int parse_retries = 1);
  static std::string load_template(const std::filesystem::path& path);

  AbilityPrediction classify(const std::string& prompt) const override;

 private:
  ChatClient client_;
  std::string template_;
  std::string model_;
  int parse_retries_;
};

}  // namespace tempsweep
