#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tempsweep/rng.hpp"

namespace tempsweep::sampling {

/// Temperatures at or below this are treated as greedy argmax decoding.
inline constexpr double kEpsilonGreedy = 1e-4;

/// Repetition penalties below this are clamped (with a recorded warning);
/// the divide-by-rp rule is undefined at rp = 0.
inline constexpr double kRepetitionPenaltyFloor = 0.05;

inline constexpr double kDefaultTemperatureCeiling = 4.0;

/// Normalized probability mass over a vocabulary.
struct TokenDistribution {
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  std::vector<std::size_t> support() const;
};

/// All decoding knobs for one generation call. top_k empty means disabled.
struct SamplingConfig {
  double temperature = 1.0;
  std::optional<int> top_k;
  double top_p = 0.9;
  double repetition_penalty = 1.0;
  std::uint64_t seed = 42;
  int max_new_tokens = 1024;
  int max_length = 4096;
  double temperature_ceiling = kDefaultTemperatureCeiling;

  /// Throws InvalidInputError on out-of-range knobs. A repetition penalty
  /// below the clamp floor is legal here; it is clamped at apply time.
  void validate() const;
};

/// Softmax of logits / T, max-subtracted, with the normalizing sum
/// accumulated in long double. T <= kEpsilonGreedy collapses to a one-hot
/// at the argmax logit (ties broken by lowest index).
TokenDistribution apply_temperature(std::span<const double> logits, double temperature);

/// CTRL-style penalty on tokens present in history: positive logits are
/// divided by rp, non-positive multiplied. rp below the floor is clamped and
/// a warning appended to *warnings when given (never silently).
std::vector<double> apply_repetition_penalty(std::vector<double> logits,
                                             std::span<const int> history, double rp,
                                             std::vector<std::string>* warnings = nullptr);

/// Restrict mass to the k highest-probability tokens (boundary ties broken by
/// lower index) and renormalize. k >= vocab size is the identity.
TokenDistribution apply_top_k(const TokenDistribution& dist, int k);

/// Keep the shortest descending-probability prefix whose cumulative mass
/// reaches p (ties by lower index), zero the rest, renormalize. p = 1 keeps
/// the full support.
TokenDistribution apply_top_p(const TokenDistribution& dist, double p);

/// Draw one token index; identical seed and distribution replay identically.
std::size_t sample_token(const TokenDistribution& dist, Rng& rng);

/// Shannon entropy in nats, 0 log 0 = 0.
double entropy(const TokenDistribution& dist);

struct PipelineResult {
  std::size_t token;
  TokenDistribution dist;
  std::vector<std::string> warnings;
};

/// Full processing chain in fixed order: repetition penalty -> temperature ->
/// top-k -> top-p -> categorical draw.
PipelineResult sample_pipeline(std::span<const double> logits, std::span<const int> history,
                               const SamplingConfig& config, Rng& rng);

}  // namespace tempsweep::sampling
