#include "tempsweep/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tempsweep/errors.hpp"

namespace tempsweep::sampling {

namespace {

void require_valid_logits(std::span<const double> logits) {
  if (logits.empty()) throw InvalidInputError("logit vector is empty");
  for (double v : logits) {
    if (!std::isfinite(v)) throw InvalidInputError("logit vector contains a non-finite value");
  }
}

void require_valid_dist(const TokenDistribution& dist) {
  if (dist.probs.empty()) throw InvalidInputError("distribution is empty");
  long double sum = 0.0L;
  for (double p : dist.probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInputError("probability outside [0, 1]");
    sum += p;
  }
  if (sum == 0.0L) throw InvalidInputError("distribution has zero total mass");
  if (std::fabs(static_cast<double>(sum) - 1.0) > 1e-9)
    throw InvalidInputError("distribution does not sum to 1");
}

std::size_t argmax_lowest_index(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

// Indices ordered by descending probability, ties by lower index.
std::vector<std::size_t> descending_order(const std::vector<double>& probs) {
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
  return order;
}

}  // namespace

std::vector<std::size_t> TokenDistribution::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) out.push_back(i);
  }
  return out;
}

void SamplingConfig::validate() const {
  if (temperature < 0.0) throw InvalidInputError("temperature must be non-negative");
  if (temperature > temperature_ceiling)
    throw InvalidInputError("temperature exceeds ceiling " + std::to_string(temperature_ceiling));
  if (top_k && *top_k < 1) throw InvalidInputError("top_k must be >= 1 when enabled");
  if (!(top_p > 0.0 && top_p <= 1.0)) throw InvalidInputError("top_p must be in (0, 1]");
  if (max_new_tokens < 1) throw InvalidInputError("max_new_tokens must be positive");
  if (max_length < 1) throw InvalidInputError("max_length must be positive");
}

TokenDistribution apply_temperature(std::span<const double> logits, double temperature) {
  require_valid_logits(logits);
  if (temperature < 0.0) throw InvalidInputError("temperature must be non-negative");

  TokenDistribution out;
  out.probs.assign(logits.size(), 0.0);

  if (temperature <= kEpsilonGreedy) {
    out.probs[argmax_lowest_index(logits)] = 1.0;
    return out;
  }

  const double max_logit = *std::max_element(logits.begin(), logits.end());
  long double sum = 0.0L;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double e = std::exp((logits[i] - max_logit) / temperature);
    out.probs[i] = e;
    sum += e;
  }
  for (double& p : out.probs) p = static_cast<double>(p / sum);
  return out;
}

std::vector<double> apply_repetition_penalty(std::vector<double> logits,
                                             std::span<const int> history, double rp,
                                             std::vector<std::string>* warnings) {
  require_valid_logits(logits);
  if (rp <= 0.0 || rp < kRepetitionPenaltyFloor) {
    if (warnings)
      warnings->push_back("repetition penalty " + std::to_string(rp) + " clamped to " +
                          std::to_string(kRepetitionPenaltyFloor));
    rp = kRepetitionPenaltyFloor;
  }

  // rp = 1 falls through: x / 1.0 and x * 1.0 are exact.
  std::vector<bool> seen(logits.size(), false);
  for (int token : history) {
    if (token < 0 || static_cast<std::size_t>(token) >= logits.size())
      throw InvalidInputError("history token index out of range");
    if (seen[static_cast<std::size_t>(token)]) continue;
    seen[static_cast<std::size_t>(token)] = true;
    double& logit = logits[static_cast<std::size_t>(token)];
    logit = logit > 0.0 ? logit / rp : logit * rp;
  }
  return logits;
}

TokenDistribution apply_top_k(const TokenDistribution& dist, int k) {
  require_valid_dist(dist);
  if (k < 1) throw InvalidInputError("top_k must be >= 1");
  if (static_cast<std::size_t>(k) >= dist.size()) return dist;

  const auto order = descending_order(dist.probs);
  TokenDistribution out;
  out.probs.assign(dist.size(), 0.0);
  long double kept = 0.0L;
  for (int i = 0; i < k; ++i) kept += dist.probs[order[static_cast<std::size_t>(i)]];
  for (int i = 0; i < k; ++i) {
    const std::size_t idx = order[static_cast<std::size_t>(i)];
    out.probs[idx] = static_cast<double>(dist.probs[idx] / kept);
  }
  return out;
}

TokenDistribution apply_top_p(const TokenDistribution& dist, double p) {
  require_valid_dist(dist);
  if (!(p > 0.0 && p <= 1.0)) throw InvalidInputError("top_p must be in (0, 1]");
  if (p == 1.0) return dist;

  const auto order = descending_order(dist.probs);
  double cumulative = 0.0;
  std::size_t cutoff = order.size();
  for (std::size_t i = 0; i < order.size(); ++i) {
    cumulative += dist.probs[order[i]];
    if (cumulative >= p) {
      cutoff = i + 1;
      break;
    }
  }

  TokenDistribution out;
  out.probs.assign(dist.size(), 0.0);
  long double kept = 0.0L;
  for (std::size_t i = 0; i < cutoff; ++i) kept += dist.probs[order[i]];
  for (std::size_t i = 0; i < cutoff; ++i) {
    const std::size_t idx = order[i];
    out.probs[idx] = static_cast<double>(dist.probs[idx] / kept);
  }
  return out;
}

std::size_t sample_token(const TokenDistribution& dist, Rng& rng) {
  require_valid_dist(dist);
  const double u = rng.next_uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    if (dist.probs[i] <= 0.0) continue;
    last_positive = i;
    cumulative += dist.probs[i];
    if (u < cumulative) return i;
  }
  // Floating tail: u landed past the accumulated mass.
  return last_positive;
}

double entropy(const TokenDistribution& dist) {
  require_valid_dist(dist);
  long double h = 0.0L;
  for (double p : dist.probs) {
    if (p > 0.0) h -= static_cast<long double>(p) * std::log(static_cast<long double>(p));
  }
  return std::max(0.0, static_cast<double>(h));
}

PipelineResult sample_pipeline(std::span<const double> logits, std::span<const int> history,
                               const SamplingConfig& config, Rng& rng) {
  config.validate();
  PipelineResult result;
  const std::vector<double> penalized = apply_repetition_penalty(
      std::vector<double>(logits.begin(), logits.end()), history, config.repetition_penalty,
      &result.warnings);
  TokenDistribution dist = apply_temperature(penalized, config.temperature);
  if (config.top_k) dist = apply_top_k(dist, *config.top_k);
  dist = apply_top_p(dist, config.top_p);
  result.token = sample_token(dist, rng);
  result.dist = std::move(dist);
  return result;
}

}  // namespace tempsweep::sampling
