#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tempsweep/ability.hpp"

namespace tempsweep::stats {

struct CurvePoint {
  double temperature = 0.0;
  double mean_score = 0.0;
  double std_dev = 0.0;
  int n = 0;
};

/// Temperature -> performance mapping for one (model, ability).
/// Temperatures must be strictly increasing.
struct PerformanceCurve {
  std::string model_id;
  Ability ability = Ability::CR;
  std::vector<CurvePoint> points;

  std::vector<double> temperatures() const;
  std::vector<double> means() const;
};

struct Correlation {
  double coefficient = 0.0;
  double p_value = 1.0;
};

/// Product-moment coefficient; p-value via the t transform with n - 2
/// degrees of freedom. Requires n >= 3 and non-zero variance on both sides
/// (zero variance throws UndefinedStatError, never NaN).
Correlation pearson(std::span<const double> xs, std::span<const double> ys);

/// Pearson over average-ranked data; ties receive averaged ranks.
Correlation spearman(std::span<const double> xs, std::span<const double> ys);

std::vector<double> average_ranks(std::span<const double> xs);

/// 100 * (max - min) / mean of the per-temperature means. Can exceed 100.
double range_pct(const PerformanceCurve& curve);

/// 100 * population std / mean of the per-temperature means.
double cv_pct(const PerformanceCurve& curve);

/// Smallest temperature whose drop from the previous grid point exceeds
/// delta as a fraction of the curve maximum; nullopt when no consecutive
/// drop qualifies.
std::optional<double> mutation_temperature(const PerformanceCurve& curve, double delta = 0.25);

/// Pairwise Pearson coefficients over curves sharing one temperature grid,
/// ordered (0,1), (0,2), ..., (1,2), ... For three curves this is the
/// (first vs second, first vs third, second vs third) convention.
std::vector<double> curve_correlation_matrix(std::span<const PerformanceCurve> curves);

/// One analysis row; unset fields mean the statistic was undefined for the
/// input (constant scores, single point, ...).
struct StatsSummary {
  std::optional<Correlation> pearson;
  std::optional<Correlation> spearman;
  std::optional<double> range_pct;
  std::optional<double> cv_pct;
  std::optional<double> mutation_temperature;
  std::vector<std::string> warnings;
};

}  // namespace tempsweep::stats
