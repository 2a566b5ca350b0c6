#include "tempsweep/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>

#include "tempsweep/errors.hpp"

namespace tempsweep::stats {

namespace {

void require_curve(const PerformanceCurve& curve, std::size_t min_points) {
  if (curve.points.size() < min_points)
    throw InvalidInputError("curve needs at least " + std::to_string(min_points) + " points");
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    if (!(curve.points[i].temperature > curve.points[i - 1].temperature))
      throw InvalidInputError("curve temperatures must be strictly increasing");
  }
}

double mean_of(std::span<const double> xs) {
  long double sum = 0.0L;
  for (double x : xs) sum += x;
  return static_cast<double>(sum / static_cast<long double>(xs.size()));
}

// Two-sided p for the t statistic of a correlation coefficient on n points.
double correlation_p_value(double r, std::size_t n) {
  const auto dof = static_cast<double>(n - 2);
  const double denom = (1.0 - r) * (1.0 + r);
  if (denom <= 0.0) return 0.0;  // |r| = 1, exact fit
  const double t = r * std::sqrt(dof / denom);
  boost::math::students_t_distribution<double> dist(dof);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

}  // namespace

std::vector<double> PerformanceCurve::temperatures() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.temperature);
  return out;
}

std::vector<double> PerformanceCurve::means() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.mean_score);
  return out;
}

Correlation pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidInputError("pearson: length mismatch");
  if (xs.size() < 3) throw InvalidInputError("pearson: need at least 3 points");

  const std::size_t n = xs.size();
  long double mx = 0.0L, my = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<long double>(n);
  my /= static_cast<long double>(n);

  long double sxy = 0.0L, sxx = 0.0L, syy = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const long double dx = xs[i] - mx;
    const long double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0L || syy == 0.0L)
    throw UndefinedStatError("pearson: zero variance in an argument");

  double r = static_cast<double>(sxy / std::sqrt(sxx * syy));
  r = std::clamp(r, -1.0, 1.0);
  return {r, correlation_p_value(r, n)};
}

std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });

  std::vector<double> ranks(xs.size(), 0.0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double averaged = static_cast<double>(i + j + 2) / 2.0;  // 1-based
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = averaged;
    i = j + 1;
  }
  return ranks;
}

Correlation spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidInputError("spearman: length mismatch");
  if (xs.size() < 3) throw InvalidInputError("spearman: need at least 3 points");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  try {
    return pearson(rx, ry);
  } catch (const UndefinedStatError&) {
    throw UndefinedStatError("spearman: zero rank variance in an argument");
  }
}

double range_pct(const PerformanceCurve& curve) {
  require_curve(curve, 2);
  const auto means = curve.means();
  const double denom = mean_of(means);
  if (denom <= 0.0) throw UndefinedStatError("range_pct: mean of means is not positive");
  const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
  return 100.0 * (*hi - *lo) / denom;
}

double cv_pct(const PerformanceCurve& curve) {
  require_curve(curve, 1);
  const auto means = curve.means();
  const double denom = mean_of(means);
  if (denom <= 0.0) throw UndefinedStatError("cv_pct: mean of means is not positive");

  // Population standard deviation: the grid is the whole population of
  // tested temperatures, not a sample from it.
  long double ss = 0.0L;
  for (double m : means) ss += (static_cast<long double>(m) - denom) * (static_cast<long double>(m) - denom);
  const double sd = static_cast<double>(std::sqrt(ss / static_cast<long double>(means.size())));
  return 100.0 * sd / denom;
}

std::optional<double> mutation_temperature(const PerformanceCurve& curve, double delta) {
  require_curve(curve, 2);
  const auto means = curve.means();
  const double peak = *std::max_element(means.begin(), means.end());
  if (peak <= 0.0) return std::nullopt;
  for (std::size_t i = 1; i < means.size(); ++i) {
    if ((means[i - 1] - means[i]) / peak > delta) return curve.points[i].temperature;
  }
  return std::nullopt;
}

std::vector<double> curve_correlation_matrix(std::span<const PerformanceCurve> curves) {
  if (curves.size() < 2) throw InvalidInputError("need at least two curves");
  const auto grid = curves.front().temperatures();
  for (const auto& curve : curves) {
    require_curve(curve, 2);
    const auto other = curve.temperatures();
    if (other.size() != grid.size() ||
        !std::equal(grid.begin(), grid.end(), other.begin(),
                    [](double a, double b) { return std::fabs(a - b) <= 1e-9; }))
      throw InvalidInputError("curves are not on a shared temperature grid");
  }

  std::vector<double> out;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    for (std::size_t j = i + 1; j < curves.size(); ++j) {
      out.push_back(pearson(curves[i].means(), curves[j].means()).coefficient);
    }
  }
  return out;
}

}  // namespace tempsweep::stats
