#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tempsweep/errors.hpp"
#include "tempsweep/rng.hpp"
#include "tempsweep/stats.hpp"

using namespace tempsweep;
using namespace tempsweep::stats;

namespace {

PerformanceCurve curve_of(std::vector<double> means, std::vector<double> temps = {}) {
  PerformanceCurve curve;
  curve.model_id = "m";
  curve.ability = Ability::IF;
  if (temps.empty()) {
    for (std::size_t i = 0; i < means.size(); ++i) temps.push_back(0.1 + 0.3 * static_cast<double>(i));
  }
  for (std::size_t i = 0; i < means.size(); ++i)
    curve.points.push_back({temps[i], means[i], 0.0, 3});
  return curve;
}

const std::vector<double> kGrid7{0.1, 0.4, 0.7, 1.0, 1.3, 1.6, 1.9};

}  // namespace

TEST_CASE("pearson: exact linear fits") {
  const std::vector<double> xs{1, 2, 3};
  CHECK(pearson(xs, std::vector<double>{2, 4, 6}).coefficient == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pearson(xs, std::vector<double>{6, 4, 2}).coefficient == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(pearson(xs, std::vector<double>{2, 4, 6}).p_value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("pearson: seven-point fixture against extended-precision oracle") {
  const std::vector<double> ys{0.5, 0.5, 0.49, 0.48, 0.4, 0.2, 0.1};
  const auto got = pearson(kGrid7, ys);
  CHECK(std::fabs(got.coefficient - oracle::pearson(kGrid7, ys)) < 1e-12);
  // Frozen from an independent implementation of the t transform.
  CHECK(got.coefficient == doctest::Approx(-0.8871772955138697).epsilon(1e-12));
  CHECK(got.p_value == doctest::Approx(0.0077210794295336409).epsilon(1e-9));
}

TEST_CASE("pearson: error cases") {
  const std::vector<double> xs{1, 2, 3};
  CHECK_THROWS_AS(pearson(xs, std::vector<double>{1, 2}), InvalidInputError);
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}),
                  InvalidInputError);
  CHECK_THROWS_AS(pearson(xs, std::vector<double>{5, 5, 5}), UndefinedStatError);
  CHECK_THROWS_AS(pearson(std::vector<double>{5, 5, 5}, xs), UndefinedStatError);
}

TEST_CASE("spearman: monotone maps and a tied fixture") {
  const std::vector<double> xs{0.1, 0.5, 0.9, 1.3};
  CHECK(spearman(xs, std::vector<double>{1, 4, 9, 16}).coefficient ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spearman(xs, std::vector<double>{16, 9, 4, 1}).coefficient ==
        doctest::Approx(-1.0).epsilon(1e-12));

  const std::vector<double> tied{0.3, 0.3, 0.5, 0.7, 0.2, 0.9, 0.1};
  const auto got = spearman(kGrid7, tied);
  CHECK(std::fabs(got.coefficient - oracle::spearman(kGrid7, tied)) < 1e-12);
  CHECK(got.coefficient == doctest::Approx(-0.12613124477737828).epsilon(1e-12));
  CHECK(got.p_value == doctest::Approx(0.78757215940747394).epsilon(1e-9));
}

TEST_CASE("spearman equals pearson over average ranks, ties included") {
  Rng rng(41);
  for (int iter = 0; iter < 300; ++iter) {
    const std::size_t n = 3 + rng.next_u64() % 10;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse quantization forces frequent ties.
      xs[i] = std::floor(rng.next_uniform() * 5.0);
      ys[i] = std::floor(rng.next_uniform() * 5.0);
    }
    try {
      const auto direct = spearman(xs, ys);
      const auto via_ranks = pearson(average_ranks(xs), average_ranks(ys));
      CHECK(direct.coefficient == via_ranks.coefficient);
      CHECK(direct.p_value == via_ranks.p_value);
    } catch (const UndefinedStatError&) {
      // All-tied vector; both routes agree on rejecting it.
      CHECK_THROWS_AS(pearson(average_ranks(xs), average_ranks(ys)), UndefinedStatError);
    }
  }
}

TEST_CASE("property: correlations invariant under positive affine transforms") {
  Rng rng(43);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<double> xs(7), ys(7);
    for (int i = 0; i < 7; ++i) {
      xs[i] = static_cast<double>(i);
      ys[i] = rng.next_uniform();
    }
    const auto base_p = pearson(xs, ys);
    const auto base_s = spearman(xs, ys);
    std::vector<double> scaled(7);
    for (int i = 0; i < 7; ++i) scaled[i] = 3.5 * ys[i] + 1.25;
    CHECK(pearson(xs, scaled).coefficient == doctest::Approx(base_p.coefficient).epsilon(1e-12));
    CHECK(spearman(xs, scaled).coefficient == doctest::Approx(base_s.coefficient).epsilon(1e-12));
  }
}

TEST_CASE("property: strictly decreasing means give negative pearson") {
  Rng rng(47);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<double> ys(7);
    double level = 0.9;
    for (int i = 0; i < 7; ++i) {
      level -= 0.01 + 0.08 * rng.next_uniform();
      ys[i] = level;
    }
    CHECK(pearson(kGrid7, ys).coefficient < 0.0);
  }
}

TEST_CASE("range_pct: fixtures") {
  CHECK(range_pct(curve_of({0.4, 0.4, 0.4})) == 0.0);
  CHECK(range_pct(curve_of({0.1, 0.3})) == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(range_pct(curve_of({0.05, 0.45, 0.25})) == doctest::Approx(160.0).epsilon(1e-12));
  CHECK_THROWS_AS(range_pct(curve_of({0.5})), InvalidInputError);
  CHECK_THROWS_AS(range_pct(curve_of({0.0, 0.0})), UndefinedStatError);
}

TEST_CASE("cv_pct: fixtures and oracle") {
  CHECK(cv_pct(curve_of({0.4, 0.4, 0.4})) == 0.0);
  CHECK(cv_pct(curve_of({0.2, 0.4})) == doctest::Approx(100.0 / 3.0).epsilon(1e-9));
  const std::vector<double> means{0.51, 0.48, 0.44, 0.37, 0.29, 0.18, 0.07};
  CHECK(std::fabs(cv_pct(curve_of(means)) - oracle::cv_pct(means)) < 1e-12);
  CHECK_THROWS_AS(cv_pct(curve_of({0.0, 0.0})), UndefinedStatError);
}

TEST_CASE("property: range and cv are scale invariant") {
  Rng rng(53);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<double> means(7);
    for (auto& m : means) m = 0.05 + 0.9 * rng.next_uniform();
    const double r = range_pct(curve_of(means));
    const double cv = cv_pct(curve_of(means));
    for (double c : {0.1, 10.0}) {
      std::vector<double> scaled;
      for (double m : means) scaled.push_back(c * m);
      CHECK(range_pct(curve_of(scaled)) == doctest::Approx(r).epsilon(1e-9));
      CHECK(cv_pct(curve_of(scaled)) == doctest::Approx(cv).epsilon(1e-9));
    }
  }
}

TEST_CASE("mutation_temperature: detection rules") {
  CHECK(!mutation_temperature(curve_of({0.5, 0.5, 0.5, 0.5})));
  const auto hit = mutation_temperature(curve_of({0.5, 0.5, 0.1}, {0.1, 1.0, 1.3}));
  REQUIRE(hit.has_value());
  CHECK(*hit == doctest::Approx(1.3));
  CHECK(!mutation_temperature(curve_of({0.5, 0.45, 0.4})));
}

TEST_CASE("mutation_temperature: fires on the smallest qualifying temperature") {
  // Two qualifying drops; the earlier one wins.
  const auto hit = mutation_temperature(curve_of({0.8, 0.5, 0.2}, {0.1, 0.7, 1.3}));
  REQUIRE(hit.has_value());
  CHECK(*hit == doctest::Approx(0.7));
}

TEST_CASE("property: mutation detection is scale invariant") {
  Rng rng(59);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<double> means(7);
    for (auto& m : means) m = 0.05 + 0.9 * rng.next_uniform();
    const auto base = mutation_temperature(curve_of(means));
    for (double c : {0.1, 10.0}) {
      std::vector<double> scaled;
      for (double m : means) scaled.push_back(c * m);
      CHECK(mutation_temperature(curve_of(scaled)) == base);
    }
  }
}

TEST_CASE("curve_correlation_matrix: identity, negation, oracle composition") {
  auto a = curve_of({0.5, 0.45, 0.4, 0.35, 0.3, 0.2, 0.1}, kGrid7);
  CHECK(curve_correlation_matrix(std::vector<PerformanceCurve>{a, a}) ==
        std::vector<double>{1.0});

  // Negate about the mean.
  const double m = oracle::mean(a.means());
  auto negated = a;
  for (auto& p : negated.points) p.mean_score = 2.0 * m - p.mean_score;
  const auto anti = curve_correlation_matrix(std::vector<PerformanceCurve>{a, negated});
  CHECK(anti[0] == doctest::Approx(-1.0).epsilon(1e-12));

  auto b = curve_of({0.2, 0.8, 0.4, 0.9, 0.1, 0.6, 0.3}, kGrid7);
  auto c = curve_of({0.9, 0.7, 0.8, 0.2, 0.4, 0.3, 0.1}, kGrid7);
  const auto got = curve_correlation_matrix(std::vector<PerformanceCurve>{a, b, c});
  REQUIRE(got.size() == 3);
  CHECK(got[0] == doctest::Approx(oracle::pearson(a.means(), b.means())).epsilon(1e-12));
  CHECK(got[1] == doctest::Approx(oracle::pearson(a.means(), c.means())).epsilon(1e-12));
  CHECK(got[2] == doctest::Approx(oracle::pearson(b.means(), c.means())).epsilon(1e-12));
}

TEST_CASE("curve_correlation_matrix: mismatched grids rejected") {
  auto a = curve_of({0.5, 0.4, 0.3}, {0.1, 0.4, 0.7});
  auto b = curve_of({0.5, 0.4, 0.3}, {0.1, 0.4, 0.8});
  CHECK_THROWS_AS(curve_correlation_matrix(std::vector<PerformanceCurve>{a, b}),
                  InvalidInputError);
  CHECK_THROWS_AS(curve_correlation_matrix(std::vector<PerformanceCurve>{a}), InvalidInputError);
}

TEST_CASE("p-values for a four-point fixture") {
  const auto got = pearson(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 2, 3, 5});
  CHECK(got.coefficient == doctest::Approx(0.98270762982399074).epsilon(1e-12));
  CHECK(got.p_value == doctest::Approx(0.017292370176009264).epsilon(1e-9));
}
