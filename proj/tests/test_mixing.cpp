#include <doctest.h>

#include <cmath>
#include <vector>

#include "ctqw/closed_form.hpp"
#include "ctqw/mixing.hpp"

using namespace ctqw;

TEST_CASE("deviation_sum: uniform, initial, and the L1 ceiling") {
  const int n = 20;
  CHECK(deviation_sum(ProbabilityDistribution(
            std::vector<double>(n, 1.0 / n))) == doctest::Approx(0.0));

  std::vector<double> localized(n, 0.0);
  localized[0] = 1.0;
  CHECK(deviation_sum(ProbabilityDistribution(localized)) ==
        doctest::Approx(1.9).epsilon(1e-12));

  // L1 distance between two distributions never exceeds 2.
  std::vector<double> lopsided(n, 0.0);
  lopsided[3] = 0.5;
  lopsided[17] = 0.5;
  CHECK(deviation_sum(ProbabilityDistribution(lopsided)) <= 2.0);
}

TEST_CASE("majorizer: t = 0 value, gamma = 0 plateau, monotone decay") {
  const WalkParams params(20, 0.01);
  CHECK(majorizer(0.0, params).per_node ==
        doctest::Approx(1.0 + 1.0 / 20).epsilon(1e-14));
  CHECK(majorizer(0.0, params).total ==
        doctest::Approx(21.0).epsilon(1e-14));

  const WalkParams frozen(20, 0.0);
  for (double t : {0.0, 10.0, 500.0}) {
    CHECK(majorizer(t, frozen).per_node ==
          doctest::Approx(1.05).epsilon(1e-14));
  }

  double prev = majorizer(0.0, params).per_node;
  for (double t = 0.5; t <= 800.0; t += 0.5) {
    const double value = majorizer(t, params).per_node;
    CHECK(value <= prev + 1e-15);
    prev = value;
  }

  CHECK_THROWS_AS(majorizer(-1.0, params), DomainError);
}

TEST_CASE("mixing_time_bound: pinned value, edge cases, monotonicity") {
  CHECK(mixing_time_bound(WalkParams(20, 0.01), 0.05) ==
        doctest::Approx(2000.0 * std::log(80.0)).epsilon(1e-12));
  CHECK(mixing_time_bound(WalkParams(20, 0.01), 0.05) ==
        doctest::Approx(8764.05).epsilon(1e-5));

  CHECK(mixing_time_bound(WalkParams(20, 0.01), 4.0) == 0.0);
  CHECK_THROWS_AS(mixing_time_bound(WalkParams(20, 0.0), 0.05),
                  UnboundedError);
  CHECK_THROWS_AS(mixing_time_bound(WalkParams(20, 0.01), 0.0), DomainError);
  CHECK_THROWS_AS(mixing_time_bound(WalkParams(20, 0.01), 4.5), DomainError);

  // Doubling N doubles the bound; the bound falls with gamma and epsilon.
  const double base = mixing_time_bound(WalkParams(10, 0.01), 0.05);
  CHECK(mixing_time_bound(WalkParams(20, 0.01), 0.05) ==
        doctest::Approx(2.0 * base));
  CHECK(mixing_time_bound(WalkParams(10, 0.02), 0.05) < base);
  CHECK(mixing_time_bound(WalkParams(10, 0.01), 0.1) < base);
}

TEST_CASE("bound chain: N x majorizer(bound) <= epsilon on the full lattice") {
  for (int n = 3; n <= 64; ++n) {
    for (double gamma : {0.001, 0.01, 0.1}) {
      for (double epsilon : {0.01, 0.05, 0.2}) {
        const WalkParams params(n, gamma);
        const double t_bound = mixing_time_bound(params, epsilon);
        CHECK(majorizer(t_bound, params).total <= epsilon);
      }
    }
  }
}

TEST_CASE("domination: closed-form deviation stays under the envelope total") {
  struct Case {
    int n;
    double gamma;
    double t_max;
  };
  for (const Case& c : {Case{5, 0.1, 250.0}, Case{8, 0.05, 400.0}}) {
    const WalkParams params(c.n, c.gamma);
    const ClosedFormEvaluator evaluator(params);
    for (double t = 0.0; t <= c.t_max; t += 0.25) {
      const double dev = deviation_sum(evaluator.distribution_at(t));
      CHECK(dev <= majorizer(t, params).total + 1e-9);
    }
  }
}

TEST_CASE("deviation_series: initial sample pins the exact t = 0 anchors") {
  const WalkParams params(20, 0.01);
  std::vector<double> grid;
  for (double t = 0.0; t <= 50.0; t += 0.5) grid.push_back(t);
  const DeviationSeries series =
      deviation_series(params, grid, Source::kClosedForm);
  REQUIRE(series.size() == grid.size());
  CHECK(series[0].deviation == doctest::Approx(1.9).epsilon(1e-12));
  CHECK(series[0].majorizer_total == doctest::Approx(21.0).epsilon(1e-12));
  for (size_t i = 0; i < series.size(); ++i) {
    CHECK(series[i].deviation <= series[i].majorizer_total);
  }
}

TEST_CASE("deviation_series on [0, 1000]: decaying oscillation under a smooth envelope") {
  const WalkParams params(20, 0.01);
  std::vector<double> grid;
  for (double t = 0.0; t <= 1000.0; t += 1.0) grid.push_back(t);
  const DeviationSeries series =
      deviation_series(params, grid, Source::kClosedForm);

  int local_maxima = 0;
  for (size_t i = 1; i + 1 < series.size(); ++i) {
    CHECK(series[i].deviation <= series[i].majorizer_total);
    CHECK(series[i].majorizer_total < series[i - 1].majorizer_total);
    if (series[i].deviation > series[i - 1].deviation &&
        series[i].deviation > series[i + 1].deviation) {
      ++local_maxima;
    }
  }
  CHECK(local_maxima >= 5);  // the deviation keeps oscillating while it decays
  CHECK(series[series.size() - 1].deviation <
        0.01 * series[0].deviation);  // and has collapsed by t = 1000
}

TEST_CASE("deviation_series: oracle and closed form agree in the regime") {
  // First-order closed form vs exact integration: the deviation-sum gap
  // scales linearly in gamma (measured ~1e-2 at gamma = 0.005, N = 8).
  const WalkParams params(8, 0.005);
  std::vector<double> grid;
  for (double t = 0.0; t <= 40.0; t += 2.0) grid.push_back(t);
  const DeviationSeries closed =
      deviation_series(params, grid, Source::kClosedForm);
  const DeviationSeries oracle =
      deviation_series(params, grid, Source::kOracle, 0.01);
  for (size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(closed[i].deviation - oracle[i].deviation) < 2e-2);
  }
}

TEST_CASE("mixing_time_numeric: gamma = 0 never converges") {
  const MixingResult result =
      mixing_time_numeric(WalkParams(20, 0.0), 0.05, Source::kClosedForm);
  CHECK_FALSE(result.converged);
  CHECK(result.horizon == kGamma0Horizon);
}

TEST_CASE("mixing_time_numeric: respects the analytic bound") {
  const WalkParams params(20, 0.01);
  MixingOptions options;
  options.horizon = mixing_time_bound(params, 0.05);
  const MixingResult result =
      mixing_time_numeric(params, 0.05, Source::kClosedForm, options);
  REQUIRE(result.converged);
  CHECK(result.mixing_time > 0.0);
  CHECK(result.mixing_time <= mixing_time_bound(params, 0.05));
  REQUIRE(result.first_crossing.has_value());
  CHECK(*result.first_crossing <= result.mixing_time);
}

TEST_CASE("mixing_time_numeric: epsilon above the L1 ceiling gives t* = 0") {
  const WalkParams params(20, 0.01);
  const MixingResult result =
      mixing_time_numeric(params, 2.1, Source::kClosedForm);
  REQUIRE(result.converged);
  CHECK(result.mixing_time == 0.0);
  REQUIRE(result.first_crossing.has_value());
  CHECK(*result.first_crossing == 0.0);
}

TEST_CASE("mixing_time_numeric rejects bad epsilon") {
  const WalkParams params(5, 0.1);
  CHECK_THROWS_AS(mixing_time_numeric(params, 0.0, Source::kClosedForm),
                  DomainError);
  CHECK_THROWS_AS(mixing_time_numeric(params, -1.0, Source::kClosedForm),
                  DomainError);
}

TEST_CASE("gamma_sweep: 1/gamma trend at small gamma") {
  const std::vector<double> gammas = {0.005, 0.01, 0.02, 0.04};
  const std::vector<SweepRow> rows =
      gamma_sweep(20, 0.05, gammas, Source::kClosedForm);
  REQUIRE(rows.size() == 4);
  for (size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(rows[i].result.converged);
    CHECK(rows[i].perturbative);
    CHECK(rows[i].result.mixing_time <= rows[i].bound);
  }
  // t* scales like 1/gamma: consecutive products stay within 20%.
  for (size_t i = 0; i + 1 < rows.size(); ++i) {
    const double a = rows[i].result.mixing_time * rows[i].gamma;
    const double b = rows[i + 1].result.mixing_time * rows[i + 1].gamma;
    CHECK(std::abs(a - b) / a < 0.2);
  }
}

TEST_CASE("gamma_sweep: Zeno side, mixing slows down again at strong gamma") {
  const std::vector<double> gammas = {2.0, 8.0};
  MixingOptions options;
  options.horizon = 3000.0;
  options.grid_step = 0.5;
  const std::vector<SweepRow> rows =
      gamma_sweep(5, 0.2, gammas, Source::kOracle, options);
  REQUIRE(rows.size() == 2);
  REQUIRE(rows[0].result.converged);
  REQUIRE(rows[1].result.converged);
  CHECK_FALSE(rows[1].perturbative);
  CHECK(rows[1].result.mixing_time > rows[0].result.mixing_time);
}

TEST_CASE("gamma_sweep validates its gamma list") {
  const std::vector<double> unsorted = {0.1, 0.05};
  CHECK_THROWS_AS(gamma_sweep(5, 0.05, unsorted, Source::kClosedForm),
                  DomainError);
  const std::vector<double> nonpositive = {0.0, 0.05};
  CHECK_THROWS_AS(gamma_sweep(5, 0.05, nonpositive, Source::kClosedForm),
                  DomainError);
}
