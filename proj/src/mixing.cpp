#include "ctqw/mixing.hpp"

#include <cmath>

#include "ctqw/closed_form.hpp"
#include "ctqw/master_oracle.hpp"

namespace ctqw {

std::vector<double> mixing_scan_grid(double horizon, double grid_step) {
  if (!(grid_step > 0.0) || !std::isfinite(grid_step)) {
    throw DomainError("mixing: grid_step must be positive");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw DomainError("mixing: horizon must be positive");
  }
  const auto count = static_cast<size_t>(std::floor(horizon / grid_step + 1e-9));
  std::vector<double> grid;
  grid.reserve(count + 2);
  for (size_t k = 0; k <= count; ++k) {
    grid.push_back(static_cast<double>(k) * grid_step);
  }
  if (grid.back() < horizon - grid_step * 1e-9) {
    grid.push_back(horizon);
  }
  return grid;
}

double default_horizon(const WalkParams& params, double epsilon) {
  if (params.gamma() == 0.0) return kGamma0Horizon;
  if (epsilon >= 4.0) {
    throw DomainError(
        "mixing: auto horizon undefined for epsilon >= 4; pass an explicit "
        "horizon");
  }
  return 2.0 * mixing_time_bound(params, epsilon);
}

std::string to_string(Source s) {
  return s == Source::kClosedForm ? "closed" : "oracle";
}

double deviation_sum(const ProbabilityDistribution& dist) {
  const double uniform = 1.0 / dist.size();
  double acc = 0.0;
  for (int j = 0; j < dist.size(); ++j) {
    acc += std::abs(dist[j] - uniform);
  }
  return acc;
}

MajorizerBound majorizer(double t, const WalkParams& params) {
  if (!std::isfinite(t) || t < 0.0) {
    throw DomainError("majorizer: t must be >= 0");
  }
  const double n = params.n_nodes();
  const double gamma = params.gamma();
  const double u = std::exp(-gamma * t / n);
  const double per_node =
      std::exp(-gamma * (n - 2.0) * t / n) *
      (1.0 + 1.0 / n + (u - 1.0) / n * (1.0 + 2.0 / n));
  return {per_node, n * per_node};
}

double mixing_time_bound(const WalkParams& params, double epsilon) {
  if (params.gamma() == 0.0) {
    throw UnboundedError(
        "mixing_time_bound: no bound at gamma = 0; coherent oscillations "
        "never settle to a static distribution");
  }
  if (!std::isfinite(epsilon) || epsilon <= 0.0 || epsilon > 4.0) {
    throw DomainError("mixing_time_bound: epsilon must be in (0, 4]");
  }
  return params.n_nodes() / params.gamma() * std::log(4.0 / epsilon);
}

DeviationSeries deviation_series(const WalkParams& params,
                                 std::span<const double> t_grid, Source source,
                                 double oracle_step) {
  std::vector<DeviationSeries::Sample> samples;
  samples.reserve(t_grid.size());
  if (source == Source::kClosedForm) {
    const ClosedFormEvaluator evaluator(params);
    for (double t : t_grid) {
      DeviationSeries::Sample s;
      s.t = t;
      s.deviation = deviation_sum(evaluator.distribution_at(t));
      s.majorizer_total = majorizer(t, params).total;
      samples.push_back(s);
    }
  } else {
    const int n = params.n_nodes();
    sample_trajectory(initial_state(n), t_grid, params, oracle_step,
                      [&](double t, const Eigen::MatrixXcd& rho) {
                        const double uniform = 1.0 / n;
                        double acc = 0.0;
                        for (int j = 0; j < n; ++j) {
                          acc += std::abs(rho(j, j).real() - uniform);
                        }
                        DeviationSeries::Sample s;
                        s.t = t;
                        s.deviation = acc;
                        s.majorizer_total = majorizer(t, params).total;
                        samples.push_back(s);
                      });
  }
  return DeviationSeries(std::move(samples));
}

MixingResult mixing_time_from_series(const DeviationSeries& series,
                                     double epsilon,
                                     const WalkParams& params) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("mixing: epsilon must be positive");
  }
  if (series.size() == 0) {
    throw StructuralError("mixing: empty deviation series");
  }
  MixingResult result;
  result.horizon = series[series.size() - 1].t;
  result.envelope_at_horizon = majorizer(result.horizon, params).total;

  // Last sample above epsilon decides the sustained-mixing time; the
  // envelope at the horizon extends the guarantee to t > horizon.
  std::optional<size_t> last_above;
  for (size_t i = 0; i < series.size(); ++i) {
    if (series[i].deviation > epsilon) last_above = i;
    if (!result.first_crossing && series[i].deviation <= epsilon) {
      result.first_crossing = series[i].t;
    }
  }
  const bool envelope_ok = result.envelope_at_horizon <= epsilon;
  if (!envelope_ok) {
    result.converged = false;
    return result;
  }
  if (!last_above) {
    result.converged = true;
    result.mixing_time = series[0].t;
  } else if (*last_above + 1 < series.size()) {
    result.converged = true;
    result.mixing_time = series[*last_above + 1].t;
  } else {
    result.converged = false;
  }
  return result;
}

MixingResult mixing_time_numeric(const WalkParams& params, double epsilon,
                                 Source source, const MixingOptions& options) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("mixing: epsilon must be positive");
  }
  const double horizon =
      options.horizon > 0.0 ? options.horizon : default_horizon(params, epsilon);
  const std::vector<double> grid = mixing_scan_grid(horizon, options.grid_step);
  const DeviationSeries series =
      deviation_series(params, grid, source, options.oracle_step);
  return mixing_time_from_series(series, epsilon, params);
}

std::vector<SweepRow> gamma_sweep(int n_nodes, double epsilon,
                                  std::span<const double> gamma_values,
                                  Source source,
                                  const MixingOptions& options) {
  for (size_t i = 0; i < gamma_values.size(); ++i) {
    if (!(gamma_values[i] > 0.0) || !std::isfinite(gamma_values[i])) {
      throw DomainError("gamma_sweep: gamma values must be positive");
    }
    if (i > 0 && gamma_values[i] < gamma_values[i - 1]) {
      throw DomainError("gamma_sweep: gamma values must be sorted ascending");
    }
  }
  std::vector<SweepRow> rows;
  rows.reserve(gamma_values.size());
  for (double gamma : gamma_values) {
    const WalkParams params(n_nodes, gamma);
    SweepRow row;
    row.gamma = gamma;
    row.bound = epsilon <= 4.0 ? mixing_time_bound(params, epsilon) : 0.0;
    row.perturbative = params.perturbative();

    MixingOptions row_options = options;
    if (row_options.horizon <= 0.0) {
      row_options.horizon = default_horizon(params, epsilon);
    }
    // Cap the per-row sample count; long horizons coarsen the grid instead.
    const double min_step =
        row_options.horizon / static_cast<double>(kMaxSweepSamples);
    row_options.grid_step = std::max(row_options.grid_step, min_step);
    row.result = mixing_time_numeric(params, epsilon, source, row_options);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ctqw
