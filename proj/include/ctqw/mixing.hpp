#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ctqw/types.hpp"

// Mixing-time analysis: L1 deviation from uniform, the analytic majorizing
// envelope, the closed-form mixing-time bound t_mix <= (N/Gamma) ln(4/eps),
// numeric mixing-time search over a time grid, and Gamma sweeps.

namespace ctqw {

enum class Source { kClosedForm, kOracle };

std::string to_string(Source s);

// sum_j |P_j - 1/N|; at most 2 for any pair of distributions.
double deviation_sum(const ProbabilityDistribution& dist);

struct MajorizerBound {
  double per_node = 0.0;
  double total = 0.0;  // N x per_node
};

// Analytic envelope on |P_j(t) - 1/N|:
//   e^{-Gamma (N-2) t / N} [1 + 1/N + (e^{-Gamma t/N} - 1)/N (1 + 2/N)]
// Monotone non-increasing in t for Gamma > 0, constant 1 + 1/N at Gamma = 0.
MajorizerBound majorizer(double t, const WalkParams& params);

// (N / Gamma) ln(4 / epsilon). Requires Gamma > 0 (UnboundedError otherwise:
// without decoherence the walk never settles) and 0 < epsilon <= 4.
double mixing_time_bound(const WalkParams& params, double epsilon);

struct MixingOptions {
  double horizon = 0.0;          // 0 = auto: 2x the analytic bound
                                 // (Gamma > 0), else kGamma0Horizon
  double grid_step = 0.25;       // sampling grid for the deviation scan
  double oracle_step = 0.01;     // RK4 step when source = kOracle
};

inline constexpr double kGamma0Horizon = 1000.0;

struct MixingResult {
  bool converged = false;
  double mixing_time = 0.0;       // valid when converged
  std::optional<double> first_crossing;  // first grid t with deviation <= eps
  double horizon = 0.0;
  double envelope_at_horizon = 0.0;  // N x majorizer(horizon)
};

// 2x the analytic bound for Gamma > 0 (requires epsilon < 4 there), a fixed
// fallback at Gamma = 0 where no bound exists.
double default_horizon(const WalkParams& params, double epsilon);

// Uniform grid 0, step, 2 step, ... with the horizon appended when it does
// not land on the grid.
std::vector<double> mixing_scan_grid(double horizon, double grid_step);

// Sustained-mixing time on a grid: the smallest grid time t* such that the
// deviation stays <= epsilon at every sampled t >= t* up to the horizon AND
// the envelope total at the horizon is <= epsilon (which extends the
// guarantee past the grid). The first crossing is also reported; it can be
// much earlier than t* when the deviation still oscillates above epsilon.
MixingResult mixing_time_numeric(const WalkParams& params, double epsilon,
                                 Source source,
                                 const MixingOptions& options = {});

// Same decision rule applied to an existing series.
MixingResult mixing_time_from_series(const DeviationSeries& series,
                                     double epsilon, const WalkParams& params);

// Deviation and envelope totals over an explicit grid (strictly increasing,
// non-negative).
DeviationSeries deviation_series(const WalkParams& params,
                                 std::span<const double> t_grid, Source source,
                                 double oracle_step = 0.01);

struct SweepRow {
  double gamma = 0.0;
  MixingResult result;
  double bound = 0.0;        // (N/gamma) ln(4/eps) for this gamma
  bool perturbative = true;  // gamma * N < 1
};

// One mixing-time search per gamma (positive, ascending). Long horizons
// coarsen the scan grid so a row never exceeds kMaxSweepSamples samples; the
// oracle source stays valid outside the perturbative regime and is the tool
// for probing the strong-measurement (Zeno) side.
std::vector<SweepRow> gamma_sweep(int n_nodes, double epsilon,
                                  std::span<const double> gamma_values,
                                  Source source,
                                  const MixingOptions& options = {});

inline constexpr size_t kMaxSweepSamples = 20000;

}  // namespace ctqw
