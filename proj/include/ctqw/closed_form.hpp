#pragma once

#include <complex>
#include <vector>

#include "ctqw/types.hpp"

// Analytic results for the decohered cycle walk: the node-occupation
// probability P_j(t), the oscillating kernel S(j, t), the factored form of
// |P_j(t) - 1/N|, cyclic superposition for classical initial distributions,
// and the device-level formula for the decoherence rate.

namespace ctqw {

// S(j, t) = (1/N) sum_n exp(i t sin(2 pi n/N) + 2 pi i n j / N).
// Terms n and N-n are complex conjugates, so the sum is real; the
// implementation pairs them explicitly and the imaginary residue vanishes
// identically. |S| <= 1 always; exceeding 1 + s_kernel_imag is a
// consistency error. j may be any integer and is reduced mod N.
double s_kernel(long long j, double t, int n_nodes,
                const Tolerances& tol = global_tolerances());

// Decoherence rate from the point-contact device parameters:
//   Gamma = delta_omega^2 (f_right - f_left)^2 dos_source dos_drain.
// Densities of states must be non-negative.
double gamma_from_device(double delta_omega, double f_left, double f_right,
                         double dos_source, double dos_drain);

// Evaluator for the walker that starts localized at node 0. Precomputes the
// mode table: every (m, n) outside the zero set (exactly N^2 - N modes),
// each with its phase frequency omega = sin(pi (m+n)/N) cos(pi (m-n)/N),
// first-order decay rate, and spatial frequency q = (m+n) mod N.
//
// P_j(t) = 1/N + (1/N^2) Re sum_modes e^{decay t} e^{i (omega t + 2 pi q j / N)}.
//
// The mode sum is real by conjugate pairing; evaluation asserts the residual
// imaginary part stays below imag_residue_scale * N^2.
class ClosedFormEvaluator {
 public:
  explicit ClosedFormEvaluator(WalkParams params);

  const WalkParams& params() const { return params_; }
  size_t mode_count() const { return modes_.size(); }  // N^2 - N

  // P_j(t) for one node; j is reduced mod N, t must be >= 0.
  double probability_at(long long j, double t) const;

  // All N node probabilities at once (grouped by spatial frequency, so the
  // whole vector costs the same O(N^2) as a single probability_at call).
  ProbabilityDistribution distribution_at(double t) const;

  // Distribution for a classical initial mixture: cyclic convolution
  // P^C_j(t) = sum_k C_k P_{(j-k) mod N}(t).
  ProbabilityDistribution superpose(const InitialDistribution& init,
                                    double t) const;

  // |P_j(t) - 1/N| in factored form:
  //   e^{-Gamma (N-2) t / N} | S^2(j, t/2) - 1/N
  //     + (e^{-Gamma t/N} - 1)/N * (S(2j, t) - (2 - N mod 2)/N) |
  // Algebraically identical to |probability_at(j, t) - 1/N| for both
  // parities of N.
  double deviation_factored(long long j, double t) const;

  struct Mode {
    double omega = 0.0;   // phase frequency, Im lambda0
    double decay = 0.0;   // first-order decay rate (<= 0)
    int q = 0;            // spatial frequency (m+n) mod N, in [1, N-1]
  };
  const std::vector<Mode>& modes() const { return modes_; }

 private:
  WalkParams params_;
  std::vector<Mode> modes_;
};

}  // namespace ctqw
