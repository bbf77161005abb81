#include "ctqw/closed_form.hpp"

#include <cmath>
#include <numbers>

#include "ctqw/spectral.hpp"

namespace ctqw {

namespace {
constexpr double kPi = std::numbers::pi;

void require_time(double t) {
  if (!std::isfinite(t)) throw DomainError("closed-form: t must be finite");
  if (t < 0.0) {
    throw DomainError("closed-form: t must be >= 0, got " + std::to_string(t));
  }
}
}  // namespace

double s_kernel(long long j, double t, int n_nodes, const Tolerances& tol) {
  if (n_nodes < 3) throw StructuralError("s_kernel: n_nodes must be >= 3");
  if (!std::isfinite(t)) throw DomainError("s_kernel: t must be finite");
  const int n = n_nodes;
  const int jm = mod_index(j, n);

  // Pair n with N-n: the paired terms are exact complex conjugates
  // (exp(2 pi i (N-k) j / N) = exp(-2 pi i k j / N) for integer j), so each
  // pair contributes 2 cos(arg) and the total is exactly real.
  double acc = 1.0;  // k = 0 term
  for (int k = 1; 2 * k < n; ++k) {
    const double arg = t * std::sin(2.0 * kPi * k / n) +
                       2.0 * kPi * ((static_cast<long long>(k) * jm) % n) / n;
    acc += 2.0 * std::cos(arg);
  }
  if (n % 2 == 0) {
    // k = N/2: sin(pi) = 0, phase pi * j -> (-1)^j.
    acc += (jm % 2 == 0) ? 1.0 : -1.0;
  }
  const double result = acc / n;
  // Imaginary residue is identically zero by the pairing above; the bound on
  // the magnitude still guards transcription errors.
  if (std::abs(result) > 1.0 + tol.s_kernel_imag) {
    throw ConsistencyError("s_kernel: |S| exceeds 1 by " +
                           std::to_string(std::abs(result) - 1.0));
  }
  return result;
}

double gamma_from_device(double delta_omega, double f_left, double f_right,
                         double dos_source, double dos_drain) {
  for (double v : {delta_omega, f_left, f_right, dos_source, dos_drain}) {
    if (!std::isfinite(v)) {
      throw DomainError("gamma_from_device: non-finite input");
    }
  }
  if (dos_source < 0.0 || dos_drain < 0.0) {
    throw DomainError("gamma_from_device: density of states must be >= 0");
  }
  const double bias = f_right - f_left;
  return delta_omega * delta_omega * bias * bias * dos_source * dos_drain;
}

ClosedFormEvaluator::ClosedFormEvaluator(WalkParams params)
    : params_(params) {
  const int n = params_.n_nodes();
  modes_.reserve(static_cast<size_t>(n) * n - n);
  for (int m = 0; m < n; ++m) {
    for (int nu = 0; nu < n; ++nu) {
      if (classify_mode(m, nu, params_) == DegeneracyClass::kZeroSet) continue;
      Mode mode;
      mode.omega = unperturbed_eigenvalue(m, nu, params_).imag();
      mode.decay = decay_rate(m, nu, params_);
      mode.q = (m + nu) % n;
      modes_.push_back(mode);
    }
  }
  if (modes_.size() != static_cast<size_t>(n) * n - n) {
    throw ConsistencyError("ClosedFormEvaluator: mode table has " +
                           std::to_string(modes_.size()) + " entries, want " +
                           std::to_string(static_cast<size_t>(n) * n - n));
  }
}

double ClosedFormEvaluator::probability_at(long long j, double t) const {
  require_time(t);
  const int n = params_.n_nodes();
  const int jm = mod_index(j, n);
  std::complex<double> sum(0.0, 0.0);
  for (const Mode& mode : modes_) {
    const double arg =
        t * mode.omega +
        2.0 * kPi * ((static_cast<long long>(mode.q) * jm) % n) / n;
    sum += std::exp(mode.decay * t) * std::polar(1.0, arg);
  }
  const double residue_cap =
      global_tolerances().imag_residue_scale * n * n;
  if (std::abs(sum.imag()) > residue_cap) {
    throw ConsistencyError("probability_at: imaginary residue " +
                           std::to_string(sum.imag()) + " exceeds " +
                           std::to_string(residue_cap));
  }
  return 1.0 / n + sum.real() / (static_cast<double>(n) * n);
}

ProbabilityDistribution ClosedFormEvaluator::distribution_at(double t) const {
  require_time(t);
  const int n = params_.n_nodes();
  const Tolerances& tol = global_tolerances();

  // Group the time-dependent weights by spatial frequency q, then expand the
  // q-sum per node: O(N^2) for the whole distribution.
  std::vector<std::complex<double>> by_q(static_cast<size_t>(n), {0.0, 0.0});
  for (const Mode& mode : modes_) {
    by_q[static_cast<size_t>(mode.q)] +=
        std::exp(mode.decay * t) * std::polar(1.0, t * mode.omega);
  }

  const double residue_cap = tol.imag_residue_scale * n * n;
  std::vector<double> probs(static_cast<size_t>(n));
  double worst_negative = 0.0;
  for (int j = 0; j < n; ++j) {
    std::complex<double> sum(0.0, 0.0);
    for (int q = 1; q < n; ++q) {
      const double arg =
          2.0 * kPi * ((static_cast<long long>(q) * j) % n) / n;
      sum += by_q[static_cast<size_t>(q)] * std::polar(1.0, arg);
    }
    if (std::abs(sum.imag()) > residue_cap) {
      throw ConsistencyError("distribution_at: imaginary residue " +
                             std::to_string(sum.imag()) + " exceeds " +
                             std::to_string(residue_cap));
    }
    const double p = 1.0 / n + sum.real() / (static_cast<double>(n) * n);
    probs[static_cast<size_t>(j)] = p;
    worst_negative = std::min(worst_negative, p);
  }

  if (worst_negative < -tol.artifact_floor) {
    throw ConsistencyError(
        "distribution_at: perturbation artifact " +
        std::to_string(worst_negative) + " below floor -" +
        std::to_string(tol.artifact_floor));
  }
  double sum_p = 0.0;
  for (double p : probs) sum_p += p;
  if (std::abs(sum_p - 1.0) > tol.prob_sum) {
    throw ConsistencyError("distribution_at: normalization off by " +
                           std::to_string(sum_p - 1.0));
  }
  return ProbabilityDistribution(std::move(probs), tol.artifact_floor,
                                 tol.prob_sum);
}

ProbabilityDistribution ClosedFormEvaluator::superpose(
    const InitialDistribution& init, double t) const {
  const int n = params_.n_nodes();
  if (init.size() != n) {
    throw StructuralError("superpose: initial distribution has " +
                          std::to_string(init.size()) + " weights, want " +
                          std::to_string(n));
  }
  const ProbabilityDistribution base = distribution_at(t);
  std::vector<double> probs(static_cast<size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      acc += init[k] * base[mod_index(static_cast<long long>(j) - k, n)];
    }
    probs[static_cast<size_t>(j)] = acc;
  }
  const Tolerances& tol = global_tolerances();
  return ProbabilityDistribution(std::move(probs), tol.artifact_floor,
                                 tol.prob_sum);
}

double ClosedFormEvaluator::deviation_factored(long long j, double t) const {
  require_time(t);
  const int n = params_.n_nodes();
  const double gamma = params_.gamma();
  const int jm = mod_index(j, n);

  const double envelope = std::exp(-gamma * (n - 2.0) * t / n);
  const double u = std::exp(-gamma * t / n);
  const double s_half = s_kernel(jm, t / 2.0, n);
  const double s_double = s_kernel(2LL * jm, t, n);
  const double parity_term = (2.0 - n % 2) / n;
  const double inner =
      s_half * s_half - 1.0 / n + (u - 1.0) / n * (s_double - parity_term);
  return envelope * std::abs(inner);
}

}  // namespace ctqw
