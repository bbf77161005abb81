#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Shared domain types for the decoherent continuous-time quantum walk on the
// cycle C_N. All types are immutable value objects after construction and
// safe to share between threads. Node and mode indices are integers in
// [0, N-1]; node indices accepted at the API boundary may be any integer and
// are reduced mod N.

namespace ctqw {

// ---------------------------------------------------------------------------
// Error taxonomy
// ---------------------------------------------------------------------------

// Malformed inputs: bad shapes, out-of-range indices, non-finite values.
struct StructuralError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Valid structure but value outside the operation's domain (t < 0, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Request exceeds a configured resource cap (dense N^2 x N^2 storage).
struct CapacityError : std::length_error {
  using std::length_error::length_error;
};

// An internal identity that should hold analytically failed numerically.
// The CLI maps this to exit code 2.
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The integrator produced a state that fails density-matrix validation.
struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A zero-set mode was passed to an operation that excludes them.
struct ExcludedModeError : StructuralError {
  using StructuralError::StructuralError;
};

// No finite answer exists (mixing-time bound at gamma = 0).
struct UnboundedError : DomainError {
  using DomainError::DomainError;
};

// ---------------------------------------------------------------------------
// Tolerances
// ---------------------------------------------------------------------------

// Named numeric tolerances used by validation and internal-consistency
// checks. Defaults are the library's contract; the CLI can override them
// from a JSON profile (keys equal the field names).
struct Tolerances {
  double hermiticity = 1e-10;          // |rho_ab - conj(rho_ba)|
  double unit_trace = 1e-10;           // |tr(rho) - 1|
  double diag_range = 1e-10;           // diagonal within [-tol, 1 + tol]
  double cauchy_schwarz = 1e-9;        // |rho_ab|^2 <= rho_aa rho_bb + tol
  double prob_negativity = 1e-12;      // P_j >= -tol
  double prob_sum = 1e-10;             // |sum P_j - 1|
  double init_sum = 1e-12;             // |sum C_j - 1|
  double imag_residue_scale = 1e-10;   // x N^2, on the raw mode sum
  double s_kernel_imag = 1e-12;        // residual imaginary part of S(j,t)
  double transform_round_trip = 1e-14; // rho -> S -> rho identity
  double gamma0_exactness = 1e-6;      // closed form vs oracle at gamma = 0
  double artifact_floor = 1e-6;        // perturbative negativity floor
};

// Process-wide tolerance profile. Mutate once at startup (CLI profile
// loading); treated as read-only afterwards.
Tolerances& global_tolerances();

// Reduce any integer node index to its representative in [0, n).
int mod_index(long long j, int n);

// ---------------------------------------------------------------------------
// WalkParams
// ---------------------------------------------------------------------------

// Cycle size N and decoherence rate Gamma. Time is dimensionless: the
// hopping prefactor 1/4 is baked into the dynamics and hbar = 1, so no unit
// conversions appear anywhere downstream.
class WalkParams {
 public:
  WalkParams(int n_nodes, double gamma);

  int n_nodes() const { return n_nodes_; }
  double gamma() const { return gamma_; }

  // True iff gamma * N < 1, the regime where the closed form is controlled.
  bool perturbative() const { return gamma_ * n_nodes_ < 1.0; }

 private:
  int n_nodes_;
  double gamma_;
};

// ---------------------------------------------------------------------------
// ProbabilityDistribution
// ---------------------------------------------------------------------------

// Length-N real vector P_j with sum 1. The negativity floor is
// construction-site dependent: exact sources use prob_negativity, while
// perturbative closed-form output tolerates artifacts down to
// -artifact_floor.
class ProbabilityDistribution {
 public:
  explicit ProbabilityDistribution(std::vector<double> probs,
                                   double negativity_floor,
                                   double sum_tolerance);
  explicit ProbabilityDistribution(std::vector<double> probs);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int j) const { return probs_[static_cast<size_t>(j)]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// ---------------------------------------------------------------------------
// InitialDistribution
// ---------------------------------------------------------------------------

// Classical initial occupation weights C_j: non-negative, summing to 1.
class InitialDistribution {
 public:
  explicit InitialDistribution(std::vector<double> weights);

  // Point mass at node j (reduced mod n).
  static InitialDistribution delta(int n_nodes, long long j);

  int size() const { return static_cast<int>(weights_.size()); }
  double operator[](int j) const { return weights_[static_cast<size_t>(j)]; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// ---------------------------------------------------------------------------
// DensityMatrix
// ---------------------------------------------------------------------------

// N x N complex reduced density matrix rho_ab. Construction checks shape
// and finiteness only; the physics invariants (Hermiticity, unit trace,
// positivity proxy) live in validate_density_matrix, which returns a report
// of violations with magnitudes.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& mat() const { return entries_; }

  std::complex<double> trace() const { return entries_.trace(); }

  // tr(rho^2), real part. Equals 1 for pure states, 1/N for maximally mixed.
  double purity() const;

  // max_ab |rho_ab - conj(rho_ba)|.
  double hermiticity_deviation() const;

  // Diagonal as a ProbabilityDistribution (real parts; floor = diag_range).
  ProbabilityDistribution diagonal_distribution(
      const Tolerances& tol = global_tolerances()) const;

 private:
  Eigen::MatrixXcd entries_;
};

// One violated invariant with its measured magnitude.
struct ValidationIssue {
  std::string invariant;
  double magnitude = 0.0;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

// Check all DensityMatrix invariants at the given tolerances. Empty report
// iff the state is a valid density matrix.
ValidationReport validate_density_matrix(
    const DensityMatrix& rho, const Tolerances& tol = global_tolerances());

// ---------------------------------------------------------------------------
// SpectralMode
// ---------------------------------------------------------------------------

enum class DegeneracyClass {
  kZeroSet,   // m = n = 0 or m + n = N; eigenvalue 0, excluded by the
              // localized initial condition
  kDiagonal,  // m = n != 0
  kSwapPair,  // m != n, m + n != N
};

std::string to_string(DegeneracyClass c);

// A mode pair (m, n) with its unperturbed eigenvalue (purely imaginary by
// construction), degeneracy class, and first-order decay rate. Zero-set
// modes carry decay_rate 0; the class marks them as excluded.
struct SpectralMode {
  int m = 0;
  int n = 0;
  std::complex<double> eigenvalue0;
  double decay_rate = 0.0;
  DegeneracyClass degeneracy_class = DegeneracyClass::kZeroSet;
};

// ---------------------------------------------------------------------------
// DeviationSeries
// ---------------------------------------------------------------------------

// Sampled mixing data: time, sum_j |P_j(t) - 1/N|, and the analytic
// majorizing envelope total (N x per-node bound).
class DeviationSeries {
 public:
  struct Sample {
    double t = 0.0;
    double deviation = 0.0;
    double majorizer_total = 0.0;
  };

  explicit DeviationSeries(std::vector<Sample> samples);

  const std::vector<Sample>& samples() const { return samples_; }
  size_t size() const { return samples_.size(); }
  const Sample& operator[](size_t i) const { return samples_[i]; }

 private:
  std::vector<Sample> samples_;
};

}  // namespace ctqw
