#include "ctqw/types.hpp"

#include <cmath>
#include <sstream>

namespace ctqw {

Tolerances& global_tolerances() {
  static Tolerances tol;
  return tol;
}

int mod_index(long long j, int n) {
  if (n <= 0) throw StructuralError("mod_index: n must be positive");
  long long r = j % n;
  if (r < 0) r += n;
  return static_cast<int>(r);
}

// ---------------------------------------------------------------------------
// WalkParams
// ---------------------------------------------------------------------------

WalkParams::WalkParams(int n_nodes, double gamma)
    : n_nodes_(n_nodes), gamma_(gamma) {
  if (n_nodes < 3) {
    throw StructuralError("WalkParams: n_nodes must be >= 3, got " +
                          std::to_string(n_nodes));
  }
  if (!std::isfinite(gamma)) {
    throw DomainError("WalkParams: gamma must be finite");
  }
  if (gamma < 0.0) {
    throw DomainError("WalkParams: gamma must be >= 0, got " +
                      std::to_string(gamma));
  }
}

// ---------------------------------------------------------------------------
// ProbabilityDistribution
// ---------------------------------------------------------------------------

ProbabilityDistribution::ProbabilityDistribution(std::vector<double> probs,
                                                 double negativity_floor,
                                                 double sum_tolerance)
    : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw StructuralError("ProbabilityDistribution: empty vector");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p)) {
      throw StructuralError("ProbabilityDistribution: non-finite entry");
    }
    if (p < -negativity_floor) {
      throw StructuralError(
          "ProbabilityDistribution: entry " + std::to_string(p) +
          " below negativity floor -" + std::to_string(negativity_floor));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > sum_tolerance) {
    throw StructuralError("ProbabilityDistribution: sum deviates from 1 by " +
                          std::to_string(sum - 1.0));
  }
}

ProbabilityDistribution::ProbabilityDistribution(std::vector<double> probs)
    : ProbabilityDistribution(std::move(probs),
                              global_tolerances().prob_negativity,
                              global_tolerances().prob_sum) {}

// ---------------------------------------------------------------------------
// InitialDistribution
// ---------------------------------------------------------------------------

InitialDistribution::InitialDistribution(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw StructuralError("InitialDistribution: empty vector");
  }
  double sum = 0.0;
  for (double c : weights_) {
    if (!std::isfinite(c)) {
      throw StructuralError("InitialDistribution: non-finite entry");
    }
    if (c < 0.0) {
      throw StructuralError("InitialDistribution: negative weight " +
                            std::to_string(c));
    }
    sum += c;
  }
  if (std::abs(sum - 1.0) > global_tolerances().init_sum) {
    throw StructuralError("InitialDistribution: sum deviates from 1 by " +
                          std::to_string(sum - 1.0));
  }
}

InitialDistribution InitialDistribution::delta(int n_nodes, long long j) {
  if (n_nodes < 3) {
    throw StructuralError("InitialDistribution::delta: n_nodes must be >= 3");
  }
  std::vector<double> w(static_cast<size_t>(n_nodes), 0.0);
  w[static_cast<size_t>(mod_index(j, n_nodes))] = 1.0;
  return InitialDistribution(std::move(w));
}

// ---------------------------------------------------------------------------
// DensityMatrix
// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries)
    : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw StructuralError("DensityMatrix: entries must be square");
  }
  if (!entries_.allFinite()) {
    throw StructuralError("DensityMatrix: non-finite entry");
  }
}

double DensityMatrix::purity() const {
  // tr(rho^2) = sum_ab rho_ab rho_ba; real for Hermitian rho.
  return (entries_ * entries_).trace().real();
}

double DensityMatrix::hermiticity_deviation() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

ProbabilityDistribution DensityMatrix::diagonal_distribution(
    const Tolerances& tol) const {
  std::vector<double> p(static_cast<size_t>(dim()));
  for (int j = 0; j < dim(); ++j) {
    p[static_cast<size_t>(j)] = entries_(j, j).real();
  }
  return ProbabilityDistribution(std::move(p), tol.diag_range, tol.prob_sum);
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << issues[i].invariant << " (magnitude " << issues[i].magnitude << ")";
  }
  return os.str();
}

ValidationReport validate_density_matrix(const DensityMatrix& rho,
                                         const Tolerances& tol) {
  ValidationReport report;
  const Eigen::MatrixXcd& m = rho.mat();
  const int n = rho.dim();

  double herm = rho.hermiticity_deviation();
  if (herm > tol.hermiticity) {
    report.issues.push_back({"hermiticity", herm});
  }

  double trace_dev = std::abs(m.trace() - std::complex<double>(1.0, 0.0));
  if (trace_dev > tol.unit_trace) {
    report.issues.push_back({"unit_trace", trace_dev});
  }

  double diag_excess = 0.0;
  double diag_imag = 0.0;
  for (int a = 0; a < n; ++a) {
    diag_imag = std::max(diag_imag, std::abs(m(a, a).imag()));
    double d = m(a, a).real();
    diag_excess = std::max(diag_excess, -d);
    diag_excess = std::max(diag_excess, d - 1.0);
  }
  if (diag_imag > tol.hermiticity) {
    report.issues.push_back({"diagonal_real", diag_imag});
  }
  if (diag_excess > tol.diag_range) {
    report.issues.push_back({"diagonal_range", diag_excess});
  }

  // Positivity proxy: |rho_ab|^2 <= rho_aa rho_bb for positive semidefinite
  // matrices (Cauchy-Schwarz on the induced inner product).
  double cs_excess = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double lhs = std::norm(m(a, b));
      double rhs = m(a, a).real() * m(b, b).real();
      cs_excess = std::max(cs_excess, lhs - rhs);
    }
  }
  if (cs_excess > tol.cauchy_schwarz) {
    report.issues.push_back({"cauchy_schwarz", cs_excess});
  }

  return report;
}

// ---------------------------------------------------------------------------
// SpectralMode / DeviationSeries
// ---------------------------------------------------------------------------

std::string to_string(DegeneracyClass c) {
  switch (c) {
    case DegeneracyClass::kZeroSet:
      return "zero_set";
    case DegeneracyClass::kDiagonal:
      return "diagonal";
    case DegeneracyClass::kSwapPair:
      return "swap_pair";
  }
  throw StructuralError("to_string: invalid DegeneracyClass");
}

DeviationSeries::DeviationSeries(std::vector<Sample> samples)
    : samples_(std::move(samples)) {
  for (size_t i = 0; i < samples_.size(); ++i) {
    const Sample& s = samples_[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.deviation) ||
        !std::isfinite(s.majorizer_total)) {
      throw StructuralError("DeviationSeries: non-finite sample");
    }
    if (s.deviation < 0.0 || s.majorizer_total < 0.0) {
      throw StructuralError("DeviationSeries: negative deviation or bound");
    }
    if (i > 0 && !(s.t > samples_[i - 1].t)) {
      throw StructuralError("DeviationSeries: times must strictly increase");
    }
  }
}

}  // namespace ctqw
