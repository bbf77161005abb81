#include "ctqw/master_oracle.hpp"

#include <cmath>

#include "ctqw/closed_form.hpp"

namespace ctqw {

namespace {

void rhs_into(const Eigen::MatrixXcd& rho, double gamma,
              Eigen::MatrixXcd& out) {
  const int n = static_cast<int>(rho.rows());
  for (int b = 0; b < n; ++b) {
    const int bp = (b + 1) % n;
    const int bm = (b + n - 1) % n;
    for (int a = 0; a < n; ++a) {
      const int ap = (a + 1) % n;
      const int am = (a + n - 1) % n;
      const std::complex<double> s =
          rho(a, bp) + rho(a, bm) - rho(ap, b) - rho(am, b);
      // (i/4) * s
      std::complex<double> d(-0.25 * s.imag(), 0.25 * s.real());
      if (a != b) d -= gamma * rho(a, b);
      out(a, b) = d;
    }
  }
}

// Work buffers reused across every step of a trajectory.
class Rk4Integrator {
 public:
  Rk4Integrator(int n, double gamma)
      : gamma_(gamma),
        k1_(n, n),
        k2_(n, n),
        k3_(n, n),
        k4_(n, n),
        stage_(n, n) {}

  void step(Eigen::MatrixXcd& rho, double h) {
    rhs_into(rho, gamma_, k1_);
    stage_ = rho + (0.5 * h) * k1_;
    rhs_into(stage_, gamma_, k2_);
    stage_ = rho + (0.5 * h) * k2_;
    rhs_into(stage_, gamma_, k3_);
    stage_ = rho + h * k3_;
    rhs_into(stage_, gamma_, k4_);
    rho += (h / 6.0) * k1_ + (h / 3.0) * k2_ + (h / 3.0) * k3_ +
           (h / 6.0) * k4_;
  }

  // Advance by dt using full steps of max_step plus one shortened step to
  // land exactly on the target.
  void advance(Eigen::MatrixXcd& rho, double dt, double max_step) {
    if (dt <= 0.0) return;
    const auto full = static_cast<long long>(std::floor(dt / max_step + 1e-9));
    for (long long i = 0; i < full; ++i) step(rho, max_step);
    const double rest = dt - static_cast<double>(full) * max_step;
    if (rest > max_step * 1e-12) step(rho, rest);
  }

 private:
  double gamma_;
  Eigen::MatrixXcd k1_, k2_, k3_, k4_, stage_;
};

void check_step(double step) {
  if (!std::isfinite(step) || step <= 0.0) {
    throw DomainError("evolve: step must be positive");
  }
}

}  // namespace

DensityMatrix initial_state(int n_nodes) {
  if (n_nodes < 3) throw StructuralError("initial_state: n_nodes must be >= 3");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n_nodes, n_nodes);
  rho(0, 0) = 1.0;
  return DensityMatrix(std::move(rho));
}

Eigen::MatrixXcd master_rhs(const Eigen::MatrixXcd& rho,
                            const WalkParams& params) {
  if (rho.rows() != params.n_nodes() || rho.cols() != params.n_nodes()) {
    throw StructuralError("master_rhs: state dimension mismatch");
  }
  Eigen::MatrixXcd out(rho.rows(), rho.cols());
  rhs_into(rho, params.gamma(), out);
  return out;
}

Eigen::MatrixXcd master_rhs(const DensityMatrix& rho,
                            const WalkParams& params) {
  return master_rhs(rho.mat(), params);
}

DensityMatrix evolve(const DensityMatrix& rho0, double t_final,
                     const WalkParams& params, double step) {
  check_step(step);
  if (!std::isfinite(t_final) || t_final < 0.0) {
    throw DomainError("evolve: t_final must be >= 0");
  }
  if (rho0.dim() != params.n_nodes()) {
    throw StructuralError("evolve: state dimension mismatch");
  }
  Eigen::MatrixXcd rho = rho0.mat();
  Rk4Integrator integrator(params.n_nodes(), params.gamma());
  integrator.advance(rho, t_final, step);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  DensityMatrix result(std::move(rho));
  const ValidationReport report = validate_density_matrix(result);
  if (!report.ok()) {
    throw IntegrationError("evolve: integration diverged: " +
                           report.to_string());
  }
  return result;
}

double estimate_error(const DensityMatrix& rho0, double t_final,
                      const WalkParams& params, double step) {
  const DensityMatrix coarse = evolve(rho0, t_final, params, step);
  const DensityMatrix fine = evolve(rho0, t_final, params, step / 2.0);
  return (coarse.mat() - fine.mat()).cwiseAbs().maxCoeff() / 15.0;
}

Eigen::MatrixXcd s_transform(const Eigen::MatrixXcd& rho) {
  const int n = static_cast<int>(rho.rows());
  Eigen::MatrixXcd s(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      // S_ab = i^{-(a-b)} rho_ab; i^k cycles with period 4.
      const int k = ((b - a) % 4 + 4) % 4;
      const std::complex<double> v = rho(a, b);
      switch (k) {
        case 0: s(a, b) = v; break;
        case 1: s(a, b) = std::complex<double>(-v.imag(), v.real()); break;
        case 2: s(a, b) = -v; break;
        default: s(a, b) = std::complex<double>(v.imag(), -v.real()); break;
      }
    }
  }
  return s;
}

Eigen::MatrixXcd inverse_s_transform(const Eigen::MatrixXcd& s) {
  const int n = static_cast<int>(s.rows());
  Eigen::MatrixXcd rho(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const int k = ((a - b) % 4 + 4) % 4;
      const std::complex<double> v = s(a, b);
      switch (k) {
        case 0: rho(a, b) = v; break;
        case 1: rho(a, b) = std::complex<double>(-v.imag(), v.real()); break;
        case 2: rho(a, b) = -v; break;
        default: rho(a, b) = std::complex<double>(v.imag(), -v.real()); break;
      }
    }
  }
  return rho;
}

void sample_trajectory(
    const DensityMatrix& rho0, std::span<const double> t_grid,
    const WalkParams& params, double step,
    const std::function<void(double, const Eigen::MatrixXcd&)>& observer) {
  check_step(step);
  if (rho0.dim() != params.n_nodes()) {
    throw StructuralError("sample_trajectory: state dimension mismatch");
  }
  double prev = 0.0;
  for (size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    if (!std::isfinite(t) || t < 0.0 || (i > 0 && t <= prev)) {
      throw StructuralError(
          "sample_trajectory: grid must be non-negative and strictly "
          "increasing");
    }
    prev = t;
  }
  Eigen::MatrixXcd rho = rho0.mat();
  Rk4Integrator integrator(params.n_nodes(), params.gamma());
  double now = 0.0;
  for (double t : t_grid) {
    integrator.advance(rho, t - now, step);
    now = t;
    observer(t, rho);
  }
}

ComparisonReport compare_closed_form(const WalkParams& params,
                                     std::span<const double> t_grid,
                                     double step) {
  ComparisonReport report;
  report.n_nodes = params.n_nodes();
  report.gamma = params.gamma();
  report.n_mod_4 = params.n_nodes() % 4;
  report.wrap_consistent = report.n_mod_4 == 0;
  report.perturbative = params.perturbative();
  report.gamma_zero = params.gamma() == 0.0;
  report.exactness_tol = global_tolerances().gamma0_exactness;

  const ClosedFormEvaluator evaluator(params);
  const int n = params.n_nodes();
  report.rows.reserve(t_grid.size());
  sample_trajectory(
      initial_state(n), t_grid, params, step,
      [&](double t, const Eigen::MatrixXcd& rho) {
        const ProbabilityDistribution closed = evaluator.distribution_at(t);
        ComparisonRow row;
        row.t = t;
        for (int j = 0; j < n; ++j) {
          const double diff = std::abs(rho(j, j).real() - closed[j]);
          row.l1 += diff;
          row.linf = std::max(row.linf, diff);
        }
        report.max_l1 = std::max(report.max_l1, row.l1);
        report.max_linf = std::max(report.max_linf, row.linf);
        report.rows.push_back(row);
      });

  if (report.gamma_zero) {
    report.exactness_pass = report.max_linf <= report.exactness_tol;
  }
  return report;
}

}  // namespace ctqw
