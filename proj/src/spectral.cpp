#include "ctqw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ctqw {

namespace {

constexpr double kPi = std::numbers::pi;

void check_mode_index(int value, const char* name, const WalkParams& params) {
  if (value < 0 || value >= params.n_nodes()) {
    throw StructuralError(std::string("spectral: index ") + name + "=" +
                          std::to_string(value) + " outside [0, " +
                          std::to_string(params.n_nodes() - 1) + "]");
  }
}

// Greedy nearest-neighbor matching: for each prediction in order, consume
// the closest remaining dense eigenvalue.
struct GreedyMatcher {
  std::vector<std::complex<double>> pool;
  std::vector<bool> used;

  explicit GreedyMatcher(std::vector<std::complex<double>> values)
      : pool(std::move(values)), used(pool.size(), false) {}

  std::pair<std::complex<double>, double> take_nearest(
      std::complex<double> target) {
    double best = std::numeric_limits<double>::infinity();
    size_t best_i = pool.size();
    for (size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      double d = std::abs(pool[i] - target);
      if (d < best) {
        best = d;
        best_i = i;
      }
    }
    if (best_i == pool.size()) {
      throw StructuralError("verify_spectrum: eigenvalue pool exhausted");
    }
    used[best_i] = true;
    return {pool[best_i], best};
  }

  std::vector<std::complex<double>> leftovers() const {
    std::vector<std::complex<double>> rest;
    for (size_t i = 0; i < pool.size(); ++i) {
      if (!used[i]) rest.push_back(pool[i]);
    }
    return rest;
  }
};

}  // namespace

std::complex<double> unperturbed_eigenvalue(int m, int n,
                                            const WalkParams& params) {
  check_mode_index(m, "m", params);
  check_mode_index(n, "n", params);
  const double nn = params.n_nodes();
  const double value = std::sin(kPi * (m + n) / nn) * std::cos(kPi * (m - n) / nn);
  return {0.0, value};
}

std::complex<double> eigenvector_entry(int m, int n, int mu, int nu,
                                       const WalkParams& params) {
  check_mode_index(m, "m", params);
  check_mode_index(n, "n", params);
  check_mode_index(mu, "mu", params);
  check_mode_index(nu, "nu", params);
  const int nn = params.n_nodes();
  // Reduce the phase integer first: better conditioned than m*mu + n*nu
  // directly in the argument.
  const long long phase = (static_cast<long long>(m) * mu +
                           static_cast<long long>(n) * nu) % nn;
  const double arg = 2.0 * kPi * static_cast<double>(phase) / nn;
  return std::polar(1.0 / nn, arg);
}

DegeneracyClass classify_mode(int m, int n, const WalkParams& params) {
  check_mode_index(m, "m", params);
  check_mode_index(n, "n", params);
  if ((m == 0 && n == 0) || m + n == params.n_nodes()) {
    return DegeneracyClass::kZeroSet;
  }
  return m == n ? DegeneracyClass::kDiagonal : DegeneracyClass::kSwapPair;
}

double decay_rate(int m, int n, const WalkParams& params) {
  const DegeneracyClass cls = classify_mode(m, n, params);
  if (cls == DegeneracyClass::kZeroSet) {
    throw ExcludedModeError("decay_rate: (" + std::to_string(m) + ", " +
                            std::to_string(n) +
                            ") is an excluded zero-set mode");
  }
  const double nn = params.n_nodes();
  const double shift = (cls == DegeneracyClass::kDiagonal) ? (nn - 1.0) / nn
                                                           : (nn - 2.0) / nn;
  return -params.gamma() * shift;
}

SpectralMode make_spectral_mode(int m, int n, const WalkParams& params) {
  SpectralMode mode;
  mode.m = m;
  mode.n = n;
  mode.eigenvalue0 = unperturbed_eigenvalue(m, n, params);
  mode.degeneracy_class = classify_mode(m, n, params);
  mode.decay_rate = (mode.degeneracy_class == DegeneracyClass::kZeroSet)
                        ? 0.0
                        : decay_rate(m, n, params);
  return mode;
}

GeneratorMatrix::GeneratorMatrix(int n_nodes, Eigen::MatrixXd entries)
    : n_nodes_(n_nodes), entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() ||
      entries_.rows() != static_cast<long>(n_nodes) * n_nodes) {
    throw StructuralError("GeneratorMatrix: entries must be N^2 x N^2");
  }
}

GeneratorMatrix build_generator(const WalkParams& params, int cap) {
  const int n = params.n_nodes();
  if (n > cap) {
    throw CapacityError("build_generator: N=" + std::to_string(n) +
                        " exceeds dense cap " + std::to_string(cap));
  }
  const int dim = n * n;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
  const double gamma = params.gamma();
  for (int a = 0; a < n; ++a) {
    const int ap = (a + 1) % n;
    const int am = (a + n - 1) % n;
    for (int b = 0; b < n; ++b) {
      const int bp = (b + 1) % n;
      const int bm = (b + n - 1) % n;
      const int row = GeneratorMatrix::flat_index(a, b, n);
      // dS_ab/dt = (1/4)(S_{a,b+1} + S_{a+1,b} - S_{a,b-1} - S_{a-1,b})
      //            - Gamma (1 - delta_ab) S_ab
      g(row, GeneratorMatrix::flat_index(a, bp, n)) += 0.25;
      g(row, GeneratorMatrix::flat_index(ap, b, n)) += 0.25;
      g(row, GeneratorMatrix::flat_index(a, bm, n)) -= 0.25;
      g(row, GeneratorMatrix::flat_index(am, b, n)) -= 0.25;
      if (a != b) {
        g(row, row) -= gamma;
      }
    }
  }
  return GeneratorMatrix(n, std::move(g));
}

SpectrumReport verify_spectrum(const WalkParams& params, double tol, int cap) {
  SpectrumReport report;
  report.n_nodes = params.n_nodes();
  report.gamma = params.gamma();
  report.tol = tol;

  const int n = params.n_nodes();
  const GeneratorMatrix gen = build_generator(params, cap);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(gen.mat());
  if (solver.info() != Eigen::Success) {
    throw ConsistencyError("verify_spectrum: dense eigensolve failed");
  }
  std::vector<std::complex<double>> dense(solver.eigenvalues().data(),
                                          solver.eigenvalues().data() +
                                              solver.eigenvalues().size());
  GreedyMatcher matcher(std::move(dense));

  if (params.gamma() == 0.0) {
    report.multiset_checked = true;
    for (int m = 0; m < n; ++m) {
      for (int nu = 0; nu < n; ++nu) {
        ModeCheck check;
        check.m = m;
        check.n = nu;
        check.degeneracy_class = classify_mode(m, nu, params);
        check.predicted = unperturbed_eigenvalue(m, nu, params);
        auto [matched, dist] = matcher.take_nearest(check.predicted);
        check.matched = matched;
        check.distance = dist;
        check.real_part_error = std::abs(matched.real());
        report.max_multiset_distance =
            std::max(report.max_multiset_distance, dist);
        report.checks.push_back(check);
      }
    }
    report.multiset_pass = report.max_multiset_distance <= tol;
  } else if (params.perturbative()) {
    report.perturbative_checked = true;
    report.pass_threshold = 5.0 * params.gamma() * params.gamma() * n;
    auto record = [&](int m, int nu, double branch_used, double branch_sym,
                      double branch_anti) {
      ModeCheck check;
      check.m = m;
      check.n = nu;
      check.degeneracy_class = classify_mode(m, nu, params);
      check.branch_symmetric = branch_sym;
      check.branch_antisymmetric = branch_anti;
      check.predicted =
          unperturbed_eigenvalue(m, nu, params) + std::complex<double>(branch_used, 0.0);
      auto [matched, dist] = matcher.take_nearest(check.predicted);
      check.matched = matched;
      check.distance = dist;
      check.real_part_error = std::abs(matched.real() - branch_used);
      report.max_real_part_error =
          std::max(report.max_real_part_error, check.real_part_error);
      report.checks.push_back(check);
    };
    const double gamma = params.gamma();
    for (int m = 0; m < n; ++m) {
      for (int nu = m; nu < n; ++nu) {
        const DegeneracyClass cls = classify_mode(m, nu, params);
        if (cls == DegeneracyClass::kZeroSet) continue;
        if (cls == DegeneracyClass::kDiagonal) {
          const double rate = decay_rate(m, nu, params);
          record(m, nu, rate, rate, rate);
        } else {
          // Each swap pair splits into -Gamma (N-2)/N (symmetric, the branch
          // that reaches the diagonal dynamics) and -Gamma (antisymmetric).
          const double sym = decay_rate(m, nu, params);
          const double anti = -gamma;
          record(m, nu, sym, sym, anti);
          record(nu, m, anti, sym, anti);
        }
      }
    }
    report.perturbative_pass =
        report.max_real_part_error <= report.pass_threshold;
  }

  report.unmatched = matcher.leftovers();
  return report;
}

}  // namespace ctqw
