#include <biphoton/numerics.hpp>

#include <biphoton/constants.hpp>
#include <biphoton/hermite.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#if defined(BIPHOTON_HAVE_LAPACKE)
#if __has_include(<lapacke.h>)
#include <lapacke.h>
#else
extern "C" int LAPACKE_dsyevd(int matrix_layout, char jobz, char uplo, int n,
                              double* a, int lda, double* w);
#ifndef LAPACK_COL_MAJOR
#define LAPACK_COL_MAJOR 102
#endif
#endif
#endif

namespace biphoton {

namespace {

// Eigenvalues (and optionally eigenvectors) of a symmetric matrix, sorted by
// decreasing magnitude. The divide-and-conquer LAPACK path takes over for
// large problems when available; A is destroyed either way.
void sym_eig_by_magnitude(Eigen::MatrixXd& A, std::vector<double>& evals,
                          Eigen::MatrixXd* evecs) {
  const auto n = static_cast<std::size_t>(A.rows());
  Eigen::VectorXd w(n);
  Eigen::MatrixXd v;
#if defined(BIPHOTON_HAVE_LAPACKE)
  if (n >= 512) {
    const int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, evecs ? 'V' : 'N', 'U',
                       static_cast<int>(n), A.data(), static_cast<int>(n), w.data());
    if (info != 0) {
      throw std::runtime_error("symmetric eigendecomposition failed to converge");
    }
    if (evecs) v = A;
  } else
#endif
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        A, evecs ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("symmetric eigendecomposition failed to converge");
    }
    w = solver.eigenvalues();
    if (evecs) v = solver.eigenvectors();
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&w](std::size_t i, std::size_t j) {
    return std::abs(w[static_cast<long>(i)]) > std::abs(w[static_cast<long>(j)]);
  });
  evals.resize(n);
  if (evecs) evecs->resize(static_cast<long>(n), static_cast<long>(n));
  for (std::size_t k = 0; k < n; ++k) {
    evals[k] = w[static_cast<long>(order[k])];
    if (evecs) evecs->col(static_cast<long>(k)) = v.col(static_cast<long>(order[k]));
  }
}

Eigen::MatrixXd weighted_kernel(const KernelMatrix& m) {
  const auto n = m.grid.n();
  Eigen::VectorXd sqw(n);
  for (std::size_t i = 0; i < n; ++i) sqw[static_cast<long>(i)] = std::sqrt(m.grid.weight(i));
  return sqw.asDiagonal() * m.values * sqw.asDiagonal();
}

}  // namespace

SpectralGrid build_grid(double extent, std::size_t n_points) {
  if (!(extent > 0.0)) throw std::invalid_argument("grid extent must be positive");
  if (n_points < 16) throw std::invalid_argument("grid needs at least 16 points");
  SpectralGrid g;
  g.extent = extent;
  g.h = 2.0 * extent / static_cast<double>(n_points - 1);
  g.nu.resize(n_points);
  // Mirror the two halves so the grid is symmetric to the last bit.
  for (std::size_t i = 0; i < n_points; ++i) {
    g.nu[i] = -extent + g.h * static_cast<double>(i);
  }
  for (std::size_t i = 0; i < n_points / 2; ++i) {
    g.nu[n_points - 1 - i] = -g.nu[i];
  }
  if (n_points % 2 == 1) g.nu[n_points / 2] = 0.0;
  return g;
}

double dg_extent_heuristic(const GaussianPair& p) {
  if (!(p.a > 0.0) || !(p.b > 0.0)) {
    throw std::domain_error("Gaussian widths must be positive");
  }
  return std::max(4.0 * p.a, 2.0 * p.b);
}

double exact_extent_heuristic(const CrystalOptics& c, const PumpPulse& p) {
  const SpectralWidths w = short_pulse_widths(c, p);
  return std::max({3.0 * w.single, 12.0 / p.tau, 20.0 * c_light / (c.A * c.L)});
}

SpectralGrid dg_grid(const GaussianPair& p) {
  const SchmidtParams s = wf_to_schmidt(p);
  const double am = std::abs(s.mu);
  // Modes above the 1e-9 eigenvalue tail must fit on the grid.
  std::size_t n_need = 64;
  if (am > 0.02) {
    const double raw = std::ceil(std::log(1e-9) / std::log(am * am));
    n_need = static_cast<std::size_t>(std::clamp(raw, 64.0, 400.0));
  }
  const double reach = std::sqrt(2.0 * static_cast<double>(n_need));
  // Extent covers both the oscillator turning point of the last needed mode
  // and the wide Gaussian direction; spacing resolves the mode oscillation
  // and the narrow Gaussian direction with margin against aliasing.
  const double scaled_extent =
      std::max(reach + 8.0, 2.2 * std::sqrt(2.0 * (1.0 + am) / (1.0 - am)));
  const double scaled_step =
      std::min(0.8 * pi / reach, std::sqrt(2.0 * (1.0 - am) / (1.0 + am)) / 1.5);
  const auto n_points =
      static_cast<std::size_t>(std::ceil(2.0 * scaled_extent / scaled_step)) + 1;
  return build_grid(scaled_extent / s.alpha, std::max<std::size_t>(n_points, 16));
}

SpectralGrid exact_wf_grid(const CrystalOptics& c, const PumpPulse& p, double s_exp) {
  const double k_pred = schmidt_number_of_tau(c, p, s_exp);
  std::size_t n = 1024;
  while (static_cast<double>(n) < 3.2 * k_pred * 1.15 && n < 4096) n *= 2;
  const ModeScaling ms = generalized_modes(c, p, s_exp);
  // Balanced extent: equal resolution margins in position and frequency of
  // the dimensionless mode coordinate.
  double extent = std::sqrt(pi * static_cast<double>(n) / 2.0) * 0.98 / ms.alpha;
  extent = std::min(extent, 0.45 * c.omega0);  // keep inside the physical range
  return build_grid(extent, n);
}

KernelMatrix discretize(const KernelEvaluator& kernel, const SpectralGrid& grid) {
  const std::size_t n = grid.n();
  if (n < 16) throw std::invalid_argument("grid needs at least 16 points");
  KernelMatrix m;
  m.grid = grid;
  m.values.resize(static_cast<long>(n), static_cast<long>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = kernel(grid.nu[i], grid.nu[j]);
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "kernel evaluation not finite at nu1 = " << grid.nu[i]
            << ", nu2 = " << grid.nu[j];
        throw std::runtime_error(msg.str());
      }
      m.values(static_cast<long>(i), static_cast<long>(j)) = v;
    }
  }
  double norm2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = m.values(static_cast<long>(i), static_cast<long>(j));
      col += grid.weight(i) * v * v;
    }
    norm2 += grid.weight(j) * col;
  }
  if (!(norm2 > 0.0)) throw std::runtime_error("kernel vanishes on the whole grid");
  m.values /= std::sqrt(norm2);
  m.normalized = true;
  return m;
}

NumericalDecomposition schmidt_svd(const KernelMatrix& m, std::size_t n_keep) {
  if (!m.normalized) throw std::invalid_argument("kernel matrix must be normalized");
  const std::size_t n = m.grid.n();
  Eigen::MatrixXd w = weighted_kernel(m);
  std::vector<double> evals;
  Eigen::MatrixXd vecs;
  sym_eig_by_magnitude(w, evals, &vecs);

  NumericalDecomposition d;
  d.singular_values.resize(n);
  d.lambdas.resize(n);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    d.singular_values[k] = std::abs(evals[k]);
    total += evals[k] * evals[k];
  }
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    d.lambdas[k] = evals[k] * evals[k] / total;
    sum_sq += d.lambdas[k] * d.lambdas[k];
  }
  d.K_num = 1.0 / sum_sq;

  const std::size_t kept = (n_keep == 0) ? n : std::min(n_keep, n);
  d.modes.resize(static_cast<long>(n), static_cast<long>(kept));
  for (std::size_t k = 0; k < kept; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      d.modes(static_cast<long>(i), static_cast<long>(k)) =
          vecs(static_cast<long>(i), static_cast<long>(k)) / std::sqrt(m.grid.weight(i));
    }
  }
  double kept_mass = 0.0;
  for (std::size_t k = 0; k < kept; ++k) kept_mass += d.lambdas[k];
  d.residual = 1.0 - kept_mass;
  return d;
}

double purity_schmidt_number(const KernelMatrix& m) {
  if (!m.normalized) throw std::invalid_argument("kernel matrix must be normalized");
  const Eigen::MatrixXd w = weighted_kernel(m);
  const double f2 = w.squaredNorm();
  Eigen::MatrixXd g;
  g.noalias() = w * w.transpose();
  return f2 * f2 / g.squaredNorm();
}

Eigen::MatrixXd numerical_rdm(const KernelEvaluator& kernel, const SpectralGrid& grid) {
  const KernelMatrix m = discretize(kernel, grid);
  const std::size_t n = grid.n();
  Eigen::VectorXd w(n);
  for (std::size_t i = 0; i < n; ++i) w[static_cast<long>(i)] = grid.weight(i);
  Eigen::MatrixXd rho;
  rho.noalias() = m.values * w.asDiagonal() * m.values.transpose();
  return rho;
}

std::vector<double> rdm_eigenvalues(const Eigen::MatrixXd& rho, const SpectralGrid& grid) {
  const std::size_t n = grid.n();
  if (static_cast<std::size_t>(rho.rows()) != n ||
      static_cast<std::size_t>(rho.cols()) != n) {
    throw std::invalid_argument("density matrix size does not match the grid");
  }
  Eigen::VectorXd sqw(n);
  for (std::size_t i = 0; i < n; ++i) sqw[static_cast<long>(i)] = std::sqrt(grid.weight(i));
  Eigen::MatrixXd w = sqw.asDiagonal() * rho * sqw.asDiagonal();
  std::vector<double> evals;
  sym_eig_by_magnitude(w, evals, nullptr);
  return evals;
}

namespace {

// Root of the linear interpolant through (x0, y0), (x1, y1) at level y_half;
// the limit of bisecting that interpolant.
double crossing_on_segment(double x0, double y0, double x1, double y1, double y_half) {
  return x0 + (y_half - y0) / (y1 - y0) * (x1 - x0);
}

}  // namespace

double fwhm(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 3) {
    throw std::invalid_argument("curve needs matching x/y samples, at least 3");
  }
  const std::size_t peak = static_cast<std::size_t>(
      std::max_element(y.begin(), y.end()) - y.begin());
  const double ymax = y[peak];
  const double ymin = *std::min_element(y.begin(), y.end());
  if (!(ymax > ymin)) throw std::runtime_error("flat curve has no half maximum");
  if (peak == 0 || peak + 1 == n) {
    throw std::runtime_error("curve peak sits on the grid boundary");
  }
  const double half = 0.5 * ymax;

  double right = 0.0;
  bool found = false;
  for (std::size_t k = peak; k + 1 < n; ++k) {
    if (y[k] >= half && y[k + 1] < half) {
      right = crossing_on_segment(x[k], y[k], x[k + 1], y[k + 1], half);
      found = true;
      break;
    }
  }
  if (!found) throw std::runtime_error("no right half crossing inside the grid");
  double left = 0.0;
  found = false;
  for (std::size_t k = peak; k > 0; --k) {
    if (y[k] >= half && y[k - 1] < half) {
      left = crossing_on_segment(x[k], y[k], x[k - 1], y[k - 1], half);
      found = true;
      break;
    }
  }
  if (!found) throw std::runtime_error("no left half crossing inside the grid");
  return right - left;
}

double fwhm_continuous(const std::function<double(double)>& f, double extent) {
  if (!(extent > 0.0)) throw std::invalid_argument("extent must be positive");
  std::size_t n = 1025;
  std::vector<double> xs, ys;
  std::size_t peak = 0;
  while (true) {
    xs.resize(n);
    ys.resize(n);
    const double h = 2.0 * extent / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = -extent + h * static_cast<double>(i);
      ys[i] = f(xs[i]);
    }
    peak = static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());
    const double ymax = ys[peak];
    if (!(ymax > *std::min_element(ys.begin(), ys.end()))) {
      throw std::runtime_error("flat curve has no half maximum");
    }
    std::size_t above = 0;
    for (double v : ys) above += (v > 0.5 * ymax) ? 1 : 0;
    if (above >= 33 || n >= (std::size_t{1} << 21)) break;
    n = 2 * n - 1;
  }
  if (peak == 0 || peak + 1 == n) {
    throw std::runtime_error("curve peak sits on the grid boundary");
  }

  // Refine the peak by ternary search between the neighbors of the argmax.
  double lo = xs[peak - 1], hi = xs[peak + 1];
  for (int i = 0; i < 200; ++i) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) < f(m2)) lo = m1;
    else hi = m2;
  }
  const double ymax = std::max(f(0.5 * (lo + hi)), ys[peak]);
  const double half = 0.5 * ymax;

  const auto bisect = [&f, half](double a, double b) {
    // f(a) >= half > f(b); the presample step brackets a single crossing.
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (a + b);
      if (f(mid) >= half) a = mid;
      else b = mid;
    }
    return 0.5 * (a + b);
  };

  double right = 0.0;
  bool found = false;
  for (std::size_t k = peak; k + 1 < n; ++k) {
    if (ys[k] >= half && ys[k + 1] < half) {
      right = bisect(xs[k], xs[k + 1]);
      found = true;
      break;
    }
  }
  if (!found) throw std::runtime_error("no right half crossing inside the extent");
  double left = 0.0;
  found = false;
  for (std::size_t k = peak; k > 0; --k) {
    if (ys[k] >= half && ys[k - 1] < half) {
      left = bisect(xs[k], xs[k - 1]);
      found = true;
      break;
    }
  }
  if (!found) throw std::runtime_error("no left half crossing inside the extent");
  return right - left;
}

double r_parameter(const KernelEvaluator& kernel, const SpectralGrid& grid) {
  const double extent = grid.extent;

  // Trapezoid integral of kernel(x, .)^2 refined until stable to abs_tol
  // (absolute; relative for the first call that sets the scale).
  const auto single_at = [&kernel, extent](double x, double abs_tol) {
    std::size_t n = 513;
    double prev = 0.0;
    bool have_prev = false;
    while (true) {
      const double h = 2.0 * extent / static_cast<double>(n - 1);
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double y = -extent + h * static_cast<double>(i);
        const double v = kernel(x, y);
        const double wi = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        s += wi * v * v;
      }
      s *= h;
      const double tol = (abs_tol > 0.0) ? abs_tol : 1e-9 * std::abs(s);
      if (have_prev && std::abs(s - prev) <= tol) return s;
      if (n >= (std::size_t{1} << 20)) return s;
      prev = s;
      have_prev = true;
      n = 2 * n - 1;
    }
  };

  const double s_peak = single_at(0.0, 0.0);
  const double tol = 1e-7 * s_peak;
  const double w_single = fwhm_continuous(
      [&single_at, tol](double x) { return single_at(x, tol); }, extent);
  const double w_coinc = fwhm_continuous(
      [&kernel](double x) {
        const double v = kernel(x, 0.0);
        return v * v;
      },
      extent);
  return w_single / w_coinc;
}

std::vector<double> mode_overlap(const NumericalDecomposition& num,
                                 const SpectralGrid& grid, double alpha,
                                 std::size_t n_modes) {
  if (!(alpha > 0.0)) throw std::invalid_argument("mode scaling must be positive");
  if (n_modes > static_cast<std::size_t>(num.modes.cols())) {
    throw std::invalid_argument("more modes requested than kept in the decomposition");
  }
  const std::size_t n = grid.n();
  std::vector<double> fid(n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) {
    double dot = 0.0, an2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::sqrt(alpha) * hermite_phi(k, alpha * grid.nu[i]);
      const double w = grid.weight(i);
      dot += w * num.modes(static_cast<long>(i), static_cast<long>(k)) * a;
      an2 += w * a * a;
    }
    fid[k] = dot * dot / an2;
  }
  return fid;
}

void align_mode_signs(NumericalDecomposition& num, const SpectralGrid& grid,
                      double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("mode scaling must be positive");
  const std::size_t n = grid.n();
  const auto kept = static_cast<std::size_t>(num.modes.cols());
  for (std::size_t k = 0; k < kept; ++k) {
    std::vector<double> an(n);
    double amax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      an[i] = hermite_phi(k, alpha * grid.nu[i]);
      amax = std::max(amax, an[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (an[i] > 0.1 * amax) {
        if (num.modes(static_cast<long>(i), static_cast<long>(k)) < 0.0) {
          num.modes.col(static_cast<long>(k)) *= -1.0;
        }
        break;
      }
    }
  }
}

}  // namespace biphoton
