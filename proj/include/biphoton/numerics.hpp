#pragma once

#include <biphoton/schmidt.hpp>
#include <biphoton/spdc.hpp>

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

namespace biphoton {

// Uniform symmetric detuning grid with trapezoidal quadrature weights.
struct SpectralGrid {
  std::vector<double> nu;  // strictly increasing, symmetric about 0 [rad/s]
  double extent = 0.0;     // half-width [rad/s]
  double h = 0.0;          // spacing [rad/s]
  std::size_t n() const { return nu.size(); }
  double weight(std::size_t i) const {
    return (i == 0 || i + 1 == nu.size()) ? 0.5 * h : h;
  }
};

// n_points >= 16; spacing h = 2 extent / (n_points - 1).
SpectralGrid build_grid(double extent, std::size_t n_points);

// Extent heuristics. The grid-doubling convergence check is authoritative;
// these only choose sensible starting points.
double dg_extent_heuristic(const GaussianPair& p);                              // max(4a, 2b)
double exact_extent_heuristic(const CrystalOptics& c, const PumpPulse& p);      // pump/sinc/single scales

// Grid sized for a double-Gaussian kernel: resolves both principal widths
// and carries enough points for every eigenvalue above the 1e-9 tail.
SpectralGrid dg_grid(const GaussianPair& p);
// Grid for the exact amplitude, sized from the predicted Schmidt number.
SpectralGrid exact_wf_grid(const CrystalOptics& c, const PumpPulse& p,
                           double s_exp = 2.21);

using KernelEvaluator = std::function<double(double, double)>;

struct KernelMatrix {
  Eigen::MatrixXd values;  // values(i, j) = Psi(nu_i, nu_j) after normalization
  SpectralGrid grid;
  bool normalized = false;
};

// Samples the kernel and normalizes so sum_ij w_i w_j values(i,j)^2 = 1.
KernelMatrix discretize(const KernelEvaluator& kernel, const SpectralGrid& grid);

struct NumericalDecomposition {
  std::vector<double> singular_values;  // sqrt(lambda_n), non-increasing
  std::vector<double> lambdas;          // normalized, sum = 1
  double K_num = 0.0;                   // 1 / sum lambda_n^2
  Eigen::MatrixXd modes;                // n x m, continuum-orthonormal columns
  double residual = 0.0;                // eigenvalue mass beyond kept modes
};

// Schmidt decomposition of the discretized kernel via the symmetric
// eigenproblem of W = D^(1/2) M D^(1/2), D = diag(trapezoid weights).
// n_keep = 0 keeps every mode.
NumericalDecomposition schmidt_svd(const KernelMatrix& m, std::size_t n_keep = 0);

// Schmidt number from Frobenius norms alone (no eigendecomposition):
// K = |W|_F^4 / |W W^T|_F^2. Exact for the same discretization.
double purity_schmidt_number(const KernelMatrix& m);

// rho(nu_i, nu_j) = sum_k w_k Psi(nu_i, nu_k) Psi(nu_j, nu_k) for the
// normalized kernel; unit trace under trapezoid weights.
Eigen::MatrixXd numerical_rdm(const KernelEvaluator& kernel, const SpectralGrid& grid);
std::vector<double> rdm_eigenvalues(const Eigen::MatrixXd& rho, const SpectralGrid& grid);

// FWHM of a sampled single-peaked curve; crossings located by bisection on
// the linear interpolant of the bracketing segment.
double fwhm(const std::vector<double>& x, const std::vector<double>& y);
// Same for a continuous curve on [-extent, extent]; the presample is refined
// until the above-half region is resolved.
double fwhm_continuous(const std::function<double(double)>& f, double extent);

// R = single-spectrum FWHM / coincidence-slice FWHM. The single spectrum
// integral over nu2 is refined independently of the grid; the coincidence
// slice is taken at nu2 = 0, the distribution center.
double r_parameter(const KernelEvaluator& kernel, const SpectralGrid& grid);

// Squared h-weighted overlaps of numerical modes against
// psi_n(nu) = sqrt(alpha) phi_n(alpha nu), the analytic sample renormalized
// on the grid. Sign-invariant.
std::vector<double> mode_overlap(const NumericalDecomposition& num,
                                 const SpectralGrid& grid, double alpha,
                                 std::size_t n_modes);

// Deterministic sign convention: each numerical mode is flipped, if needed,
// so its value is positive at the first grid point where the analytic mode
// exceeds 10% of its maximum.
void align_mode_signs(NumericalDecomposition& num, const SpectralGrid& grid,
                      double alpha);

}  // namespace biphoton
