#pragma once

#include <cstddef>
#include <vector>

// Double-Gaussian bipartite kernels and their closed-form Schmidt theory.
//
// The kernel family
//   Psi(v1, v2) = sqrt(2/(pi a b)) exp(-(v1+v2)^2/(2a^2)) exp(-(v1-v2)^2/(2b^2))
// is the one two-variable family whose Schmidt decomposition is fully
// analytic: the modes are Hermite-Gauss functions at a single scale alpha
// and the eigenvalue ladder is geometric.  Everything here is scale-free
// mathematics over widths in rad/s.

namespace biphoton {

struct GaussianPair {
  double a;  // sum-coordinate width (rad/s)
  double b;  // difference-coordinate width (rad/s)
};

struct SchmidtParams {
  double mu;     // geometric ratio of signed amplitudes, in (-1, 1)
  double alpha;  // mode scale (s/rad)
};

struct ReducedGaussianParams {
  double at;  // diagonal width (a-tilde), rad/s
  double bt;  // coherence width (b-tilde), rad/s; invariant at >= bt
};

struct SchmidtDecomposition {
  std::vector<double> lambdas;  // non-negative, geometric ratio mu^2
  double mu;
  double K;                     // (1+mu^2)/(1-mu^2)
  // signed amplitude sqrt(lambda_n) * sign(mu)^n
  double signed_amplitude(std::size_t n) const;
};

struct MehlerValue {
  double value;
  double tail_bound;  // bound on the truncation remainder, same units as value
};

// parameter maps ------------------------------------------------------------

SchmidtParams wf_to_schmidt(const GaussianPair& p);
GaussianPair schmidt_to_wf(const SchmidtParams& s);

ReducedGaussianParams rdm_params_from_wf(const GaussianPair& p);
// Inverse of rdm_params_from_wf up to a<->b ordering; returns the a <= b branch.
// Throws std::domain_error when at < bt.
GaussianPair wf_params_from_rdm(const ReducedGaussianParams& r);

// pointwise kernels ----------------------------------------------------------

double dg_wavefunction(const GaussianPair& p, double nu1, double nu2);
double dg_rdm(const ReducedGaussianParams& r, double nu1, double nu1p);

// Schmidt mode psi_n(nu) = sqrt(alpha) * phi_n(alpha * nu).
double schmidt_mode(std::size_t n, double alpha, double nu);

// ladder and reconstruction ---------------------------------------------------

// lambda_n = (1 - mu^2) mu^(2n), K = (1+mu^2)/(1-mu^2).
SchmidtDecomposition eigenvalue_ladder(const SchmidtParams& s, std::size_t N);

// Truncation index making the geometric lambda tail below tol (ladder sums).
std::size_t ladder_truncation(double mu, double tol = 1e-12);
// Truncation index making the reconstruction error (which decays as |mu|^N,
// not mu^(2N)) below tol.
std::size_t mehler_truncation(double mu, double tol = 1e-9);

// Sum of the first N+1 Schmidt terms at one point, with a tail bound.
MehlerValue mehler_reconstruct(const SchmidtParams& s, double nu1, double nu2,
                               std::size_t N);

double schmidt_number(const SchmidtParams& s);   // (1+mu^2)/(1-mu^2)
double schmidt_number(const GaussianPair& p);    // (a^2+b^2)/(2ab)

}  // namespace biphoton
