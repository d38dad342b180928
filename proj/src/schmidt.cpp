#include "biphoton/schmidt.hpp"
#include "biphoton/constants.hpp"
#include "biphoton/hermite.hpp"

#include <cmath>
#include <stdexcept>

namespace biphoton {

namespace {
void check_pair(const GaussianPair& p) {
  if (!(p.a > 0.0) || !(p.b > 0.0))
    throw std::domain_error("GaussianPair widths must be positive");
}
void check_schmidt(const SchmidtParams& s) {
  if (!(s.alpha > 0.0))
    throw std::domain_error("SchmidtParams alpha must be positive");
  if (!(std::fabs(s.mu) < 1.0 - 1e-12))
    throw std::domain_error("SchmidtParams requires |mu| < 1 - 1e-12");
}
}  // namespace

SchmidtParams wf_to_schmidt(const GaussianPair& p) {
  check_pair(p);
  return {(p.a - p.b) / (p.a + p.b), std::sqrt(2.0 / (p.a * p.b))};
}

GaussianPair schmidt_to_wf(const SchmidtParams& s) {
  check_schmidt(s);
  const double r = std::sqrt((1.0 + s.mu) / (1.0 - s.mu));
  const double base = std::sqrt(2.0) / s.alpha;
  return {base * r, base / r};
}

ReducedGaussianParams rdm_params_from_wf(const GaussianPair& p) {
  check_pair(p);
  const double q = std::sqrt((p.a * p.a + p.b * p.b) / 2.0);
  return {q, p.a * p.b / q};
}

GaussianPair wf_params_from_rdm(const ReducedGaussianParams& r) {
  if (!(r.at > 0.0) || !(r.bt > 0.0))
    throw std::domain_error("reduced-density widths must be positive");
  if (r.at < r.bt)
    throw std::domain_error(
        "invalid reduced-density pair: diagonal width below coherence width");
  const double sp = std::sqrt(r.at + r.bt);
  const double sm = std::sqrt(r.at - r.bt);
  const double f = std::sqrt(r.at / 2.0);
  return {f * (sp - sm), f * (sp + sm)};
}

double dg_wavefunction(const GaussianPair& p, double nu1, double nu2) {
  check_pair(p);
  const double s = nu1 + nu2, d = nu1 - nu2;
  return std::sqrt(2.0 / (pi * p.a * p.b)) *
         std::exp(-s * s / (2.0 * p.a * p.a) - d * d / (2.0 * p.b * p.b));
}

double dg_rdm(const ReducedGaussianParams& r, double nu1, double nu1p) {
  const double s = nu1 + nu1p, d = nu1 - nu1p;
  return (1.0 / r.at) * std::sqrt(2.0 / pi) *
         std::exp(-s * s / (2.0 * r.at * r.at) - d * d / (2.0 * r.bt * r.bt));
}

double schmidt_mode(std::size_t n, double alpha, double nu) {
  if (!(alpha > 0.0)) throw std::domain_error("alpha must be positive");
  return std::sqrt(alpha) * hermite_phi(n, alpha * nu);
}

double SchmidtDecomposition::signed_amplitude(std::size_t n) const {
  const double amp = std::sqrt(lambdas.at(n));
  return (mu < 0.0 && n % 2 == 1) ? -amp : amp;
}

SchmidtDecomposition eigenvalue_ladder(const SchmidtParams& s, std::size_t N) {
  check_schmidt(s);
  if (N < 1) throw std::invalid_argument("ladder needs N >= 1");
  SchmidtDecomposition d;
  d.mu = s.mu;
  const double mu2 = s.mu * s.mu;
  d.K = (1.0 + mu2) / (1.0 - mu2);
  d.lambdas.resize(N);
  double lam = 1.0 - mu2;
  for (std::size_t n = 0; n < N; ++n, lam *= mu2) d.lambdas[n] = lam;
  return d;
}

std::size_t ladder_truncation(double mu, double tol) {
  const double m2 = mu * mu;
  if (m2 <= 0.0) return 1;
  const double n = std::ceil(std::log(tol) / std::log(m2));
  return static_cast<std::size_t>(std::min(std::max(n, 1.0), 1e5));
}

std::size_t mehler_truncation(double mu, double tol) {
  const double m = std::fabs(mu);
  if (m <= 0.0) return 1;
  const double n = std::ceil(std::log(tol) / std::log(m));
  return static_cast<std::size_t>(std::min(std::max(n, 1.0), 1e5));
}

MehlerValue mehler_reconstruct(const SchmidtParams& s, double nu1, double nu2,
                               std::size_t N) {
  check_schmidt(s);
  const auto ph1 = hermite_phi_ladder(N, s.alpha * nu1);
  const auto ph2 = hermite_phi_ladder(N, s.alpha * nu2);
  const double pref = s.alpha * std::sqrt(1.0 - s.mu * s.mu);
  double mun = 1.0, sum = 0.0;
  for (std::size_t n = 0; n <= N; ++n, mun *= s.mu) sum += mun * ph1[n] * ph2[n];
  // |phi_n| <= phi_0(0) = pi^{-1/4}; the remainder is bounded by the
  // geometric tail times that envelope squared.
  const double am = std::fabs(s.mu);
  const double env = 1.0 / std::sqrt(pi);
  const double tail =
      pref * env * std::pow(am, double(N + 1)) / std::max(1.0 - am, 1e-300);
  return {pref * sum, tail};
}

double schmidt_number(const SchmidtParams& s) {
  const double m2 = s.mu * s.mu;
  return (1.0 + m2) / (1.0 - m2);
}

double schmidt_number(const GaussianPair& p) {
  check_pair(p);
  return (p.a * p.a + p.b * p.b) / (2.0 * p.a * p.b);
}

}  // namespace biphoton
