#pragma once

#include <biphoton/schmidt.hpp>
#include <biphoton/sellmeier.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace biphoton {

// Crystal and pump description reduced to what collinear degenerate type-I
// downconversion needs: length, the two dispersion constants, the carrier.
// Invariant: omega0 * lambda0 = 2*pi*c (enforced by the factories).
struct CrystalOptics {
  double L = 0.0;        // crystal length [m]
  double A = 0.0;        // group-velocity mismatch constant, dimensionless
  double B = 0.0;        // group-velocity dispersion constant, dimensionless
  double omega0 = 0.0;   // pump carrier frequency [rad/s]
  double lambda0 = 0.0;  // pump vacuum wavelength [m]
};

struct PumpPulse {
  double tau = 0.0;  // pump pulse duration [s], FWHM convention
};

CrystalOptics make_crystal_optics(double L, double A, double B, double lambda0);
CrystalOptics crystal_from_sellmeier(const SellmeierSet& sell, double L, double lambda0);
void check_crystal(const CrystalOptics& c);
void check_pulse(const PumpPulse& p);

enum class Regime { short_pulse, intermediate, long_pulse };
const char* regime_name(Regime r) noexcept;
// eta < 0.3 short, eta > 3 long, intermediate between.
Regime classify_regime(double eta) noexcept;

// eta = 2 c tau / (A L), the control parameter separating pulse regimes.
double control_eta(const CrystalOptics& c, const PumpPulse& p);
PumpPulse pulse_from_eta(const CrystalOptics& c, double eta);

// Unnormalized two-photon spectral amplitude at detunings nu1, nu2 from the
// degenerate frequency omega0/2. Requires |nu1|, |nu2| < omega0/2.
double exact_wavefunction(const CrystalOptics& c, const PumpPulse& p,
                          double nu1, double nu2);

struct SpectralWidths {
  double coincidence;  // rad/s
  double single;       // rad/s
};
// Short-pulse FWHM widths: 5.56 c/(AL) and sqrt(2 A ln2 omega0 / (B tau)).
SpectralWidths short_pulse_widths(const CrystalOptics& c, const PumpPulse& p);

// Double-Gaussian parameters in the two asymptotic regimes.
GaussianPair short_pulse_model(const CrystalOptics& c, const PumpPulse& p);
GaussianPair long_pulse_model(const CrystalOptics& c, const PumpPulse& p);

// Reduced density matrix of one photon in the short-pulse regime.
ReducedGaussianParams short_pulse_rdm_params(const CrystalOptics& c, const PumpPulse& p);
double short_pulse_rdm(const CrystalOptics& c, const PumpPulse& p,
                       double nu1, double nu1p);

// Width-matched Gaussian decay constant: the gamma for which
// exp(-2 gamma u^2) has the same FWHM as sinc^2(u^2) ("sinc-of-square")
// or sinc^2(u) ("sinc-linear"). half_abscissa is where sinc^2 = 1/2.
struct GammaFit {
  double gamma;
  double half_abscissa;
};
GammaFit gamma_fwhm_fit(const std::string& kind);

struct RegimeParams {
  GaussianPair pair;  // a(tau), b(tau)
  double eta = 0.0;
  double s_exp = 0.0;
  Regime regime = Regime::intermediate;
};
// Smooth interpolation between the asymptotic models:
//   a = a_short (1 + eta^s)^(-1/s),  b = b_long (1 + eta^s)^(1/(2s)) / sqrt(eta).
RegimeParams interpolated_model(const CrystalOptics& c, const PumpPulse& p,
                                double s_exp = 2.21);

// K(tau) = b(tau) / (2 a(tau)) of the interpolated model, plus the
// rounded-coefficient closed forms used for cross checks.
double schmidt_number_of_tau(const CrystalOptics& c, const PumpPulse& p,
                             double s_exp = 2.21);
double schmidt_number_closed_form(const CrystalOptics& c, const PumpPulse& p,
                                  double s_exp = 2.21);
double schmidt_number_short(const CrystalOptics& c, const PumpPulse& p);
double schmidt_number_short_closed(const CrystalOptics& c, const PumpPulse& p);
double schmidt_number_long(const CrystalOptics& c, const PumpPulse& p);
// Single-to-coincidence width ratio of the exact amplitude, long-pulse limit.
double r_parameter_long_closed(const CrystalOptics& c, const PumpPulse& p);

struct KMinimum {
  double eta;  // 2^(-1/s)
  double tau;  // [s]
  double K;
};
KMinimum schmidt_number_minimum(const CrystalOptics& c, double s_exp = 2.21);

// Eigenvalue ladder parameterized by the Schmidt number alone:
//   lambda_n = (2/K)(1 - 2/K)^n,  mu = -1 + 1/K.
// The n-dependence is meaningful for K >= 2; K <= 1 is rejected.
struct GeneralizedLadder {
  double K = 0.0;
  double mu = 0.0;
  std::vector<double> lambdas;
  double exponential_approx(std::size_t n) const;  // (2/K) exp(-2n/K)
  double signed_amplitude(std::size_t n) const;
};
GeneralizedLadder generalized_ladder(double K, std::size_t count);

// Mode family psi_n(nu) = sqrt(alpha) phi_n(alpha nu) with
// alpha = sqrt(2/(a b)) taken from the interpolated model.
struct ModeScaling {
  double alpha = 0.0;                // [s/rad]
  double omega0_alpha = 0.0;         // dimensionless
  double omega0_alpha_closed = 0.0;  // rounded-coefficient closed form
  double eta = 0.0;
  double evaluate(std::size_t n, double nu) const;
};
ModeScaling generalized_modes(const CrystalOptics& c, const PumpPulse& p,
                              double s_exp = 2.21);

// delta nu_n = sqrt(n)/alpha(tau), the spectral width of mode n >= 1.
double mode_spectral_width(std::size_t n, const CrystalOptics& c,
                           const PumpPulse& p, double s_exp = 2.21);

// Ridge and bound curves of the (nu1, nu2) localization map at fixed nu2.
struct LocalizationPoint {
  double nu2;
  double cm_exact;           // ridge of the exact amplitude
  double cm_gauss;           // ridge of the double-Gaussian model: -nu2
  double dashed_exact;       // half-intensity bound of the pump envelope
  double dashed_gauss_plus;  // transverse bounds of the model strip
  double dashed_gauss_minus;
  double strip_half_width;   // coincidence width 5.56 c/(AL)
};
LocalizationPoint localization_curves(const CrystalOptics& c, const PumpPulse& p,
                                      double nu2);
// Smallest nu2 for which the exact ridge branch exists: -A omega0 / (8B).
double localization_branch_floor(const CrystalOptics& c);

}  // namespace biphoton
