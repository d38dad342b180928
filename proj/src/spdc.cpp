#include <biphoton/spdc.hpp>

#include <biphoton/constants.hpp>
#include <biphoton/hermite.hpp>

#include <cmath>
#include <stdexcept>

namespace biphoton {

namespace {

double sinc(double x) noexcept {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

// a(tau) in the short-pulse limit; the 2.78 chain keeps the printed
// constants 5.56 = 2*2.78 and 3.339 = 2.78/sqrt(ln2) mutually consistent.
double a_short_of(const CrystalOptics& c) {
  return two_x_half_rounded / std::sqrt(ln2) * c_light / (c.A * c.L);
}

double b_short_of(const CrystalOptics& c, const PumpPulse& p) {
  return std::sqrt(2.0 * c.A * c.omega0 / (p.tau * c.B));
}

double b_long_of(const CrystalOptics& c) {
  return c_light * std::sqrt(2.0 * pi / (gamma_sinc_sq * c.B * c.L * c.lambda0));
}

}  // namespace

CrystalOptics make_crystal_optics(double L, double A, double B, double lambda0) {
  CrystalOptics c;
  c.L = L;
  c.A = A;
  c.B = B;
  c.lambda0 = lambda0;
  c.omega0 = 2.0 * pi * c_light / lambda0;
  check_crystal(c);
  return c;
}

CrystalOptics crystal_from_sellmeier(const SellmeierSet& sell, double L, double lambda0) {
  const double omega0 = 2.0 * pi * c_light / lambda0;
  const DispersionConstants d = dispersion_constants(sell, omega0);
  return make_crystal_optics(L, d.A, d.B, lambda0);
}

void check_crystal(const CrystalOptics& c) {
  if (!(c.L > 0.0) || !(c.A > 0.0) || !(c.B > 0.0) || !(c.lambda0 > 0.0) ||
      !(c.omega0 > 0.0)) {
    throw std::domain_error("crystal optics require positive L, A, B, lambda0, omega0");
  }
  const double expect = 2.0 * pi * c_light / c.lambda0;
  if (std::abs(c.omega0 - expect) > 1e-12 * expect) {
    throw std::domain_error("crystal optics carrier mismatch: omega0 * lambda0 != 2 pi c");
  }
}

void check_pulse(const PumpPulse& p) {
  if (!(p.tau > 0.0)) throw std::domain_error("pump pulse duration must be positive");
}

const char* regime_name(Regime r) noexcept {
  switch (r) {
    case Regime::short_pulse: return "short";
    case Regime::long_pulse: return "long";
    default: return "intermediate";
  }
}

Regime classify_regime(double eta) noexcept {
  if (eta < 0.3) return Regime::short_pulse;
  if (eta > 3.0) return Regime::long_pulse;
  return Regime::intermediate;
}

double control_eta(const CrystalOptics& c, const PumpPulse& p) {
  check_crystal(c);
  check_pulse(p);
  return 2.0 * c_light * p.tau / (c.A * c.L);
}

PumpPulse pulse_from_eta(const CrystalOptics& c, double eta) {
  check_crystal(c);
  if (!(eta > 0.0)) throw std::domain_error("control parameter eta must be positive");
  return PumpPulse{eta * c.A * c.L / (2.0 * c_light)};
}

double exact_wavefunction(const CrystalOptics& c, const PumpPulse& p,
                          double nu1, double nu2) {
  check_crystal(c);
  check_pulse(p);
  const double half = 0.5 * c.omega0;
  if (!(std::abs(nu1) < half) || !(std::abs(nu2) < half)) {
    throw std::domain_error("detuning outside the physical range |nu| < omega0/2");
  }
  const double sum = nu1 + nu2;
  const double diff = nu1 - nu2;
  const double pump = std::exp(-sum * sum * p.tau * p.tau / (8.0 * ln2));
  const double arg = (c.L / (2.0 * c_light)) * (c.A * sum - c.B * diff * diff / c.omega0);
  return pump * sinc(arg);
}

SpectralWidths short_pulse_widths(const CrystalOptics& c, const PumpPulse& p) {
  check_crystal(c);
  check_pulse(p);
  SpectralWidths w;
  w.coincidence = coinc_width_const * c_light / (c.A * c.L);
  w.single = std::sqrt(2.0 * c.A * ln2 * c.omega0 / (c.B * p.tau));
  return w;
}

GaussianPair short_pulse_model(const CrystalOptics& c, const PumpPulse& p) {
  check_crystal(c);
  check_pulse(p);
  return GaussianPair{a_short_of(c), b_short_of(c, p)};
}

GaussianPair long_pulse_model(const CrystalOptics& c, const PumpPulse& p) {
  check_crystal(c);
  check_pulse(p);
  return GaussianPair{2.0 * std::sqrt(ln2) / p.tau, b_long_of(c)};
}

ReducedGaussianParams short_pulse_rdm_params(const CrystalOptics& c, const PumpPulse& p) {
  check_crystal(c);
  check_pulse(p);
  ReducedGaussianParams r;
  r.at = std::sqrt(c.A * c.omega0 / (c.B * p.tau));
  r.bt = coinc_width_const * c_light / (c.A * c.L * std::sqrt(2.0 * ln2));
  return r;
}

double short_pulse_rdm(const CrystalOptics& c, const PumpPulse& p,
                       double nu1, double nu1p) {
  return dg_rdm(short_pulse_rdm_params(c, p), nu1, nu1p);
}

GammaFit gamma_fwhm_fit(const std::string& kind) {
  // sinc^2 decreases monotonically from 1 on (0, pi); bisect for the 1/2 level.
  double lo = 1e-9, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double s = sinc(mid);
    (s * s > 0.5 ? lo : hi) = mid;
  }
  const double x_half = 0.5 * (lo + hi);
  GammaFit fit;
  fit.half_abscissa = x_half;
  if (kind == "sinc-of-square") {
    fit.gamma = ln2 / (2.0 * x_half);
  } else if (kind == "sinc-linear") {
    fit.gamma = ln2 / (2.0 * x_half * x_half);
  } else {
    throw std::invalid_argument("gamma_fwhm_fit kind must be sinc-of-square or sinc-linear");
  }
  return fit;
}

RegimeParams interpolated_model(const CrystalOptics& c, const PumpPulse& p,
                                double s_exp) {
  check_crystal(c);
  check_pulse(p);
  if (!(s_exp > 0.0)) throw std::domain_error("smoothing exponent must be positive");
  const double eta = control_eta(c, p);
  const double smooth = 1.0 + std::pow(eta, s_exp);
  RegimeParams rp;
  rp.eta = eta;
  rp.s_exp = s_exp;
  rp.regime = classify_regime(eta);
  rp.pair.a = a_short_of(c) * std::pow(smooth, -1.0 / s_exp);
  rp.pair.b = b_long_of(c) * std::pow(smooth, 0.5 / s_exp) / std::sqrt(eta);
  return rp;
}

double schmidt_number_of_tau(const CrystalOptics& c, const PumpPulse& p, double s_exp) {
  const RegimeParams rp = interpolated_model(c, p, s_exp);
  return rp.pair.b / (2.0 * rp.pair.a);
}

double schmidt_number_closed_form(const CrystalOptics& c, const PumpPulse& p,
                                  double s_exp) {
  const double eta = control_eta(c, p);
  if (!(s_exp > 0.0)) throw std::domain_error("smoothing exponent must be positive");
  const double coeff = std::sqrt(pi * ln2) / (two_x_half_rounded * std::sqrt(0.498));
  return coeff * c.A * std::sqrt(c.L / (c.B * c.lambda0)) *
         std::pow(1.0 + std::pow(eta, s_exp), 1.5 / s_exp) / std::sqrt(eta);
}

double schmidt_number_short(const CrystalOptics& c, const PumpPulse& p) {
  const GaussianPair g = short_pulse_model(c, p);
  return g.b / (2.0 * g.a);
}

double schmidt_number_short_closed(const CrystalOptics& c, const PumpPulse& p) {
  check_crystal(c);
  check_pulse(p);
  return 0.5308 * std::pow(c.A, 1.5) / std::sqrt(c.B) * c.L /
         std::sqrt(c.lambda0 * c_light * p.tau);
}

double schmidt_number_long(const CrystalOptics& c, const PumpPulse& p) {
  const GaussianPair g = long_pulse_model(c, p);
  return g.b / (2.0 * g.a);
}

double r_parameter_long_closed(const CrystalOptics& c, const PumpPulse& p) {
  check_crystal(c);
  check_pulse(p);
  return std::sqrt(1.39 * pi) / (2.0 * ln2) * c_light * p.tau /
         std::sqrt(c.lambda0 * c.L * c.B);
}

KMinimum schmidt_number_minimum(const CrystalOptics& c, double s_exp) {
  check_crystal(c);
  if (!(s_exp > 0.0)) throw std::domain_error("smoothing exponent must be positive");
  KMinimum m;
  m.eta = std::pow(2.0, -1.0 / s_exp);
  const PumpPulse p = pulse_from_eta(c, m.eta);
  m.tau = p.tau;
  m.K = schmidt_number_of_tau(c, p, s_exp);
  return m;
}

double GeneralizedLadder::exponential_approx(std::size_t n) const {
  return 2.0 / K * std::exp(-2.0 * static_cast<double>(n) / K);
}

double GeneralizedLadder::signed_amplitude(std::size_t n) const {
  const double r = 1.0 - 2.0 / K;
  const double mag = std::sqrt(2.0 / K * std::pow(std::abs(r), static_cast<double>(n)));
  return (r < 0.0 && n % 2 == 1) ? -mag : mag;
}

GeneralizedLadder generalized_ladder(double K, std::size_t count) {
  if (!(K > 1.0)) throw std::domain_error("generalized ladder requires K > 1");
  if (count == 0) throw std::invalid_argument("ladder needs at least one eigenvalue");
  GeneralizedLadder gl;
  gl.K = K;
  gl.mu = -1.0 + 1.0 / K;
  gl.lambdas.resize(count);
  const double head = 2.0 / K;
  const double ratio = 1.0 - 2.0 / K;
  double cur = head;
  for (std::size_t n = 0; n < count; ++n) {
    gl.lambdas[n] = cur;
    cur *= ratio;
  }
  return gl;
}

double ModeScaling::evaluate(std::size_t n, double nu) const {
  return std::sqrt(alpha) * hermite_phi(n, alpha * nu);
}

ModeScaling generalized_modes(const CrystalOptics& c, const PumpPulse& p, double s_exp) {
  const RegimeParams rp = interpolated_model(c, p, s_exp);
  ModeScaling m;
  m.alpha = std::sqrt(2.0 / (rp.pair.a * rp.pair.b));
  m.omega0_alpha = c.omega0 * m.alpha;
  m.omega0_alpha_closed = 2.17 * std::sqrt(c.A) * std::pow(c.B, 0.25) *
                          std::pow(c.L / c.lambda0, 0.75) * std::pow(rp.eta, 0.25) *
                          std::pow(1.0 + std::pow(rp.eta, s_exp), 0.25 / s_exp);
  m.eta = rp.eta;
  return m;
}

double mode_spectral_width(std::size_t n, const CrystalOptics& c,
                           const PumpPulse& p, double s_exp) {
  if (n < 1) throw std::invalid_argument("mode width is defined for n >= 1");
  const ModeScaling m = generalized_modes(c, p, s_exp);
  return std::sqrt(static_cast<double>(n)) / m.alpha;
}

LocalizationPoint localization_curves(const CrystalOptics& c, const PumpPulse& p,
                                      double nu2) {
  check_crystal(c);
  check_pulse(p);
  const double disc = c.A * c.A + 8.0 * c.B * c.A * nu2 / c.omega0;
  if (disc < 0.0) {
    throw std::domain_error("exact ridge branch undefined: nu2 below -A omega0/(8B)");
  }
  LocalizationPoint pt;
  pt.nu2 = nu2;
  pt.cm_exact = nu2 + c.omega0 / (2.0 * c.B) * (c.A - std::sqrt(disc));
  pt.cm_gauss = -nu2;
  pt.dashed_exact = -nu2 + 2.0 * ln2 / p.tau;
  const double half_span =
      std::pow(ln2, 0.25) * std::sqrt(c.A * c.omega0 / (0.208 * c.B * p.tau));
  pt.dashed_gauss_plus = nu2 + half_span;
  pt.dashed_gauss_minus = nu2 - half_span;
  pt.strip_half_width = coinc_width_const * c_light / (c.A * c.L);
  return pt;
}

double localization_branch_floor(const CrystalOptics& c) {
  check_crystal(c);
  return -c.A * c.omega0 / (8.0 * c.B);
}

}  // namespace biphoton
