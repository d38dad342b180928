#pragma once

#include <array>
#include <string>

// Crystal dispersion: two-pole Sellmeier sets for a uniaxial crystal and the
// derived group-velocity quantities entering the SPDC model.
//
// Coefficient convention ("sellmeier-2pole"):
//   n^2(lambda) = C0 + C1 lambda^2/(lambda^2 - C2) + C3 lambda^2/(lambda^2 - C4)
// with lambda in micrometres.

namespace biphoton {

struct SellmeierSet {
  std::string crystal;
  std::array<double, 5> no_coeffs;   // ordinary index
  std::array<double, 5> ne_coeffs;   // principal extraordinary index
  std::string form;                  // "sellmeier-2pole"
  double range_um_lo = 0.0;
  double range_um_hi = 0.0;
  std::string source;
};

struct DispersionConstants {
  double A;  // walk-off constant, dimensionless
  double B;  // dispersion constant, dimensionless
  double theta_pm;  // phase-matching angle (rad), for provenance
};

// Strict JSON loader for the schema
//   { "crystal": str, "no_coeffs": [...], "ne_coeffs": [...],
//     "form": "sellmeier-2pole", "range_um": [lo, hi], "source": str }.
// Unknown or missing fields are rejected (std::invalid_argument);
// an index dipping below 1 inside the declared range is a domain error.
SellmeierSet load_sellmeier_json(const std::string& path);
SellmeierSet parse_sellmeier_json(const std::string& text);

// Built-in LiIO3 record: a literature-style two-pole fit recalibrated so the
// derived group-velocity mismatch and group-delay dispersion at the 400 nm
// degenerate type-I point match the reference modeling values.
const SellmeierSet& liio3_sellmeier();

double n_ordinary(const SellmeierSet& s, double lambda_um);
double n_extraordinary_principal(const SellmeierSet& s, double lambda_um);
// Index seen by an extraordinary wave at angle theta to the optic axis.
double n_extraordinary(const SellmeierSet& s, double theta, double lambda_um);

// Collinear degenerate type-I phase matching: angle theta in (0, pi/2) with
// n_e(theta, lambda0) = n_o(2 lambda0).  Throws std::domain_error when no
// solution exists.
double phase_matching_angle(const SellmeierSet& s, double omega0);

// A = c (k_p'(w0) - k_o'(w0/2)),  B = (c/4) w0 k_o''(w0/2), with the pump
// extraordinary at the phase-matching angle and the daughters ordinary.
// Derivatives by central differences with one Richardson extrapolation step.
DispersionConstants dispersion_constants(const SellmeierSet& s, double omega0);

}  // namespace biphoton
