#pragma once

// Physical and model constants shared across the library.
//
// Several widely quoted coefficients in the double-Gaussian SPDC model are
// roundings of exact expressions (FWHM matching constants and combinations
// of them).  The exact expressions are used internally; the rounded values
// appear only in tests that pin the conventional numbers.

namespace biphoton {

inline constexpr double c_light = 299792458.0;        // m/s
inline constexpr double pi      = 3.141592653589793238462643383279502884;
inline constexpr double ln2     = 0.693147180559945309417232121458176568;

// Half-max abscissa of sinc^2(x): the positive root of sin(x)/x = 1/sqrt(2).
inline constexpr double sinc2_half_abscissa = 1.39155737825151015032;

// FWHM-matching constant of exp(-2*gamma*u^2) against sinc^2(u^2):
// gamma = ln2 / (2 * sinc2_half_abscissa).  Conventionally rounded to 0.249.
inline constexpr double gamma_sinc_sq = 0.24905447356791128064;

// Conventional constants of the short-pulse reduced-density-matrix fit.
// gamma1 = sqrt(ln 2); gamma2 keeps the literature chain ln2/2.78^2, where
// 2.78 is the rounded 2*sinc2_half_abscissa (using the unrounded value here
// would shift gamma2 outside its conventional 0.0897 +/- 0.0001 band).
inline constexpr double gamma1 = 0.83255461115769775635;
inline constexpr double two_x_half_rounded = 2.78;
inline constexpr double gamma2 = ln2 / (two_x_half_rounded * two_x_half_rounded);

// Coincidence-width constant 5.56 = 2 * 2.78 (literature chain).
inline constexpr double coinc_width_const = 2.0 * two_x_half_rounded;

}  // namespace biphoton
