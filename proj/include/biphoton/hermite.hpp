#pragma once

#include <cstddef>
#include <vector>

// Normalized Hermite-Gauss (quantum harmonic oscillator) functions
//   phi_n(x) = H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi)).
//
// Evaluation runs the factorial-free recurrence
//   phi_{n+1} = x sqrt(2/(n+1)) phi_n - sqrt(n/(n+1)) phi_{n-1}
// on values scaled by a tracked power of two, so that the ground-state
// factor exp(-x^2/2) (which underflows at |x| > 38.6 in double precision)
// never truncates intermediate terms.  Stable to n ~ 10^4 and beyond.

namespace biphoton {

// phi_n(x) for a single index.
double hermite_phi(std::size_t n, double x) noexcept;

// phi_0..phi_nmax at one point, reconstructed to plain doubles.
// Entries whose true magnitude is below the double underflow threshold
// come out as exact zeros.
std::vector<double> hermite_phi_ladder(std::size_t nmax, double x);

}  // namespace biphoton
