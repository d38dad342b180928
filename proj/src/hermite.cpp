#include "biphoton/hermite.hpp"
#include "biphoton/constants.hpp"

#include <cmath>

namespace biphoton {
namespace {

// Runs the scaled recurrence, keeping the pair (p_prev, p_cur) within
// [2^-512, 2^512] by shifting a shared exponent.  The true value of
// phi_k is p_cur * 2^exp2 * exp(-x*x/2 + log_rescale) with log_rescale
// folded into exp2 bookkeeping below (we keep everything in powers of two).
struct ScaledLadder {
  double p_prev, p_cur;
  long exp2;

  explicit ScaledLadder(double x)
      : p_prev(0.0),
        p_cur(std::pow(pi, -0.25)),
        exp2(0) {
    // exp(-x^2/2) = m * 2^e with m in [0.5, 1): fold e into the exponent,
    // keep m in the mantissa part.  frexp of 0 would lose the ladder, so
    // the exponent of the Gaussian is computed analytically instead.
    const double log2_gauss = -x * x * 0.5 / ln2;
    const double e_floor = std::floor(log2_gauss);
    exp2 = static_cast<long>(e_floor);
    p_cur *= std::exp2(log2_gauss - e_floor);
  }

  void step(std::size_t n, double x) {
    // phi_{n+1} from (phi_n, phi_{n-1}); n is the current top index.
    const double next = x * std::sqrt(2.0 / double(n + 1)) * p_cur -
                        std::sqrt(double(n) / double(n + 1)) * p_prev;
    p_prev = p_cur;
    p_cur = next;
    const double mag = std::fabs(p_cur) + std::fabs(p_prev);
    if (mag > 0x1p512) {
      p_prev *= 0x1p-512;
      p_cur *= 0x1p-512;
      exp2 += 512;
    } else if (mag > 0.0 && mag < 0x1p-512) {
      p_prev *= 0x1p512;
      p_cur *= 0x1p512;
      exp2 -= 512;
    }
  }

  double value() const {
    if (p_cur == 0.0) return 0.0;
    int e = 0;
    const double m = std::frexp(p_cur, &e);
    return std::ldexp(m, static_cast<int>(std::max<long>(
                             std::min<long>(exp2 + e, 2000), -2000)));
  }
};

}  // namespace

double hermite_phi(std::size_t n, double x) noexcept {
  ScaledLadder lad(x);
  for (std::size_t k = 0; k < n; ++k) lad.step(k, x);
  return lad.value();
}

std::vector<double> hermite_phi_ladder(std::size_t nmax, double x) {
  std::vector<double> out(nmax + 1);
  ScaledLadder lad(x);
  out[0] = lad.value();
  for (std::size_t k = 0; k < nmax; ++k) {
    lad.step(k, x);
    out[k + 1] = lad.value();
  }
  return out;
}

}  // namespace biphoton
