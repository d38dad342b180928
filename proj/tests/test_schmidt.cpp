#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "biphoton/constants.hpp"
#include "biphoton/schmidt.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace biphoton;

namespace {

// Quadrature partial trace of the pure-state kernel over the second argument.
double quad_rdm(const GaussianPair& p, double nu, double nup) {
  const double E = 7.0 * std::max(p.a, p.b);
  const int N = 8001;
  const double h = 2.0 * E / (N - 1);
  double s = 0.0;
  for (int i = 0; i < N; ++i) {
    const double y = -E + i * h;
    const double w = (i == 0 || i == N - 1) ? h / 2.0 : h;
    s += w * dg_wavefunction(p, nu, y) * dg_wavefunction(p, nup, y);
  }
  return s;
}

}  // namespace

TEST_CASE("eigenvalue ladder is geometric, normalized, and matches K") {
  std::mt19937 rng(20250811u);
  std::uniform_real_distribution<double> U(-0.99, 0.99);
  for (int t = 0; t < 60; ++t) {
    const double mu = U(rng);
    const SchmidtParams s{mu, 1.0};
    const auto d = eigenvalue_ladder(s, 40);
    REQUIRE(d.lambdas.size() == 40);
    double sum = 0.0;
    for (std::size_t n = 0; n < 40; ++n) {
      const double ref = (1.0 - mu * mu) * std::pow(mu * mu, double(n));
      CHECK(d.lambdas[n] == doctest::Approx(ref).epsilon(1e-12));
      sum += d.lambdas[n];
    }
    CHECK(sum <= 1.0 + 1e-12);
    CHECK(d.K == doctest::Approx((1.0 + mu * mu) / (1.0 - mu * mu)).epsilon(1e-14));
    CHECK(schmidt_number(s) == doctest::Approx(d.K).epsilon(1e-15));
  }
}

TEST_CASE("signed amplitudes square to eigenvalues and carry sign mu^n") {
  const SchmidtParams s{-0.6, 2.0};
  const auto d = eigenvalue_ladder(s, 12);
  for (std::size_t n = 0; n < 12; ++n) {
    const double g = d.signed_amplitude(n);
    CHECK(g * g == doctest::Approx(d.lambdas[n]).epsilon(1e-12));
    const bool expect_neg = (n % 2 == 1);
    CHECK((g < 0.0) == expect_neg);
  }
}

TEST_CASE("width pair <-> (mu, alpha) round trip across scales") {
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> Ulog(9.0, 14.5);
  for (int t = 0; t < 40; ++t) {
    const GaussianPair p{std::pow(10.0, Ulog(rng)), std::pow(10.0, Ulog(rng))};
    const SchmidtParams s = wf_to_schmidt(p);
    CHECK(s.mu == doctest::Approx((p.a - p.b) / (p.a + p.b)).epsilon(1e-14));
    CHECK(s.alpha == doctest::Approx(std::sqrt(2.0 / (p.a * p.b))).epsilon(1e-14));
    const GaussianPair q = schmidt_to_wf(s);
    CHECK(q.a == doctest::Approx(p.a).epsilon(1e-12));
    CHECK(q.b == doctest::Approx(p.b).epsilon(1e-12));
    CHECK(schmidt_number(p) ==
          doctest::Approx((p.a * p.a + p.b * p.b) / (2.0 * p.a * p.b)).epsilon(1e-14));
  }
}

TEST_CASE("reduced-state parameters and their inverse") {
  const GaussianPair p{3.0e12, 0.7e12};
  const ReducedGaussianParams r = rdm_params_from_wf(p);
  CHECK(r.at == doctest::Approx(std::sqrt((p.a * p.a + p.b * p.b) / 2.0)).epsilon(1e-14));
  CHECK(r.bt ==
        doctest::Approx(p.a * p.b * std::sqrt(2.0 / (p.a * p.a + p.b * p.b))).epsilon(1e-14));
  CHECK(r.at >= r.bt);
  // the reduced state has the squared amplitude ratio and the same mode scale
  const SchmidtParams s = wf_to_schmidt(p);
  const SchmidtParams st = wf_to_schmidt(GaussianPair{r.at, r.bt});
  CHECK(st.mu == doctest::Approx(s.mu * s.mu).epsilon(1e-12));
  CHECK(st.alpha == doctest::Approx(s.alpha).epsilon(1e-12));

  // the inverse returns the a <= b branch of the two-fold ambiguity
  const GaussianPair back = wf_params_from_rdm(r);
  CHECK(back.a <= back.b);
  CHECK(back.a == doctest::Approx(std::min(p.a, p.b)).epsilon(1e-12));
  CHECK(back.b == doctest::Approx(std::max(p.a, p.b)).epsilon(1e-12));
  CHECK_THROWS_AS((void)wf_params_from_rdm(ReducedGaussianParams{1.0, 2.0}),
                  std::domain_error);
}

TEST_CASE("kernel normalization and reduced-state trace") {
  const GaussianPair p{1.7, 0.35};
  // A two-Gaussian kernel integrates to one in the L2 sense.
  const double E = 8.0;
  const int N = 1201;
  const double h = 2.0 * E / (N - 1);
  double l2 = 0.0;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const double wi = (i == 0 || i == N - 1) ? h / 2.0 : h;
      const double wj = (j == 0 || j == N - 1) ? h / 2.0 : h;
      const double v = dg_wavefunction(p, -E + i * h, -E + j * h);
      l2 += wi * wj * v * v;
    }
  }
  CHECK(l2 == doctest::Approx(1.0).epsilon(1e-8));

  const ReducedGaussianParams r = rdm_params_from_wf(p);
  double tr = 0.0;
  for (int i = 0; i < N; ++i) {
    const double wi = (i == 0 || i == N - 1) ? h / 2.0 : h;
    tr += wi * dg_rdm(r, -E + i * h, -E + i * h);
  }
  CHECK(tr == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("closed-form reduced state equals the quadrature partial trace") {
  const GaussianPair p{2.2, 0.6};
  const ReducedGaussianParams r = rdm_params_from_wf(p);
  const double peak = dg_rdm(r, 0.0, 0.0);
  for (const auto& [x, y] : std::vector<std::pair<double, double>>{
           {0.0, 0.0}, {0.5, 0.5}, {1.0, -1.0}, {2.0, 0.3}, {-1.3, 2.1}, {3.0, -2.5}}) {
    CHECK(std::abs(dg_rdm(r, x, y) - quad_rdm(p, x, y)) <= 1e-7 * peak);
  }
}

TEST_CASE("mode functions are scaled Hermite functions and orthonormal") {
  const double alpha = 2.5;
  // psi_n(nu) = sqrt(alpha) phi_n(alpha nu); orthonormal in nu
  const double E = 8.0 / alpha;
  const int N = 4001;
  const double h = 2.0 * E / (N - 1);
  for (int m = 0; m <= 4; ++m) {
    for (int n = m; n <= 4; ++n) {
      double s = 0.0;
      for (int i = 0; i < N; ++i) {
        const double w = (i == 0 || i == N - 1) ? h / 2.0 : h;
        const double nu = -E + i * h;
        s += w * schmidt_mode(m, alpha, nu) * schmidt_mode(n, alpha, nu);
      }
      CHECK(s == doctest::Approx(m == n ? 1.0 : 0.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("bilinear mode expansion reconstructs the kernel pointwise") {
  for (const double mu : {0.3, -0.55, 0.8, -0.9}) {
    const SchmidtParams s{mu, 1.4};
    const GaussianPair p = schmidt_to_wf(s);
    const double peak = dg_wavefunction(p, 0.0, 0.0);
    const std::size_t N = mehler_truncation(mu);
    for (const auto& [x, y] : std::vector<std::pair<double, double>>{
             {0.0, 0.0}, {0.4, -0.2}, {1.0, 1.0}, {-1.5, 0.7}, {2.0, -2.0}}) {
      const MehlerValue mv = mehler_reconstruct(s, x, y, N);
      const double err = std::abs(mv.value - dg_wavefunction(p, x, y));
      CHECK(err <= mv.tail_bound + 1e-13 * peak);
      CHECK(err <= 1e-8 * peak);
    }
  }
}

TEST_CASE("series truncation grows like log tolerance over log mu^2") {
  CHECK(ladder_truncation(0.0) == 1);
  for (const double mu : {0.1, 0.5, 0.9}) {
    const std::size_t N = ladder_truncation(mu, 1e-12);
    // the first omitted eigenvalue is below tolerance, the last kept is not
    const double q = mu * mu;
    CHECK(std::pow(q, double(N)) <= 1e-12 * (1 + 1e-9));
    CHECK(std::pow(q, double(N - 1)) > 1e-12 * (1 - 1e-9));
  }
  // reconstruction truncation uses |mu| since amplitudes carry sqrt(lambda)
  for (const double mu : {0.3, 0.7, 0.9}) {
    CHECK(mehler_truncation(mu, 1e-9) >=
          std::size_t(std::ceil(std::log(1e-9) / std::log(std::abs(mu)))) - 1);
  }
}

TEST_CASE("degenerate and invalid inputs are rejected") {
  CHECK_THROWS_AS((void)wf_to_schmidt(GaussianPair{0.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS((void)wf_to_schmidt(GaussianPair{1.0, -2.0}), std::domain_error);
  CHECK_THROWS_AS((void)eigenvalue_ladder(SchmidtParams{1.0, 1.0}, 4), std::domain_error);
  CHECK_THROWS_AS((void)eigenvalue_ladder(SchmidtParams{0.2, 1.0}, 0), std::invalid_argument);
  // equal widths: separable state, single unit eigenvalue
  const auto d = eigenvalue_ladder(wf_to_schmidt(GaussianPair{1.0, 1.0}), 3);
  CHECK(d.lambdas[0] == doctest::Approx(1.0));
  CHECK(d.lambdas[1] == doctest::Approx(0.0));
  CHECK(d.K == doctest::Approx(1.0));
}
