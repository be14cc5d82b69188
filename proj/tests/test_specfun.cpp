#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlstab/error.hpp"
#include "nlstab/specfun.hpp"
#include "oracles.hpp"

using namespace nlstab;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("gamma at simple points") {
  CHECK(nlstab::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rel(nlstab::gamma(0.5), std::sqrt(std::numbers::pi)) < 1e-13);
  CHECK(rel(nlstab::gamma(5.0), 24.0) < 1e-14);
}

TEST_CASE("gamma against high-precision values") {
  CHECK(rel(nlstab::gamma(0.1), oracle::kGamma0_1) < 1e-12);
  CHECK(rel(nlstab::gamma(7.3), oracle::kGamma7_3) < 1e-12);
  CHECK(rel(nlstab::gamma(49.5), oracle::kGamma49_5) < 1e-12);
  CHECK(rel(nlstab::gamma(-2.5), oracle::kGammaMinus2_5) < 1e-12);
}

TEST_CASE("gamma rejects poles") {
  for (double x : {0.0, -1.0, -7.0}) {
    try {
      nlstab::gamma(x);
      FAIL("no error at a pole");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kPole);
    }
  }
}

TEST_CASE("gamma recurrence") {
  for (double x = 0.5; x <= 20.0; x += 0.37) {
    CHECK(rel(nlstab::gamma(x + 1.0), x * nlstab::gamma(x)) < 1e-11);
  }
}

TEST_CASE("hypergeometric series") {
  CHECK(gauss_2f1(0.7, 1.3, 2.1, 0.0) == 1.0);
  CHECK(gauss_2f1(0.0, 1.3, 2.1, -0.4) == 1.0);
  CHECK(rel(gauss_2f1(1, 1, 2, -0.3), -std::log(1.3) / -0.3) < 1e-12);
  CHECK(rel(gauss_2f1(1, 1, 2, -0.3), oracle::kHyp1_1_2_m03) < 1e-12);
  CHECK(rel(gauss_2f1(1.5, 0.5, 1.0, 1.0 - 1.1 * 1.1), oracle::kHyp15_05_1_m021) < 1e-10);
  CHECK(rel(gauss_2f1(2.0, 0.5, 1.5, -0.5625), oracle::kHyp2_05_15_m05625) < 1e-10);
}

TEST_CASE("hypergeometric tail bound and domain") {
  const SeriesValue v = gauss_2f1_series(1.5, 0.5, 1.0, -0.5);
  CHECK(v.tail_bound < 1e-14 * std::abs(v.value));
  CHECK(v.terms > 1);
  CHECK_THROWS_AS(gauss_2f1(1, 1, 2, 0.5), Error);
  CHECK_THROWS_AS(gauss_2f1(1, 1, 2, -1.0), Error);
  CHECK_THROWS_AS(gauss_2f1(1, 1, -2.0, -0.3), Error);
}

TEST_CASE("hypergeometric monotone in z for positive parameters") {
  double prev = gauss_2f1(1.25, 0.5, 1.0, -0.56);
  for (double z = -0.55; z <= 0.0; z += 0.01) {
    const double v = gauss_2f1(1.25, 0.5, 1.0, z);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("fractional Laplacian constant") {
  CHECK(rel(FracParams::make(2, 0.5).c_ns, oracle::kCns_2_05) < 1e-12);
  CHECK(rel(FracParams::make(2, 0.25).c_ns, oracle::kCns_2_025) < 1e-12);
  CHECK(rel(FracParams::make(3, 0.75).c_ns, oracle::kCns_3_075) < 1e-12);
  CHECK_THROWS_AS(FracParams::make(2, 0.0), Error);
  CHECK_THROWS_AS(FracParams::make(2, 1.0), Error);
  CHECK_THROWS_AS(FracParams::make(0, 0.5), Error);
}

TEST_CASE("torsion constant of the ball") {
  CHECK(rel(gamma_ns(FracParams::make(2, 0.5)), 2.0 / std::numbers::pi) < 1e-13);
  CHECK(rel(gamma_ns(FracParams::make(2, 0.25)), oracle::kGammaNs_2_025) < 1e-12);
  CHECK(rel(gamma_ns(FracParams::make(3, 0.75)), oracle::kGammaNs_3_075) < 1e-12);
}

TEST_CASE("torsion constant of the ellipsoid") {
  const FracParams p = FracParams::make(2, 0.5);
  CHECK(gamma_nse(p, 0.0) == doctest::Approx(gamma_ns(p)).epsilon(1e-15));
  CHECK(rel(gamma_nse(p, 0.1), oracle::kGammaNse_2_05_01) < 1e-10);
  CHECK(rel(gamma_nse(FracParams::make(3, 0.75), 0.2), oracle::kGammaNse_3_075_02) < 1e-10);
  CHECK_THROWS_AS(gamma_nse(p, 0.25), Error);
  CHECK_THROWS_AS(gamma_nse(p, -0.01), Error);
}

TEST_CASE("ellipsoid constant is Lipschitz in eps at 0") {
  for (int n : {2, 3}) {
    for (double s : {0.25, 0.5, 0.75}) {
      const FracParams p = FracParams::make(n, s);
      double c = 0.0;
      for (double eps : {1e-2, 1e-3, 1e-4}) {
        c = std::max(c, std::abs(gamma_nse(p, eps) - gamma_ns(p)) / eps);
      }
      CHECK(std::isfinite(c));
      CHECK(c < 10.0);
      // linear extrapolation to 0 from steps 1e-6, 2e-6
      const double limit = 2.0 * gamma_nse(p, 1e-6) - gamma_nse(p, 2e-6);
      CHECK(std::abs(limit - gamma_ns(p)) < 1e-8);
    }
  }
}
