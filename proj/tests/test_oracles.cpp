#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlcurv/errors.hpp"
#include "nlcurv/oracles.hpp"

using namespace nlcurv;

TEST_CASE("circle oracle: closed form against quadrature") {
  for (int k = 1; k <= 9; ++k) {
    const double s = 0.1 * k;
    const auto q = circle_fmc_quadrature(1.0, s);
    CHECK(q.error < 1e-10);
    CHECK(std::abs(circle_fmc(1.0, s) - q.value) < 1e-10);
    CHECK(circle_fmc_oracle(1.0, s).error_estimate < 1e-10);
  }
  CHECK(circle_fmc(1.0, 0.5) == doctest::Approx(-3.70815).epsilon(1e-5));
  CHECK(circle_fmc(4.0, 0.5) == doctest::Approx(circle_fmc(1.0, 0.5) / 2).epsilon(1e-14));
  // (1 - s)|H_s| -> 1 as s -> 1
  CHECK((1 - 0.999) * std::abs(circle_fmc(1.0, 0.999)) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("sphere oracle: closed form against quadrature") {
  for (int k = 1; k <= 9; ++k) {
    const double s = 0.1 * k;
    const auto q = sphere_fmc_quadrature(1.0, s);
    CHECK(q.error < 1e-10);
    CHECK(std::abs(sphere_fmc(1.0, s) - q.value) < 1e-10 * std::abs(q.value) + 1e-10);
  }
  CHECK(sphere_fmc(1.0, 0.5) == doctest::Approx(-4 * std::numbers::pi / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(sphere_fmc(1.0, 0.5) == doctest::Approx(-8.88577).epsilon(1e-5));
  CHECK(sphere_fmc(2.0, 0.5) == doctest::Approx(sphere_fmc(1.0, 0.5) / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(sphere_fmc(1.0, 0.9) == doctest::Approx(-33.66).epsilon(1e-3));
}

TEST_CASE("oracle monotonicity in the radius") {
  for (double s : {0.2, 0.5, 0.8}) {
    double prev = std::abs(circle_fmc(0.25, s));
    for (double R = 0.5; R <= 8.0; R *= 2) {
      const double cur = std::abs(circle_fmc(R, s));
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("scaling exponents and tangent radius") {
  CHECK(expected_scaling_exponent(1, 0.5, 4) == -1.0);
  CHECK(expected_scaling_exponent(2, 0.5, 4) == 0.0);
  CHECK(expected_scaling_exponent(2, 0.6, 5) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(tangent_radius_circle(3.0) == 6.0);
  CHECK_THROWS_AS(circle_fmc(-1.0, 0.5), InvalidParams);
  CHECK_THROWS_AS(sphere_fmc(1.0, 1.0), InvalidParams);
}

TEST_CASE("circle tangent-point energy by quadrature") {
  // p = 2, q = 6: the integrand is constant 1/4, so T = (2 pi)^2 / 4 * 4 = pi^2
  const auto t = circle_tangent_point_energy(1.0, 2.0, 6.0);
  CHECK(t.value == doctest::Approx(std::numbers::pi * std::numbers::pi).epsilon(1e-12));
  // 3p - q = -0.5: compare with the Beta-function closed form
  const double p = 1.5, q = 5.0, a = 3 * p - q;
  const double closed = 2 * std::numbers::pi * std::pow(2.0, 2 * p - q) * 4.0 *
                        (0.5 * std::sqrt(std::numbers::pi) * std::tgamma((a + 1) / 2) / std::tgamma(a / 2 + 1));
  CHECK(circle_tangent_point_energy(1.0, p, q).value == doctest::Approx(closed).epsilon(1e-10));
  CHECK_THROWS_AS(circle_tangent_point_energy(1.0, 1.0, 5.0), InvalidParams);
}
