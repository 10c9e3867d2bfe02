#include "nlcurv/oracles.hpp"

#include <cmath>
#include <numbers>

#include "nlcurv/errors.hpp"

namespace nlcurv {
namespace {

constexpr double kPi = std::numbers::pi;

void check(double radius, double s) {
  if (!(radius > 0)) throw InvalidParams("radius must be positive");
  if (!(s > 0 && s < 1)) throw InvalidParams("s must lie in (0,1)");
}

// integral_0^(pi/2) sin^a(u) g(u) du for a > -1 and smooth g. For a < 0 the
// substitution t = u^(1+a) removes the endpoint singularity.
template <typename G>
IntegrationResult sine_power_integral(double a, G g) {
  if (a >= 0) {
    return integrate_adaptive([&](double u) { return std::pow(std::sin(u), a) * g(u); }, 0.0, kPi / 2);
  }
  const double sigma = -a;
  const double upper = std::pow(kPi / 2, 1.0 - sigma);
  return integrate_adaptive(
      [&](double t) {
        if (t <= 0) return g(0.0) / (1.0 - sigma);
        const double u = std::pow(t, 1.0 / (1.0 - sigma));
        return std::pow(u / std::sin(u), sigma) * g(u) / (1.0 - sigma);
      },
      0.0, upper);
}

}  // namespace

double circle_fmc(double radius, double s) {
  check(radius, s);
  return -std::pow(2.0, -s) * std::pow(radius, -s) * std::sqrt(kPi) * std::tgamma((1.0 - s) / 2.0) /
         std::tgamma(1.0 - s / 2.0);
}

IntegrationResult circle_fmc_quadrature(double radius, double s) {
  check(radius, s);
  // integral_0^2pi sin^-s(theta/2) dtheta = 4 integral_0^(pi/2) sin^-s(u) du
  const auto base = sine_power_integral(-s, [](double) { return 1.0; });
  const double scale = -std::pow(2.0, -1.0 - s) * std::pow(radius, -s) * 4.0;
  return {scale * base.value, std::abs(scale) * base.error};
}

double sphere_fmc(double radius, double s) {
  check(radius, s);
  return -std::pow(2.0, 1.0 - s) * kPi * std::pow(radius, -s) / (1.0 - s);
}

IntegrationResult sphere_fmc_quadrature(double radius, double s) {
  check(radius, s);
  // integral_0^pi sin^-s(phi/2) cos(phi/2) dphi = 2 integral_0^(pi/2) sin^-s(u) cos(u) du
  const auto base = sine_power_integral(-s, [](double u) { return std::cos(u); });
  const double scale = -std::pow(2.0, -s) * kPi * std::pow(radius, -s) * 2.0;
  return {scale * base.value, std::abs(scale) * base.error};
}

double tangent_radius_circle(double radius) {
  if (!(radius > 0)) throw InvalidParams("radius must be positive");
  return 2.0 * radius;
}

double expected_scaling_exponent(int dim, double s, double p) { return dim - s * p; }

IntegrationResult circle_tangent_point_energy(double radius, double p, double q) {
  if (!(radius > 0)) throw InvalidParams("radius must be positive");
  if (!(q > p && p > 0)) throw InvalidParams("tangent-point energy needs q > p > 0");
  const double a = 3.0 * p - q;
  if (!(a > -1.0)) throw InvalidParams("circle tangent-point energy diverges for 3p - q <= -1");
  const auto base = sine_power_integral(a, [](double) { return 1.0; });
  const double scale = 2.0 * kPi * radius * radius * std::pow(2.0 * radius, 2.0 * p - q) * 4.0;
  return {scale * base.value, scale * base.error};
}

OracleValue circle_fmc_oracle(double radius, double s) {
  const double closed = circle_fmc(radius, s);
  const auto quad = circle_fmc_quadrature(radius, s);
  return {"circle_fmc", {{"R", radius}, {"s", s}, {"d", 1}}, closed,
          "closed form, cross-checked by adaptive Gauss-Kronrod quadrature",
          std::max(std::abs(closed - quad.value), quad.error)};
}

OracleValue sphere_fmc_oracle(double radius, double s) {
  const double closed = sphere_fmc(radius, s);
  const auto quad = sphere_fmc_quadrature(radius, s);
  return {"sphere_fmc", {{"R", radius}, {"s", s}, {"d", 2}}, closed,
          "closed form, cross-checked by adaptive Gauss-Kronrod quadrature",
          std::max(std::abs(closed - quad.value), quad.error)};
}

OracleValue tangent_radius_circle_oracle(double radius) {
  return {"tangent_radius_circle", {{"R", radius}}, tangent_radius_circle(radius), "closed form", 0.0};
}

OracleValue scaling_exponent_oracle(int dim, double s, double p) {
  return {"scaling_exponent", {{"d", static_cast<double>(dim)}, {"s", s}, {"p", p}},
          expected_scaling_exponent(dim, s, p), "closed form", 0.0};
}

}  // namespace nlcurv
