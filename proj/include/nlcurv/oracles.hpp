#pragma once

#include <map>
#include <string>

#include "nlcurv/integrate.hpp"

namespace nlcurv {

/// Reference value with provenance, as printed by the `oracle` command.
struct OracleValue {
  std::string quantity;
  std::map<std::string, double> inputs;
  double value = 0;
  std::string method;
  double error_estimate = 0;
};

/// Fractional mean curvature (c_s = 1) of a circle of radius R with outward
/// normal: -2^-s R^-s sqrt(pi) Gamma((1-s)/2) / Gamma(1-s/2).
double circle_fmc(double radius, double s);

/// The same quantity by adaptive quadrature of
/// -2^(-1-s) R^-s * integral_0^2pi sin^-s(theta/2) dtheta.
IntegrationResult circle_fmc_quadrature(double radius, double s);

/// Fractional mean curvature (c_s = 1) of a round 2-sphere of radius R:
/// -2^(1-s) pi R^-s / (1-s).
double sphere_fmc(double radius, double s);

/// The same quantity by adaptive quadrature of the polar-angle reduction
/// -2^-s pi R^-s * integral_0^pi sin^-s(phi/2) cos(phi/2) dphi.
IntegrationResult sphere_fmc_quadrature(double radius, double s);

/// Tangent-point radius of any two distinct points on a circle: 2R.
double tangent_radius_circle(double radius);

/// Energies scale as lambda^(d - s p).
double expected_scaling_exponent(int dim, double s, double p);

/// Tangent-point energy of a circle of radius R (prefactor 1) by 1-D
/// quadrature: 2 pi R^2 (2R)^(2p-q) integral_0^2pi sin^(3p-q)(theta/2) dtheta.
/// Requires 3p - q > -1.
IntegrationResult circle_tangent_point_energy(double radius, double p, double q);

/// Closed form with a quadrature cross-check; error_estimate is the
/// disagreement between the two routes.
OracleValue circle_fmc_oracle(double radius, double s);
OracleValue sphere_fmc_oracle(double radius, double s);
OracleValue tangent_radius_circle_oracle(double radius);
OracleValue scaling_exponent_oracle(int dim, double s, double p);

}  // namespace nlcurv
