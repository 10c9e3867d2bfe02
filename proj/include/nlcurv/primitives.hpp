#pragma once

#include <cstdint>
#include <vector>
#include <string>

#include <Eigen/Core>

#include "nlcurv/surface.hpp"

namespace nlcurv {

enum class PrimitiveKind { circle, sphere_icosub, ellipsoid, torus, perturbed_sphere };

PrimitiveKind primitive_kind_from_string(const std::string& name);
std::string to_string(PrimitiveKind kind);

struct PrimitiveParams {
  PrimitiveKind kind = PrimitiveKind::sphere_icosub;
  /// circle: number of segments; icosphere family: subdivision level;
  /// torus: segments around the central ring.
  int resolution = 3;
  /// torus only: segments around the tube (0 picks resolution / 2).
  int resolution_minor = 0;
  double radius = 1.0;
  /// ellipsoid semi-axes
  Eigen::Vector3d axes = Eigen::Vector3d::Ones();
  /// torus tube radius
  double minor_radius = 0.5;
  double amplitude = 0.0;
  std::uint64_t seed = 0;
  /// circle only: embed the polygon in the z = 0 plane of 3-space
  /// (codimension-two curve)
  bool embed_in_3d = false;
};

Surface make_primitive(const PrimitiveParams& params);

// Shorthands for the common shapes.
Surface make_circle(double radius, int segments, bool embed_in_3d = false);
Surface make_icosphere(double radius, int subdivisions);
Surface make_ellipsoid(const Eigen::Vector3d& axes, int subdivisions);
Surface make_torus(double major, double minor, int segments_major, int segments_minor);
Surface make_perturbed_sphere(double radius, int subdivisions, double amplitude, std::uint64_t seed);

/// Icosahedron with midpoint subdivision but without projection: the same
/// polyhedron, finer triangulation.
Surface make_flat_icosahedron(double radius, int subdivisions);

/// Two unit spheres joined by a cylindrical neck of radius `neck_radius`.
/// The gap between the facing poles of the bulbs equals `gap` (when
/// `gap <= 0`, twice the neck radius is used). Built as a surface of
/// revolution about the z axis.
Surface make_dumbbell(double neck_radius, double gap, int profile_samples, int ring_segments);

/// Open flat disc in the z = 0 plane with unit normal +z (test fixture).
Surface make_flat_disc(double radius, int rings);

/// Open straight polyline along the x axis in the plane (test fixture).
Surface make_flat_strip(double length, int segments);

/// Radial perturbation field of `make_perturbed_sphere`: a seeded
/// combination of real spherical harmonics of degree 2..4 scaled to unit sup
/// norm, so `amplitude` is the largest relative radial displacement.
class PerturbationField {
 public:
  explicit PerturbationField(std::uint64_t seed);
  double operator()(const Eigen::Vector3d& direction) const;

 private:
  double raw(const Eigen::Vector3d& direction) const;
  std::vector<double> coeffs_;
  double scale_ = 1;
};

double perturbation_field(const Eigen::Vector3d& direction, std::uint64_t seed);

/// Real spherical harmonic of degree l and order m (|m| <= l), orthonormal on
/// the unit sphere.
double real_spherical_harmonic(int l, int m, const Eigen::Vector3d& direction);

}  // namespace nlcurv
