#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nlcurv/geodesic.hpp"
#include "nlcurv/patch.hpp"
#include "nlcurv/surface.hpp"

namespace nlcurv {

struct PatchOptions {
  double grad_bound = 0.5;
  /// lattice spacing and radius increment; <= 0 picks diameter / 400
  double grid_step = 0;
  /// exponent of the reported gradient Holder seminorm
  double holder_exponent = 0.5;
  /// the Holder seminorm is O(K^2) in the node count
  bool compute_holder = true;
};

/// Graph chart of the surface over the tangent plane at `vertex`: the disc
/// grows in steps of grid_step while every lattice node sees exactly one
/// surface sheet within height |t| <= radius and the interpolated gradient
/// stays within grad_bound.
PatchChart extract_patch(const Surface& mesh, Eigen::Index vertex, const PatchOptions& options = {});

/// Largest valid patch radius at every vertex (no Holder seminorm).
Eigen::VectorXd patch_radius_field(const Surface& mesh, const PatchOptions& options, int workers = 0);

/// Exact measure of the part of `mesh` inside the closed ball B(center, r).
double measure_in_ball(const Surface& mesh, const Eigen::VectorXd& center, double r);

/// (r, measure of mesh inside B(x_vertex, r) / r^d) for each radius.
std::vector<std::pair<double, double>> ahlfors_ratio(const Surface& mesh, Eigen::Index vertex,
                                                     const std::vector<double>& radii);

struct ChordArcResult {
  double gamma = 1;
  Eigen::Index witness_a = -1;
  Eigen::Index witness_b = -1;
  int sources = 0;
};

/// max d_graph(x, y) / |x - y| over pairs with x among `sample_sources`
/// seeded vertices and y any vertex. Uses every vertex as a source when
/// sample_sources >= V. `steiner` is the number of graph nodes per edge.
ChordArcResult chord_arc_constant(const Surface& mesh, int sample_sources, std::uint64_t seed, int workers = 0,
                                  int steiner = kDefaultSteinerPoints);

struct StabilityReport {
  Eigen::VectorXd center;
  double R0 = 0;
  double u_seminorm = 0;
  double hausdorff = 0;
  bool starshaped = false;
};

/// Euclidean distance from `point` to the mesh (closest point on any element).
double distance_to_mesh(const Surface& mesh, const Eigen::VectorXd& point);

/// Hausdorff distance between the mesh and the sphere S(center, radius): the
/// vertex side uses | |x_i - center| - radius |, the sphere side samples
/// `sphere_samples` Fibonacci points and measures their distance to the mesh.
double hausdorff_to_sphere(const Surface& mesh, const Eigen::VectorXd& center, double radius,
                           int sphere_samples = 2000, int workers = 0);

struct SphereFit {
  Eigen::VectorXd center;
  double radius = 0;
};

/// Algebraic least-squares sphere (or circle) through the vertices.
SphereFit fit_sphere(const Surface& mesh);

StabilityReport stability_probe(const Surface& mesh, double alpha = 0.5, double q = 2.0,
                                int sphere_samples = 2000, int workers = 0);

}  // namespace nlcurv
