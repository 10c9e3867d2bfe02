#pragma once

#include <functional>

#include <Eigen/Dense>

namespace nlcurv {

/// Local graph representation x0 + P^T (x, f(x)) of a surface over a planar
/// disc, sampled on a square lattice of nodes.
struct PatchChart {
  Eigen::Index base_vertex = -1;
  /// rows are the tangent basis followed by the vertex normal
  Eigen::MatrixXd rotation;
  Eigen::VectorXd origin;
  double radius = 0;
  double spacing = 0;
  Eigen::MatrixXd nodes;      // K x d planar coordinates
  Eigen::VectorXd heights;    // K
  Eigen::MatrixXd gradients;  // K x d
  double grad_sup = 0;
  double grad_holder = 0;
  double holder_exponent = 0;

  int dim() const { return static_cast<int>(nodes.cols()); }
  Eigen::Index size() const { return nodes.rows(); }
};

/// Lattice nodes of spacing `step` inside the closed disc of radius `radius`
/// in R^dim, ordered lexicographically.
Eigen::MatrixXd disc_lattice(int dim, double radius, double step);

/// Patch of an explicit height function on a disc lattice (tests and
/// reference computations).
PatchChart patch_from_function(int dim, double radius, double step,
                               const std::function<double(const Eigen::VectorXd&)>& f,
                               const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& df);

}  // namespace nlcurv
