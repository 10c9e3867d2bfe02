#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlcurv/functionals.hpp"
#include "nlcurv/quadrature.hpp"
#include "nlcurv/surface.hpp"

namespace nlcurv {

struct SchemeOptions {
  QuadratureOrder order = QuadratureOrder::gauss3;
  DiagonalPolicy policy = DiagonalPolicy::skip_same_element;
};

struct GradientResult {
  double energy = 0;
  PointMatrix<double> gradient;  // V x n
  /// one-sided slopes (E(x + delta e) - E(x)) / delta and
  /// (E(x) - E(x - delta e)) / delta; they disagree in sign at kinks of the
  /// energy
  PointMatrix<double> forward, backward;
};

/// Central finite differences of the bending energy with respect to every
/// vertex coordinate, step h times the mean length of the edges at the
/// vertex. A perturbation only moves the samples of the vertex star, so each
/// difference is assembled from the changed kernel terms alone.
GradientResult energy_gradient(const Surface& mesh, const SchemeOptions& scheme, const EnergyParameters& params,
                               double h = 1e-4, int workers = 0);

/// Uniform rescale about the measure centroid to unit measure.
Surface project_area(const Surface& mesh);

struct TrajectoryRow {
  int iteration = 0;
  double energy = 0;
  double area = 0;
  double grad_norm = 0;
  double hausdorff = 0;
  double step = 0;
};

struct FlowOptions {
  int max_iter = 100;
  /// largest vertex displacement of a trial, in units of the mean edge length
  double step0 = 0.05;
  double shrink = 0.5;
  double min_step = 1e-10;
  /// stop when max|grad| * mean edge length / energy falls below this
  double grad_tol = 1e-7;
  /// descend along the vertex-normal component of the gradient only; the
  /// tangential part mostly reshuffles the triangulation
  bool normal_descent = true;
  /// weight alpha of the (I + alpha L) smoothing applied to the normal speed,
  /// L the graph Laplacian; 0 disables
  double preconditioner = 50.0;
  bool smoothing = false;
  double smoothing_weight = 0.1;
  double fd_step = 1e-4;
  int hausdorff_samples = 1000;
  int workers = 0;
  std::function<void(const struct FlowState&)> on_accept;
};

struct FlowState {
  Surface mesh;
  int iteration = 0;
  int accepted = 0;
  double energy = 0;
  double area = 0;
  double grad_norm = 0;
  double step = 0;
  std::string stop_reason;
  std::vector<std::string> warnings;
  std::vector<TrajectoryRow> trajectory;
};

/// Backtracking descent on the bending energy under the unit-measure
/// constraint: trial = project_area(mesh - step * grad), optionally smoothed,
/// accepted iff the energy decreases.
FlowState minimize(const Surface& mesh, const SchemeOptions& scheme, const EnergyParameters& params,
                   const FlowOptions& options = {});

/// Hausdorff distance to the least-squares sphere (NaN for space curves).
double hausdorff_to_best_sphere(const Surface& mesh, int samples = 1000, int workers = 0);

}  // namespace nlcurv
