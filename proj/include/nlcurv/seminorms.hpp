#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nlcurv/errors.hpp"
#include "nlcurv/geodesic.hpp"
#include "nlcurv/parallel.hpp"
#include "nlcurv/patch.hpp"
#include "nlcurv/surface.hpp"

namespace nlcurv {

enum class DistanceMode { extrinsic, intrinsic };

inline std::string to_string(DistanceMode m) { return m == DistanceMode::extrinsic ? "extrinsic" : "intrinsic"; }

inline DistanceMode distance_mode_from_string(const std::string& s) {
  if (s == "extrinsic") return DistanceMode::extrinsic;
  if (s == "intrinsic") return DistanceMode::intrinsic;
  throw InvalidParams("unknown distance mode '" + s + "'");
}

/// One real value per mesh vertex.
template <typename Scalar>
struct ScalarField {
  const DiscreteHypersurface<Scalar>* mesh = nullptr;
  VectorX<Scalar> values;

  ScalarField(const DiscreteHypersurface<Scalar>& m, VectorX<Scalar> v) : mesh(&m), values(std::move(v)) {
    if (values.size() != m.num_vertices()) throw InvalidParams("field length must equal the vertex count");
    if (!values.allFinite()) throw InvalidParams("field values must be finite");
  }
};

struct SeminormReport {
  std::string kind;
  double alpha = 0, q = 0, beta = 0, s = 0, p = 0;
  double value = 0;
  DistanceMode distance_mode = DistanceMode::extrinsic;
};

namespace detail {

// Row i of the pairwise vertex distance matrix, in double precision for
// the intrinsic mode.
template <typename Scalar>
class DistanceRows {
 public:
  DistanceRows(const DiscreteHypersurface<Scalar>& mesh, DistanceMode mode) : mesh_(mesh), mode_(mode) {
    if (mode == DistanceMode::intrinsic) {
      graph_ = build_geodesic_graph(mesh);
      if (!is_connected(graph_)) throw DisconnectedMesh("intrinsic distance needs a connected mesh");
    }
  }

  void row(Eigen::Index i, std::vector<Scalar>& out) const {
    const Eigen::Index V = mesh_.num_vertices();
    out.resize(static_cast<std::size_t>(V));
    if (mode_ == DistanceMode::extrinsic) {
      for (Eigen::Index j = 0; j < V; ++j)
        out[static_cast<std::size_t>(j)] = (mesh_.vertices().row(i) - mesh_.vertices().row(j)).norm();
    } else {
      const auto d = shortest_paths(graph_, static_cast<int>(i));
      std::copy(d.begin(), d.begin() + V, out.begin());
    }
  }

 private:
  const DiscreteHypersurface<Scalar>& mesh_;
  DistanceMode mode_;
  GeodesicGraph<Scalar> graph_;
};

}  // namespace detail

/// (sum_{i != j} |f_i - f_j|^q / dist(x_i, x_j)^(d + alpha q) w_i w_j)^(1/q)
/// with vertex measures as weights.
template <typename Scalar>
Scalar sobolev_seminorm(const ScalarField<Scalar>& field, double alpha, double q,
                        DistanceMode mode = DistanceMode::extrinsic, int workers = 0) {
  if (!(alpha > 0 && alpha <= 1)) throw InvalidParams("alpha must lie in (0,1]");
  if (!(q > 1)) throw InvalidParams("q must exceed 1");
  const auto& mesh = *field.mesh;
  const Eigen::Index V = mesh.num_vertices();
  const detail::DistanceRows<Scalar> dist(mesh, mode);
  const Scalar expo = Scalar(mesh.dim() + alpha * q);
  VectorX<Scalar> rows(V);
  parallel_for(V, workers, [&](Eigen::Index i) {
    std::vector<Scalar> d;
    dist.row(i, d);
    VectorX<Scalar> terms = VectorX<Scalar>::Zero(V);
    for (Eigen::Index j = 0; j < V; ++j) {
      if (j == i) continue;
      const Scalar r = d[static_cast<std::size_t>(j)];
      if (!(r > 0)) throw DegenerateGeometry("two distinct vertices at zero distance");
      terms(j) = std::pow(std::abs(field.values(i) - field.values(j)), Scalar(q)) / std::pow(r, expo) *
                 mesh.vertex_measures()(j);
    }
    rows(i) = pairwise_sum(terms) * mesh.vertex_measures()(i);
  });
  return std::pow(pairwise_sum(rows), Scalar(1.0 / q));
}

/// (sum_i |f_i|^q w_i)^(1/q).
template <typename Scalar>
Scalar lq_norm(const ScalarField<Scalar>& field, double q) {
  if (!(q >= 1)) throw InvalidParams("q must be at least 1");
  VectorX<Scalar> terms = field.values.array().abs().pow(Scalar(q)) * field.mesh->vertex_measures().array();
  return std::pow(pairwise_sum(terms), Scalar(1.0 / q));
}

/// max_{i != j} |f_i - f_j| / dist(x_i, x_j)^beta.
template <typename Scalar>
Scalar holder_seminorm(const ScalarField<Scalar>& field, double beta, DistanceMode mode = DistanceMode::extrinsic,
                       int workers = 0) {
  if (!(beta > 0 && beta <= 1)) throw InvalidParams("beta must lie in (0,1]");
  const auto& mesh = *field.mesh;
  const Eigen::Index V = mesh.num_vertices();
  const detail::DistanceRows<Scalar> dist(mesh, mode);
  VectorX<Scalar> rows(V);
  parallel_for(V, workers, [&](Eigen::Index i) {
    std::vector<Scalar> d;
    dist.row(i, d);
    Scalar best = 0;
    for (Eigen::Index j = 0; j < V; ++j) {
      if (j == i) continue;
      const Scalar r = d[static_cast<std::size_t>(j)];
      if (!(r > 0)) throw DegenerateGeometry("two distinct vertices at zero distance");
      best = std::max(best, Scalar(std::abs(field.values(i) - field.values(j)) / std::pow(r, Scalar(beta))));
    }
    rows(i) = best;
  });
  return V > 1 ? rows.maxCoeff() : Scalar(0);
}

/// sum_x (sum_{y != x} |f(x) - f(y) - Df(y)(x - y)| / |x - y|^(d+1+s) h^d)^p h^d
/// over the patch lattice of spacing h.
double graph_linearization_functional(const PatchChart& patch, double s, double p, int workers = 0);

struct MorreyCheck {
  double lhs = 0;  ///< [Df]_{C^(s - d/p)} over the inner 3/4 disc
  double rhs = 0;  ///< graph_linearization_functional^(1/p)
};

MorreyCheck morrey_check(const PatchChart& patch, double s, double p, int workers = 0);

}  // namespace nlcurv
