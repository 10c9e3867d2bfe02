#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nlcurv/parallel.hpp"
#include "nlcurv/parameters.hpp"
#include "nlcurv/quadrature.hpp"
#include "nlcurv/surface.hpp"

namespace nlcurv {

/// How the offset x - y is paired with the normal geometry at y.
enum class Pairing {
  signed_normal,  ///< <x - y, n(y)>
  abs_normal,     ///< |<x - y, n(y)>|
  projection,     ///< |P_perp(y)(x - y)|, the normal-space projection
};

template <typename Scalar>
struct EnergyReport {
  std::string quantity;
  Scalar energy = 0;
  EnergyParameters params;
  Eigen::Index num_vertices = 0;
  Eigen::Index num_elements = 0;
  Scalar area = 0;
  Scalar diameter = 0;
  std::string scheme;
  std::string diagonal_policy;
  double wall_time_s = 0;
};

namespace detail {

template <typename Scalar>
Scalar degenerate_cutoff_sq(const DiscreteHypersurface<Scalar>& mesh) {
  const Scalar c = Scalar(1e-14) * mesh.diameter();
  return c * c;
}

template <typename Scalar>
void check_pairing(const DiscreteHypersurface<Scalar>& mesh, Pairing pairing) {
  if (pairing != Pairing::projection && !mesh.is_hypersurface())
    throw UnsupportedMode("normal pairing needs a hypersurface; use projection mode for codimension-two curves");
}

/// Sum over target samples of term(pairing, |x-y|^2) * w(y), skipping the
/// sorted `excluded` elements. Summation order is the sample order.
template <typename Scalar, typename Term>
Scalar kernel_sum(const DiscreteHypersurface<Scalar>& mesh, const QuadratureScheme<Scalar>& scheme,
                  const Scalar* x, const std::vector<int>& excluded, Pairing pairing, Term&& term) {
  const int n = mesh.ambient_dim();
  const Scalar cutoff = degenerate_cutoff_sq(mesh);
  const bool use_tangent = pairing == Pairing::projection && !mesh.is_hypersurface();
  const Scalar* pts = scheme.points.data();
  const Scalar* w = scheme.weights.data();
  auto skip = excluded.begin();
  Scalar acc = 0;
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
    while (skip != excluded.end() && *skip < e) ++skip;
    if (skip != excluded.end() && *skip == e) continue;
    const Scalar* dir = use_tangent ? mesh.element_tangents().data() + e * n
                                    : mesh.element_normals().data() + e * n;
    for (Eigen::Index j = scheme.offset[static_cast<std::size_t>(e)];
         j < scheme.offset[static_cast<std::size_t>(e) + 1]; ++j) {
      Scalar diff[3];
      Scalar r2 = 0, dot = 0;
      for (int k = 0; k < n; ++k) {
        diff[k] = x[k] - pts[j * n + k];
        r2 += diff[k] * diff[k];
        dot += diff[k] * dir[k];
      }
      if (r2 < cutoff)
        throw DegenerateGeometry("outer point coincides with a non-excluded sample of element " +
                                 std::to_string(e));
      Scalar pair;
      if (pairing == Pairing::signed_normal) {
        pair = dot;
      } else if (!use_tangent) {
        pair = std::abs(dot);
      } else {
        Scalar perp2 = 0;
        for (int k = 0; k < n; ++k) {
          const Scalar c = diff[k] - dot * dir[k];
          perp2 += c * c;
        }
        pair = std::sqrt(perp2);
      }
      acc += term(pair, r2) * w[j];
    }
  }
  return acc;
}

/// c_s * integral of pairing / |x-y|^(d+1+s) at x.
template <typename Scalar>
Scalar curvature_at(const DiscreteHypersurface<Scalar>& mesh, const QuadratureScheme<Scalar>& scheme,
                    const Scalar* x, const std::vector<int>& excluded, const EnergyParameters& params,
                    Pairing pairing) {
  const Scalar half_exp = Scalar(-(mesh.dim() + 1 + params.s) / 2.0);
  const Scalar sum = kernel_sum(mesh, scheme, x, excluded, pairing,
                                [half_exp](Scalar pair, Scalar r2) { return pair * std::pow(r2, half_exp); });
  return Scalar(params.c_s()) * sum;
}

template <typename Scalar>
Pairing pairing_for(const EnergyParameters& params, bool absolute) {
  if (!absolute) return Pairing::signed_normal;
  return params.codim == CodimMode::projection ? Pairing::projection : Pairing::abs_normal;
}

template <typename Scalar>
EnergyReport<Scalar> make_report(const std::string& quantity, Scalar energy,
                                 const DiscreteHypersurface<Scalar>& mesh,
                                 const QuadratureScheme<Scalar>& scheme, const EnergyParameters& params,
                                 std::chrono::steady_clock::time_point start) {
  EnergyReport<Scalar> r;
  r.quantity = quantity;
  r.energy = energy;
  r.params = params;
  r.num_vertices = mesh.num_vertices();
  r.num_elements = mesh.num_elements();
  r.area = area(mesh);
  r.diameter = mesh.diameter();
  r.scheme = scheme.descriptor();
  r.diagonal_policy = to_string(scheme.policy);
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace detail

/// Fractional mean curvature at a mesh vertex (outward normals, so convex
/// bodies give non-positive values).
template <typename Scalar>
Scalar fractional_mean_curvature(const DiscreteHypersurface<Scalar>& mesh,
                                 const QuadratureScheme<Scalar>& scheme, Eigen::Index vertex,
                                 const EnergyParameters& params) {
  params.validate();
  if (!mesh.is_hypersurface() || params.codim != CodimMode::hypersurface)
    throw UnsupportedMode("fractional mean curvature is defined for hypersurfaces only");
  if (vertex < 0 || vertex >= mesh.num_vertices()) throw InvalidParams("vertex index out of range");
  return detail::curvature_at(mesh, scheme, mesh.vertices().row(vertex).data(),
                              excluded_for_vertex(mesh, vertex, scheme.policy), params,
                              Pairing::signed_normal);
}

/// Nonlocal second fundamental form |A|_s at a mesh vertex; in projection
/// mode the normal-space projection replaces the normal pairing.
template <typename Scalar>
Scalar nonlocal_second_fundamental(const DiscreteHypersurface<Scalar>& mesh,
                                   const QuadratureScheme<Scalar>& scheme, Eigen::Index vertex,
                                   const EnergyParameters& params) {
  params.validate();
  const Pairing pairing = detail::pairing_for<Scalar>(params, true);
  detail::check_pairing(mesh, pairing);
  if (vertex < 0 || vertex >= mesh.num_vertices()) throw InvalidParams("vertex index out of range");
  return detail::curvature_at(mesh, scheme, mesh.vertices().row(vertex).data(),
                              excluded_for_vertex(mesh, vertex, scheme.policy), params, pairing);
}

/// Pointwise values at every vertex.
template <typename Scalar>
VectorX<Scalar> vertex_curvature_field(const DiscreteHypersurface<Scalar>& mesh,
                                       const QuadratureScheme<Scalar>& scheme,
                                       const EnergyParameters& params, bool absolute, int workers = 0) {
  params.validate();
  const Pairing pairing = detail::pairing_for<Scalar>(params, absolute);
  detail::check_pairing(mesh, pairing);
  if (!absolute && params.codim != CodimMode::hypersurface)
    throw UnsupportedMode("fractional mean curvature is defined for hypersurfaces only");
  VectorX<Scalar> out(mesh.num_vertices());
  parallel_for(mesh.num_vertices(), workers, [&](Eigen::Index v) {
    out(v) = detail::curvature_at(mesh, scheme, mesh.vertices().row(v).data(),
                                  excluded_for_vertex(mesh, v, scheme.policy), params, pairing);
  });
  return out;
}

/// Pointwise values at every quadrature sample (the outer points of the
/// energies).
template <typename Scalar>
VectorX<Scalar> sample_curvature_field(const DiscreteHypersurface<Scalar>& mesh,
                                       const QuadratureScheme<Scalar>& scheme,
                                       const EnergyParameters& params, Pairing pairing, int workers = 0) {
  params.validate();
  detail::check_pairing(mesh, pairing);
  VectorX<Scalar> out(scheme.size());
  parallel_for(static_cast<Eigen::Index>(mesh.num_elements()), workers, [&](Eigen::Index e) {
    for (Eigen::Index i = scheme.offset[static_cast<std::size_t>(e)];
         i < scheme.offset[static_cast<std::size_t>(e) + 1]; ++i)
      out(i) = detail::curvature_at(mesh, scheme, scheme.points.row(i).data(),
                                    excluded_for_sample(mesh, scheme, i), params, pairing);
  });
  return out;
}

/// sum_i |value_i|^p w_i with a fixed-order pairwise reduction.
template <typename Scalar>
Scalar lp_energy(const VectorX<Scalar>& values, const VectorX<Scalar>& weights, double p) {
  VectorX<Scalar> density(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i)
    density(i) = std::pow(std::abs(values(i)), Scalar(p)) * weights(i);
  return pairwise_sum(density);
}

/// Fractional Willmore energy: integral of |H_s|^p over the outer samples.
template <typename Scalar>
EnergyReport<Scalar> willmore_energy(const DiscreteHypersurface<Scalar>& mesh,
                                     const QuadratureScheme<Scalar>& scheme, const EnergyParameters& params,
                                     int workers = 0) {
  const auto start = std::chrono::steady_clock::now();
  if (!mesh.is_hypersurface() || params.codim != CodimMode::hypersurface)
    throw UnsupportedMode("the Willmore energy is defined for hypersurfaces only");
  const VectorX<Scalar> h = sample_curvature_field(mesh, scheme, params, Pairing::signed_normal, workers);
  return detail::make_report("willmore", lp_energy(h, scheme.weights, params.p), mesh, scheme, params, start);
}

/// Nonlocal bending energy: integral of |A|_s^p. Works for codimension-two
/// curves in projection mode.
template <typename Scalar>
EnergyReport<Scalar> bending_energy(const DiscreteHypersurface<Scalar>& mesh,
                                    const QuadratureScheme<Scalar>& scheme, const EnergyParameters& params,
                                    int workers = 0) {
  const auto start = std::chrono::steady_clock::now();
  const Pairing pairing = detail::pairing_for<Scalar>(params, true);
  const VectorX<Scalar> a = sample_curvature_field(mesh, scheme, params, pairing, workers);
  return detail::make_report("bending", lp_energy(a, scheme.weights, params.p), mesh, scheme, params, start);
}

/// |x-y|^2 / |<n_y, x-y>|, or +infinity when the pairing is below
/// 1e-14 |x-y|^2.
template <typename Scalar, int N>
Scalar tangent_point_radius(const Eigen::Matrix<Scalar, N, 1>& x, const Eigen::Matrix<Scalar, N, 1>& y,
                            const Eigen::Matrix<Scalar, N, 1>& n_y) {
  const Eigen::Matrix<Scalar, N, 1> diff = x - y;
  const Scalar r2 = diff.squaredNorm();
  if (!(r2 > Scalar(0))) throw InvalidParams("tangent-point radius needs distinct points");
  const Scalar pair = std::abs(n_y.dot(diff));
  if (pair < Scalar(1e-14) * r2) return std::numeric_limits<Scalar>::infinity();
  return r2 / pair;
}

/// Tangent-point energy |c_s|^p * sum sum |pairing|^p / |x-y|^(q-p) w(x) w(y)
/// with exponents params.p < params.q.
template <typename Scalar>
EnergyReport<Scalar> tangent_point_energy(const DiscreteHypersurface<Scalar>& mesh,
                                          const QuadratureScheme<Scalar>& scheme,
                                          const EnergyParameters& params, int workers = 0) {
  const auto start = std::chrono::steady_clock::now();
  params.validate();
  if (!(params.q > params.p)) throw InvalidParams("tangent-point energy needs q > p > 0");
  const Pairing pairing = detail::pairing_for<Scalar>(params, true);
  detail::check_pairing(mesh, pairing);
  const Scalar p = Scalar(params.p);
  const Scalar half_exp = Scalar(-(params.q - params.p) / 2.0);
  VectorX<Scalar> density(scheme.size());
  parallel_for(static_cast<Eigen::Index>(mesh.num_elements()), workers, [&](Eigen::Index e) {
    for (Eigen::Index i = scheme.offset[static_cast<std::size_t>(e)];
         i < scheme.offset[static_cast<std::size_t>(e) + 1]; ++i) {
      const Scalar inner = detail::kernel_sum(
          mesh, scheme, scheme.points.row(i).data(), excluded_for_sample(mesh, scheme, i), pairing,
          [p, half_exp](Scalar pair, Scalar r2) { return std::pow(pair, p) * std::pow(r2, half_exp); });
      density(i) = inner * scheme.weights(i);
    }
  });
  const Scalar energy = Scalar(params.c_sp()) * pairwise_sum(density);
  return detail::make_report("tangent_point", energy, mesh, scheme, params, start);
}

}  // namespace nlcurv
