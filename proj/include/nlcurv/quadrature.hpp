#pragma once

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numbers>
#include <string>
#include <vector>

#include "nlcurv/surface.hpp"

namespace nlcurv {

enum class QuadratureOrder { centroid, gauss3, gauss7 };

/// Which target elements an outer point ignores.
///
/// For an outer point, its host elements are the elements containing it: the
/// vertex star for a vertex, the element itself for a quadrature sample.
/// `skip_same_element` drops the host elements; on flat elements their
/// contribution to the signed and absolute pairings is exactly zero.
/// `skip_vertex_star` drops every element that shares a vertex with a host
/// element. At a vertex the two policies coincide.
enum class DiagonalPolicy { skip_same_element, skip_vertex_star };

inline std::string to_string(QuadratureOrder o) {
  switch (o) {
    case QuadratureOrder::centroid: return "centroid";
    case QuadratureOrder::gauss3: return "gauss3";
    case QuadratureOrder::gauss7: return "gauss7";
  }
  return "unknown";
}
inline std::string to_string(DiagonalPolicy p) {
  return p == DiagonalPolicy::skip_same_element ? "skip_same_element" : "skip_vertex_star";
}
inline QuadratureOrder quadrature_order_from_string(const std::string& s) {
  if (s == "centroid") return QuadratureOrder::centroid;
  if (s == "gauss3") return QuadratureOrder::gauss3;
  if (s == "gauss7") return QuadratureOrder::gauss7;
  throw InvalidParams("unknown quadrature order '" + s + "'");
}
inline DiagonalPolicy diagonal_policy_from_string(const std::string& s) {
  if (s == "skip_same_element") return DiagonalPolicy::skip_same_element;
  if (s == "skip_vertex_star") return DiagonalPolicy::skip_vertex_star;
  throw InvalidParams("unknown diagonal policy '" + s + "'");
}

/// Reference rule on the unit simplex: barycentric nodes (rows) and weights
/// summing to one.
struct ReferenceRule {
  Eigen::MatrixXd barycentric;
  Eigen::VectorXd weights;
};

namespace detail {

// Gauss-Legendre nodes on [0, 1] by Newton iteration on P_n.
inline ReferenceRule gauss_legendre_segment(int n) {
  ReferenceRule rule{Eigen::MatrixXd(n, 2), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double t = 0.5 * (1.0 - x);
    rule.barycentric(i, 0) = 1.0 - t;
    rule.barycentric(i, 1) = t;
    rule.weights(i) = 1.0 / ((1.0 - x * x) * dp * dp);  // 2/(...) on [-1,1], halved
  }
  return rule;
}

inline ReferenceRule triangle_rule(QuadratureOrder order) {
  switch (order) {
    case QuadratureOrder::centroid: {
      ReferenceRule r{Eigen::MatrixXd::Constant(1, 3, 1.0 / 3.0), Eigen::VectorXd::Ones(1)};
      return r;
    }
    case QuadratureOrder::gauss3: {
      ReferenceRule r{Eigen::MatrixXd(3, 3), Eigen::VectorXd::Constant(3, 1.0 / 3.0)};
      r.barycentric << 0.5, 0.5, 0.0,  //
          0.0, 0.5, 0.5,               //
          0.5, 0.0, 0.5;
      return r;
    }
    case QuadratureOrder::gauss7: {
      // degree-5 seven-point rule
      const double r15 = std::sqrt(15.0);
      const double a1 = (9.0 - 2.0 * r15) / 21.0, b1 = (6.0 + r15) / 21.0;
      const double a2 = (9.0 + 2.0 * r15) / 21.0, b2 = (6.0 - r15) / 21.0;
      const double w0 = 9.0 / 40.0, w1 = (155.0 + r15) / 1200.0, w2 = (155.0 - r15) / 1200.0;
      ReferenceRule r{Eigen::MatrixXd(7, 3), Eigen::VectorXd(7)};
      r.barycentric << 1.0 / 3, 1.0 / 3, 1.0 / 3,  //
          a1, b1, b1, b1, a1, b1, b1, b1, a1,      //
          a2, b2, b2, b2, a2, b2, b2, b2, a2;
      r.weights << w0, w1, w1, w1, w2, w2, w2;
      return r;
    }
  }
  throw InvalidParams("unknown quadrature order");
}

}  // namespace detail

/// Reference rule for an element of intrinsic dimension `dim`. On segments,
/// `gauss3` and `gauss7` are the 3- and 7-point Gauss-Legendre rules.
inline ReferenceRule reference_rule(int dim, QuadratureOrder order) {
  if (dim == 2) return detail::triangle_rule(order);
  switch (order) {
    case QuadratureOrder::centroid:
      return ReferenceRule{Eigen::MatrixXd::Constant(1, 2, 0.5), Eigen::VectorXd::Ones(1)};
    case QuadratureOrder::gauss3: return detail::gauss_legendre_segment(3);
    case QuadratureOrder::gauss7: return detail::gauss_legendre_segment(7);
  }
  throw InvalidParams("unknown quadrature order");
}

/// Sample points and weights over a mesh. Samples are ordered by element,
/// then by local node; the weights of each element sum to its measure.
template <typename Scalar>
struct QuadratureScheme {
  QuadratureOrder order = QuadratureOrder::gauss3;
  DiagonalPolicy policy = DiagonalPolicy::skip_vertex_star;
  PointMatrix<Scalar> points;
  VectorX<Scalar> weights;
  std::vector<int> element;
  /// samples of element e are [offset[e], offset[e+1])
  std::vector<Eigen::Index> offset;
  /// bit c set when local vertex c of the host element has a nonzero
  /// barycentric weight; samples on a shared face have some bits clear
  std::vector<unsigned char> support;

  Eigen::Index size() const { return weights.size(); }
  std::string descriptor() const { return to_string(order); }
};

template <typename Scalar>
QuadratureScheme<Scalar> build_scheme(const DiscreteHypersurface<Scalar>& mesh, QuadratureOrder order,
                                      DiagonalPolicy policy) {
  const ReferenceRule rule = reference_rule(mesh.dim(), order);
  const Eigen::Index per = rule.weights.size();
  const Eigen::Index M = mesh.num_elements();
  QuadratureScheme<Scalar> q;
  q.order = order;
  q.policy = policy;
  q.points.resize(M * per, mesh.ambient_dim());
  q.weights.resize(M * per);
  q.element.resize(static_cast<std::size_t>(M * per));
  q.offset.resize(static_cast<std::size_t>(M + 1));
  q.support.resize(static_cast<std::size_t>(M * per));
  for (Eigen::Index e = 0; e < M; ++e) {
    q.offset[static_cast<std::size_t>(e)] = e * per;
    for (Eigen::Index k = 0; k < per; ++k) {
      const Eigen::Index i = e * per + k;
      RowVectorX<Scalar> y = RowVectorX<Scalar>::Zero(mesh.ambient_dim());
      for (int c = 0; c <= mesh.dim(); ++c)
        y += Scalar(rule.barycentric(k, c)) * mesh.vertices().row(mesh.elements()(e, c));
      q.points.row(i) = y;
      q.weights(i) = Scalar(rule.weights(k)) * mesh.element_measures()(e);
      q.element[static_cast<std::size_t>(i)] = static_cast<int>(e);
      unsigned char bits = 0;
      for (int c = 0; c <= mesh.dim(); ++c)
        if (rule.barycentric(k, c) > 0) bits = static_cast<unsigned char>(bits | (1u << c));
      q.support[static_cast<std::size_t>(i)] = bits;
    }
  }
  q.offset[static_cast<std::size_t>(M)] = M * per;
  return q;
}

/// Sorted list of elements an outer point located at vertex `v` ignores.
template <typename Scalar>
std::vector<int> excluded_for_vertex(const DiscreteHypersurface<Scalar>& mesh, Eigen::Index v,
                                     DiagonalPolicy /*policy*/) {
  // both policies drop exactly the vertex star here
  return mesh.vertex_elements()[static_cast<std::size_t>(v)];
}

/// Sorted list of elements an outer sample inside element `e` ignores.
template <typename Scalar>
std::vector<int> excluded_for_element(const DiscreteHypersurface<Scalar>& mesh, Eigen::Index e,
                                      DiagonalPolicy policy) {
  if (policy == DiagonalPolicy::skip_same_element) return {static_cast<int>(e)};
  std::vector<int> out;
  for (int c = 0; c <= mesh.dim(); ++c) {
    const auto& star = mesh.vertex_elements()[static_cast<std::size_t>(mesh.elements()(e, c))];
    out.insert(out.end(), star.begin(), star.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Elements whose closure contains sample `i`: its own element, plus the
/// neighbours across the face it lies on when the sample sits on the
/// element boundary (edge-midpoint nodes of gauss3).
template <typename Scalar>
std::vector<int> sample_hosts(const DiscreteHypersurface<Scalar>& mesh, const QuadratureScheme<Scalar>& scheme,
                              Eigen::Index i) {
  const int e = scheme.element[static_cast<std::size_t>(i)];
  const unsigned char bits = scheme.support[static_cast<std::size_t>(i)];
  if (bits == (1u << (mesh.dim() + 1)) - 1) return {e};
  std::vector<int> hosts;
  bool first = true;
  for (int c = 0; c <= mesh.dim(); ++c) {
    if (!(bits & (1u << c))) continue;
    const auto& star = mesh.vertex_elements()[static_cast<std::size_t>(mesh.elements()(e, c))];
    if (first) {
      hosts = star;
      first = false;
    } else {
      std::vector<int> both;
      std::set_intersection(hosts.begin(), hosts.end(), star.begin(), star.end(), std::back_inserter(both));
      hosts.swap(both);
    }
  }
  return hosts;
}

/// Sorted list of elements the outer sample `i` ignores: its hosts, or
/// every element sharing a vertex with a host.
template <typename Scalar>
std::vector<int> excluded_for_sample(const DiscreteHypersurface<Scalar>& mesh,
                                     const QuadratureScheme<Scalar>& scheme, Eigen::Index i) {
  const std::vector<int> hosts = sample_hosts(mesh, scheme, i);
  if (scheme.policy == DiagonalPolicy::skip_same_element) return hosts;
  std::vector<int> out;
  for (int h : hosts) {
    const auto star = excluded_for_element(mesh, h, DiagonalPolicy::skip_vertex_star);
    out.insert(out.end(), star.begin(), star.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Two-level extrapolation for an error expansion c * h^rate: `coarse` at
/// spacing h, `fine` at spacing h / ratio.
inline double richardson_extrapolate(double coarse, double fine, double ratio, double rate) {
  const double f = std::pow(ratio, rate);
  return (f * fine - coarse) / (f - 1.0);
}

}  // namespace nlcurv
