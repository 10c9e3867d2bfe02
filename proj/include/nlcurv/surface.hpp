#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nlcurv/errors.hpp"

namespace nlcurv {

template <typename Scalar>
using PointMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ElementMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVectorX = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// Whether the simplicial complex must be closed. Open complexes are only
/// used for flat test fixtures (discs, strips).
enum class Closure { closed, open };

/// Immutable simplicial d-manifold: closed polygons in the plane (d=1, n=2),
/// closed triangle meshes in space (d=2, n=3), or closed space curves (d=1,
/// n=3, codimension two).
///
/// Construction validates connectivity and orientation. In hypersurface mode
/// the winding is flipped globally when the enclosed signed volume is
/// negative, so element normals always point outward.
template <typename Scalar>
class DiscreteHypersurface {
 public:
  using Points = PointMatrix<Scalar>;
  using Vector = VectorX<Scalar>;

  DiscreteHypersurface() = default;

  static DiscreteHypersurface build(Points vertices, ElementMatrix elements,
                                    Closure closure = Closure::closed) {
    DiscreteHypersurface m;
    m.vertices_ = std::move(vertices);
    m.elements_ = std::move(elements);
    m.closure_ = closure;
    m.validate_shape();
    m.check_topology();
    m.compute_geometry();
    if (m.is_hypersurface() && closure == Closure::closed && m.signed_volume() < Scalar(0)) {
      m.flip_orientation();
      m.compute_geometry();
    }
    m.compute_diameter();
    return m;
  }

  /// Same connectivity, new vertex positions. Topology is not re-validated;
  /// orientation is kept as is.
  DiscreteHypersurface with_vertices(Points vertices) const {
    if (vertices.rows() != vertices_.rows() || vertices.cols() != vertices_.cols())
      throw InvalidParams("vertex array shape does not match the mesh");
    DiscreteHypersurface m = *this;
    m.vertices_ = std::move(vertices);
    m.compute_geometry();
    m.compute_diameter();
    return m;
  }

  int dim() const { return static_cast<int>(elements_.cols()) - 1; }
  int ambient_dim() const { return static_cast<int>(vertices_.cols()); }
  bool is_hypersurface() const { return ambient_dim() == dim() + 1; }
  Closure closure() const { return closure_; }

  Eigen::Index num_vertices() const { return vertices_.rows(); }
  Eigen::Index num_elements() const { return elements_.rows(); }

  const Points& vertices() const { return vertices_; }
  const ElementMatrix& elements() const { return elements_; }
  /// Unit outward normals per element; empty for codimension-two curves.
  const Points& element_normals() const { return normals_; }
  /// Unit tangents per segment (d = 1 only); empty for surfaces.
  const Points& element_tangents() const { return tangents_; }
  const Vector& element_measures() const { return element_measures_; }
  const Vector& vertex_measures() const { return vertex_measures_; }
  Scalar diameter() const { return diameter_; }

  /// Elements incident to each vertex, in increasing element order.
  const std::vector<std::vector<int>>& vertex_elements() const { return vertex_elements_; }

  Scalar signed_volume() const {
    if (!is_hypersurface()) throw UnsupportedMode("signed volume requires a hypersurface");
    Scalar vol = 0;
    if (dim() == 1) {
      for (Eigen::Index e = 0; e < elements_.rows(); ++e) {
        auto a = vertices_.row(elements_(e, 0));
        auto b = vertices_.row(elements_(e, 1));
        vol += a(0) * b(1) - a(1) * b(0);
      }
      return vol / Scalar(2);
    }
    for (Eigen::Index e = 0; e < elements_.rows(); ++e) {
      Eigen::Matrix<Scalar, 3, 1> a = vertices_.row(elements_(e, 0)).transpose();
      Eigen::Matrix<Scalar, 3, 1> b = vertices_.row(elements_(e, 1)).transpose();
      Eigen::Matrix<Scalar, 3, 1> c = vertices_.row(elements_(e, 2)).transpose();
      vol += a.dot(b.cross(c));
    }
    return vol / Scalar(6);
  }

  template <typename Other>
  DiscreteHypersurface<Other> cast() const {
    return DiscreteHypersurface<Other>::build(vertices_.template cast<Other>(), elements_, closure_);
  }

  /// Uniform scaling about the origin. Normals are kept bit-identical and
  /// measures are multiplied by lambda^d.
  DiscreteHypersurface scaled(Scalar lambda) const {
    DiscreteHypersurface m = *this;
    m.vertices_ *= lambda;
    Scalar factor = dim() == 1 ? lambda : lambda * lambda;
    m.element_measures_ *= factor;
    m.vertex_measures_ *= factor;
    m.diameter_ *= lambda;
    return m;
  }

 private:
  void validate_shape() {
    const int d = dim();
    const int n = ambient_dim();
    const bool ok = (d == 1 && (n == 2 || n == 3)) || (d == 2 && n == 3);
    if (!ok) throw InvalidParams("unsupported (dimension, ambient) combination");
    if (elements_.rows() == 0) throw InvalidParams("mesh has no elements");
    for (Eigen::Index e = 0; e < elements_.rows(); ++e) {
      for (int k = 0; k <= d; ++k) {
        const int v = elements_(e, k);
        if (v < 0 || v >= vertices_.rows())
          throw ParseError("element " + std::to_string(e) + " references vertex " +
                           std::to_string(v) + " out of range");
        for (int j = 0; j < k; ++j)
          if (elements_(e, j) == v)
            throw DegenerateGeometry("element " + std::to_string(e) + " repeats a vertex");
      }
    }
    if (!vertices_.allFinite()) throw ParseError("non-finite vertex coordinate");
  }

  // Every (d-1)-face must be shared by exactly two elements (one or two for
  // open fixtures), inducing opposite orientations.
  void check_topology() {
    std::map<std::pair<int, int>, std::array<int, 2>> faces;  // key -> {+count, -count}
    auto add = [&](int a, int b) {
      if (a < b)
        faces[{a, b}][0]++;
      else
        faces[{b, a}][1]++;
    };
    for (Eigen::Index e = 0; e < elements_.rows(); ++e) {
      if (dim() == 1) {
        // faces of a segment are its endpoints; orientation = end vs start
        faces[{elements_(e, 1), -1}][0]++;
        faces[{elements_(e, 0), -1}][1]++;
      } else {
        add(elements_(e, 0), elements_(e, 1));
        add(elements_(e, 1), elements_(e, 2));
        add(elements_(e, 2), elements_(e, 0));
      }
    }
    for (const auto& [key, count] : faces) {
      const int total = count[0] + count[1];
      const bool boundary_ok = closure_ == Closure::open && total == 1;
      if (total != 2 && !boundary_ok)
        throw NonManifoldError("face (" + std::to_string(key.first) + "," +
                               std::to_string(key.second) + ") is shared by " +
                               std::to_string(total) + " elements");
      if (total == 2 && count[0] != 1)
        throw OrientationError("inconsistent winding across face (" + std::to_string(key.first) +
                               "," + std::to_string(key.second) + ")");
    }
    vertex_elements_.assign(static_cast<std::size_t>(vertices_.rows()), {});
    for (Eigen::Index e = 0; e < elements_.rows(); ++e)
      for (int k = 0; k <= dim(); ++k)
        vertex_elements_[static_cast<std::size_t>(elements_(e, k))].push_back(static_cast<int>(e));
    for (std::size_t v = 0; v < vertex_elements_.size(); ++v)
      if (vertex_elements_[v].empty())
        throw NonManifoldError("vertex " + std::to_string(v) + " is not used by any element");
  }

  void flip_orientation() {
    for (Eigen::Index e = 0; e < elements_.rows(); ++e) std::swap(elements_(e, 0), elements_(e, 1));
  }

  void compute_geometry() {
    const Eigen::Index M = elements_.rows();
    const int n = ambient_dim();
    element_measures_.resize(M);
    normals_.resize(is_hypersurface() ? M : 0, n);
    tangents_.resize(dim() == 1 ? M : 0, n);
    for (Eigen::Index e = 0; e < M; ++e) {
      if (dim() == 1) {
        RowVectorX<Scalar> t = vertices_.row(elements_(e, 1)) - vertices_.row(elements_(e, 0));
        const Scalar len = t.norm();
        if (!(len > Scalar(0))) throw DegenerateGeometry("zero-length segment " + std::to_string(e));
        element_measures_(e) = len;
        tangents_.row(e) = t / len;
        if (is_hypersurface()) {
          normals_(e, 0) = t(1) / len;
          normals_(e, 1) = -t(0) / len;
        }
      } else {
        Eigen::Matrix<Scalar, 3, 1> a = vertices_.row(elements_(e, 0)).transpose();
        Eigen::Matrix<Scalar, 3, 1> b = vertices_.row(elements_(e, 1)).transpose();
        Eigen::Matrix<Scalar, 3, 1> c = vertices_.row(elements_(e, 2)).transpose();
        Eigen::Matrix<Scalar, 3, 1> cr = (b - a).cross(c - a);
        const Scalar twice = cr.norm();
        if (!(twice > Scalar(0))) throw DegenerateGeometry("zero-area triangle " + std::to_string(e));
        element_measures_(e) = twice / Scalar(2);
        normals_.row(e) = (cr / twice).transpose();
      }
    }
    vertex_measures_ = Vector::Zero(vertices_.rows());
    const Scalar share = Scalar(1) / Scalar(dim() + 1);
    for (Eigen::Index e = 0; e < M; ++e)
      for (int k = 0; k <= dim(); ++k) vertex_measures_(elements_(e, k)) += share * element_measures_(e);
  }

  void compute_diameter() {
    Scalar best = 0;
    for (Eigen::Index i = 0; i < vertices_.rows(); ++i)
      for (Eigen::Index j = i + 1; j < vertices_.rows(); ++j)
        best = std::max(best, (vertices_.row(i) - vertices_.row(j)).squaredNorm());
    diameter_ = std::sqrt(best);
  }

  Points vertices_;
  ElementMatrix elements_;
  Closure closure_ = Closure::closed;
  Points normals_;
  Points tangents_;
  Vector element_measures_;
  Vector vertex_measures_;
  std::vector<std::vector<int>> vertex_elements_;
  Scalar diameter_ = 0;
};

using Surface = DiscreteHypersurface<double>;

template <typename Scalar>
Scalar area(const DiscreteHypersurface<Scalar>& mesh) {
  return mesh.element_measures().sum();
}

template <typename Scalar>
DiscreteHypersurface<Scalar> rescale(const DiscreteHypersurface<Scalar>& mesh, Scalar lambda) {
  if (!(lambda > Scalar(0))) throw InvalidParams("rescale factor must be positive");
  return mesh.scaled(lambda);
}

template <typename Scalar>
DiscreteHypersurface<Scalar> translate(const DiscreteHypersurface<Scalar>& mesh,
                                       const RowVectorX<Scalar>& offset) {
  PointMatrix<Scalar> v = mesh.vertices().rowwise() + offset;
  return mesh.with_vertices(std::move(v));
}

/// Measure-weighted average of incident element normals, renormalized.
template <typename Scalar>
PointMatrix<Scalar> vertex_normals(const DiscreteHypersurface<Scalar>& mesh) {
  if (!mesh.is_hypersurface()) throw UnsupportedMode("vertex normals require a hypersurface");
  PointMatrix<Scalar> vn = PointMatrix<Scalar>::Zero(mesh.num_vertices(), mesh.ambient_dim());
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e)
    for (int k = 0; k <= mesh.dim(); ++k)
      vn.row(mesh.elements()(e, k)) += mesh.element_measures()(e) * mesh.element_normals().row(e);
  for (Eigen::Index v = 0; v < vn.rows(); ++v) {
    const Scalar len = vn.row(v).norm();
    if (!(len > Scalar(0))) throw DegenerateGeometry("vertex normal undefined at " + std::to_string(v));
    vn.row(v) /= len;
  }
  return vn;
}

/// Area-weighted centroid of the vertices (weights = lumped vertex measures).
template <typename Scalar>
RowVectorX<Scalar> measure_centroid(const DiscreteHypersurface<Scalar>& mesh) {
  const auto& w = mesh.vertex_measures();
  return (w.transpose() * mesh.vertices()) / w.sum();
}

template <typename Scalar>
struct ConvexityResult {
  bool is_convex = true;
  Scalar max_violation = 0;
};

/// Half-space test: every vertex must lie behind the supporting plane of every
/// element, up to 1e-9 times the diameter.
template <typename Scalar>
ConvexityResult<Scalar> convexity_check(const DiscreteHypersurface<Scalar>& mesh) {
  if (!mesh.is_hypersurface()) throw UnsupportedMode("convexity requires a hypersurface");
  const Scalar tol = Scalar(1e-9) * mesh.diameter();
  const int d = mesh.dim();
  ConvexityResult<Scalar> out;
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
    RowVectorX<Scalar> centroid = RowVectorX<Scalar>::Zero(mesh.ambient_dim());
    for (int k = 0; k <= d; ++k) centroid += mesh.vertices().row(mesh.elements()(e, k));
    centroid /= Scalar(d + 1);
    const auto n = mesh.element_normals().row(e);
    for (Eigen::Index v = 0; v < mesh.num_vertices(); ++v) {
      const Scalar pairing = (mesh.vertices().row(v) - centroid).dot(n);
      out.max_violation = std::max(out.max_violation, pairing);
    }
  }
  out.is_convex = out.max_violation <= tol;
  return out;
}

}  // namespace nlcurv
