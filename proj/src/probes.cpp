#include "nlcurv/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "nlcurv/errors.hpp"
#include "nlcurv/geodesic.hpp"
#include "nlcurv/parallel.hpp"
#include "nlcurv/seminorms.hpp"

namespace nlcurv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd tangent_frame(const Eigen::VectorXd& n) {
  const auto m = n.size();
  Eigen::MatrixXd rot(m, m);
  if (m == 2) {
    rot << n(1), -n(0), n(0), n(1);
    return rot;
  }
  Eigen::Index axis = 0;
  n.cwiseAbs().minCoeff(&axis);
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  a(axis) = 1;
  const Eigen::Vector3d nn = n;
  const Eigen::Vector3d e1 = (a - a.dot(nn) * nn).normalized();
  const Eigen::Vector3d e2 = nn.cross(e1);
  rot.row(0) = e1.transpose();
  rot.row(1) = e2.transpose();
  rot.row(2) = nn.transpose();
  return rot;
}

// Elements projected onto the tangent plane of one vertex, bucketed on a
// square grid for vertical ray queries.
class RayCaster {
 public:
  struct Hit {
    double tau1 = kInf;  // |t| of the nearest sheet
    double tau2 = kInf;  // |t| of the next distinct sheet
    double t = 0;
    Eigen::Index element = -1;
    Eigen::Vector3d bary = Eigen::Vector3d::Zero();
  };

  RayCaster(const Surface& mesh, const Eigen::MatrixXd& local, double reach, double cell)
      : mesh_(mesh), local_(local), d_(mesh.dim()), reach_(reach) {
    cells_ = std::max(1, std::min(512, static_cast<int>(std::ceil(2 * reach / cell))));
    cell_ = 2 * reach / cells_;
    const int rows = d_ == 2 ? cells_ : 1;
    buckets_.assign(static_cast<std::size_t>(cells_ * rows), {});
    tol_ = 1e-9 * mesh.diameter();
    const double area_tol = 1e-14 * mesh.diameter() * mesh.diameter();
    for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
      double lo[2] = {kInf, kInf}, hi[2] = {-kInf, -kInf}, tlo = kInf, thi = -kInf;
      for (int k = 0; k <= d_; ++k) {
        const auto row = local_.row(mesh.elements()(e, k));
        for (int c = 0; c < d_; ++c) {
          lo[c] = std::min(lo[c], row(c));
          hi[c] = std::max(hi[c], row(c));
        }
        tlo = std::min(tlo, row(d_));
        thi = std::max(thi, row(d_));
      }
      if (tlo > reach || thi < -reach) continue;
      bool outside = false;
      for (int c = 0; c < d_; ++c) outside = outside || lo[c] > reach || hi[c] < -reach;
      if (outside) continue;
      if (d_ == 2) {
        const auto a = local_.row(mesh.elements()(e, 0)), b = local_.row(mesh.elements()(e, 1)),
                   cc = local_.row(mesh.elements()(e, 2));
        const double det = (b(0) - a(0)) * (cc(1) - a(1)) - (b(1) - a(1)) * (cc(0) - a(0));
        if (std::abs(det) < area_tol) continue;
      } else if (hi[0] - lo[0] < 1e-14 * mesh.diameter()) {
        continue;
      }
      const int i0 = index(lo[0]), i1 = index(hi[0]);
      const int j0 = d_ == 2 ? index(lo[1]) : 0, j1 = d_ == 2 ? index(hi[1]) : 0;
      for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j) buckets_[static_cast<std::size_t>(i * rows + j)].push_back(static_cast<int>(e));
    }
  }

  Hit cast(const double* u) const {
    Hit h;
    if (std::abs(u[0]) > reach_ || (d_ == 2 && std::abs(u[1]) > reach_)) return h;
    const int rows = d_ == 2 ? cells_ : 1;
    const auto& bucket = buckets_[static_cast<std::size_t>(index(u[0]) * rows + (d_ == 2 ? index(u[1]) : 0))];
    const double eps = 1e-12;
    for (int e : bucket) {
      Eigen::Vector3d l;
      double t;
      if (d_ == 2) {
        const auto a = local_.row(mesh_.elements()(e, 0)), b = local_.row(mesh_.elements()(e, 1)),
                   c = local_.row(mesh_.elements()(e, 2));
        const double det = (b(0) - a(0)) * (c(1) - a(1)) - (b(1) - a(1)) * (c(0) - a(0));
        l(1) = ((u[0] - a(0)) * (c(1) - a(1)) - (u[1] - a(1)) * (c(0) - a(0))) / det;
        l(2) = ((b(0) - a(0)) * (u[1] - a(1)) - (b(1) - a(1)) * (u[0] - a(0))) / det;
        l(0) = 1 - l(1) - l(2);
        if (l.minCoeff() < -eps) continue;
        t = l(0) * a(2) + l(1) * b(2) + l(2) * c(2);
      } else {
        const auto a = local_.row(mesh_.elements()(e, 0)), b = local_.row(mesh_.elements()(e, 1));
        l(1) = (u[0] - a(0)) / (b(0) - a(0));
        l(0) = 1 - l(1);
        l(2) = 0;
        if (l(0) < -eps || l(1) < -eps) continue;
        t = l(0) * a(1) + l(1) * b(1);
      }
      if (std::abs(t) > reach_) continue;
      if (std::abs(t) < h.tau1 - tol_) {
        if (h.element >= 0 && std::abs(h.t - t) > tol_) h.tau2 = h.tau1;
        h.tau1 = std::abs(t);
        h.t = t;
        h.element = e;
        h.bary = l;
      } else if (std::abs(t - h.t) > tol_) {
        h.tau2 = std::min(h.tau2, std::abs(t));
      }
    }
    return h;
  }

 private:
  int index(double x) const {
    return std::clamp(static_cast<int>(std::floor((x + reach_) / cell_)), 0, cells_ - 1);
  }

  const Surface& mesh_;
  const Eigen::MatrixXd& local_;
  int d_;
  double reach_;
  double cell_ = 1;
  int cells_ = 1;
  double tol_ = 0;
  std::vector<std::vector<int>> buckets_;
};

struct PatchGrowth {
  double radius = 0;
  std::vector<Eigen::VectorXd> nodes;
  std::vector<double> heights;
  std::vector<Eigen::VectorXd> gradients;
  Eigen::MatrixXd rotation;
  Eigen::VectorXd origin;
};

PatchGrowth grow_patch(const Surface& mesh, const PointMatrix<double>& normals, Eigen::Index vertex,
                       const PatchOptions& opt) {
  if (!mesh.is_hypersurface()) throw UnsupportedMode("patch extraction needs a hypersurface");
  if (vertex < 0 || vertex >= mesh.num_vertices()) throw InvalidParams("vertex index out of range");
  if (!(opt.grad_bound > 0)) throw InvalidParams("grad_bound must be positive");
  const Eigen::VectorXd n = normals.row(vertex).transpose();
  if (!n.allFinite() || std::abs(n.norm() - 1) > 1e-6) throw DegenerateGeometry("vertex normal is undefined");
  const int d = mesh.dim();
  const double step = opt.grid_step > 0 ? opt.grid_step : mesh.diameter() / 400;
  const double reach = mesh.diameter();

  PatchGrowth g;
  g.rotation = tangent_frame(n);
  g.origin = mesh.vertices().row(vertex).transpose();
  const Eigen::MatrixXd local = (mesh.vertices().rowwise() - g.origin.transpose()) * g.rotation.transpose();
  const RayCaster caster(mesh, local, reach, 2 * step);

  double max_tau1 = 0, min_tau2 = kInf, max_grad = 0;
  const int kmax = static_cast<int>(std::floor(reach / step));
  std::vector<std::pair<long, long>> ring;
  for (int k = 1; k <= kmax; ++k) {
    // lattice nodes with (k-1)^2 < i^2 + j^2 <= k^2, plus the origin at k = 1
    ring.clear();
    const long k2 = static_cast<long>(k) * k, km2 = static_cast<long>(k - 1) * (k - 1);
    if (k == 1) ring.emplace_back(0, 0);
    if (d == 1) {
      ring.emplace_back(-k, 0);
      ring.emplace_back(k, 0);
    } else {
      for (long i = -k; i <= k; ++i)
        for (long j = -k; j <= k; ++j) {
          const long r2 = i * i + j * j;
          if (r2 > km2 && r2 <= k2) ring.emplace_back(i, j);
        }
    }
    const double rho = k * step;
    std::vector<Eigen::VectorXd> new_nodes, new_grads;
    std::vector<double> new_heights;
    bool single = true;
    for (const auto& [i, j] : ring) {
      double u[2] = {static_cast<double>(i) * step, static_cast<double>(j) * step};
      const auto hit = caster.cast(u);
      max_tau1 = std::max(max_tau1, hit.tau1);
      min_tau2 = std::min(min_tau2, hit.tau2);
      if (hit.element < 0) {
        single = false;
        break;
      }
      Eigen::VectorXd m = Eigen::VectorXd::Zero(d + 1);
      for (int c = 0; c <= d; ++c) m += hit.bary(c) * normals.row(mesh.elements()(hit.element, c)).transpose();
      const Eigen::VectorXd ml = g.rotation * m;
      Eigen::VectorXd grad(d);
      if (ml(d) <= 1e-12) {
        max_grad = kInf;
        grad.setConstant(kInf);
      } else {
        grad = -ml.head(d) / ml(d);
        max_grad = std::max(max_grad, grad.norm());
      }
      Eigen::VectorXd x(d);
      x(0) = u[0];
      if (d == 2) x(1) = u[1];
      new_nodes.push_back(x);
      new_heights.push_back(hit.t);
      new_grads.push_back(grad);
    }
    single = single && max_tau1 <= rho && min_tau2 > rho;
    if (!single) {
      if (k == 1) throw NonGraphical("the surface is not a single graph over the smallest disc");
      break;
    }
    if (max_grad > opt.grad_bound) {
      if (k == 1) {
        // keep only the base point
        g.nodes.push_back(Eigen::VectorXd::Zero(d));
        g.heights.push_back(0.0);
        g.gradients.push_back(new_grads.front());
      }
      break;
    }
    g.nodes.insert(g.nodes.end(), new_nodes.begin(), new_nodes.end());
    g.heights.insert(g.heights.end(), new_heights.begin(), new_heights.end());
    g.gradients.insert(g.gradients.end(), new_grads.begin(), new_grads.end());
    g.radius = rho;
  }
  return g;
}

}  // namespace

PatchChart extract_patch(const Surface& mesh, Eigen::Index vertex, const PatchOptions& options) {
  const PointMatrix<double> normals = vertex_normals(mesh);
  PatchGrowth g = grow_patch(mesh, normals, vertex, options);
  PatchChart p;
  const int d = mesh.dim();
  const auto K = static_cast<Eigen::Index>(g.nodes.size());
  p.base_vertex = vertex;
  p.rotation = g.rotation;
  p.origin = g.origin;
  p.radius = g.radius;
  p.spacing = options.grid_step > 0 ? options.grid_step : mesh.diameter() / 400;
  p.nodes.resize(K, d);
  p.heights.resize(K);
  p.gradients.resize(K, d);
  for (Eigen::Index i = 0; i < K; ++i) {
    p.nodes.row(i) = g.nodes[static_cast<std::size_t>(i)].transpose();
    p.heights(i) = g.heights[static_cast<std::size_t>(i)];
    p.gradients.row(i) = g.gradients[static_cast<std::size_t>(i)].transpose();
  }
  p.grad_sup = K ? p.gradients.rowwise().norm().maxCoeff() : 0.0;
  p.holder_exponent = options.holder_exponent;
  if (options.compute_holder && K > 1) {
    if (!(options.holder_exponent > 0 && options.holder_exponent <= 1))
      throw InvalidParams("holder exponent must lie in (0,1]");
    double best = 0;
    for (Eigen::Index i = 0; i < K; ++i)
      for (Eigen::Index j = i + 1; j < K; ++j)
        best = std::max(best, (p.gradients.row(i) - p.gradients.row(j)).norm() /
                                  std::pow((p.nodes.row(i) - p.nodes.row(j)).norm(), options.holder_exponent));
    p.grad_holder = best;
  }
  return p;
}

Eigen::VectorXd patch_radius_field(const Surface& mesh, const PatchOptions& options, int workers) {
  const PointMatrix<double> normals = vertex_normals(mesh);
  Eigen::VectorXd radii(mesh.num_vertices());
  parallel_for(mesh.num_vertices(), workers,
               [&](Eigen::Index v) { radii(v) = grow_patch(mesh, normals, v, options).radius; });
  return radii;
}

namespace {

// Signed area of disc(0, R) intersected with the triangle (0, p, q).
double disc_wedge_area(const Eigen::Vector2d& p, const Eigen::Vector2d& q, double R) {
  const Eigen::Vector2d dir = q - p;
  const double a = dir.squaredNorm(), b = p.dot(dir), c = p.squaredNorm() - R * R;
  std::vector<double> cuts = {0.0};
  const double disc = b * b - a * c;
  if (a > 0 && disc > 0) {
    const double sq = std::sqrt(disc);
    for (double t : {(-b - sq) / a, (-b + sq) / a})
      if (t > 0 && t < 1) cuts.push_back(t);
  }
  cuts.push_back(1.0);
  double total = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const Eigen::Vector2d u = p + cuts[k] * dir, w = p + cuts[k + 1] * dir;
    const double cross = u(0) * w(1) - u(1) * w(0);
    if ((0.5 * (u + w)).squaredNorm() <= R * R) {
      total += 0.5 * cross;
    } else {
      total += 0.5 * R * R * std::atan2(cross, u.dot(w));
    }
  }
  return total;
}

double triangle_in_ball(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                        const Eigen::Vector3d& x, double r) {
  const Eigen::Vector3d n = (b - a).cross(c - a).normalized();
  const double h = (x - a).dot(n);
  if (std::abs(h) >= r) return 0.0;
  const double R = std::sqrt(r * r - h * h);
  const Eigen::Vector3d center = x - h * n;
  const Eigen::Vector3d e1 = (b - a).normalized(), e2 = n.cross(e1);
  auto plane = [&](const Eigen::Vector3d& y) {
    return Eigen::Vector2d((y - center).dot(e1), (y - center).dot(e2));
  };
  const Eigen::Vector2d pa = plane(a), pb = plane(b), pc = plane(c);
  return std::abs(disc_wedge_area(pa, pb, R) + disc_wedge_area(pb, pc, R) + disc_wedge_area(pc, pa, R));
}

double segment_in_ball(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& x, double r) {
  const Eigen::VectorXd dir = b - a, p = a - x;
  const double A = dir.squaredNorm(), B = p.dot(dir), C = p.squaredNorm() - r * r;
  const double disc = B * B - A * C;
  if (disc <= 0) return 0.0;
  const double sq = std::sqrt(disc);
  const double t0 = std::max(0.0, (-B - sq) / A), t1 = std::min(1.0, (-B + sq) / A);
  return t1 > t0 ? (t1 - t0) * std::sqrt(A) : 0.0;
}

}  // namespace

double measure_in_ball(const Surface& mesh, const Eigen::VectorXd& center, double r) {
  if (!(r > 0)) throw InvalidParams("ball radius must be positive");
  Eigen::VectorXd parts(mesh.num_elements());
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
    if (mesh.dim() == 2) {
      const Eigen::Vector3d a = mesh.vertices().row(mesh.elements()(e, 0)).transpose();
      const Eigen::Vector3d b = mesh.vertices().row(mesh.elements()(e, 1)).transpose();
      const Eigen::Vector3d c = mesh.vertices().row(mesh.elements()(e, 2)).transpose();
      const Eigen::Vector3d x = center;
      const double far = std::max({(a - x).norm(), (b - x).norm(), (c - x).norm()});
      parts(e) = far <= r ? mesh.element_measures()(e) : triangle_in_ball(a, b, c, x, r);
    } else {
      parts(e) = segment_in_ball(mesh.vertices().row(mesh.elements()(e, 0)).transpose(),
                                 mesh.vertices().row(mesh.elements()(e, 1)).transpose(), center, r);
    }
  }
  return pairwise_sum(parts);
}

std::vector<std::pair<double, double>> ahlfors_ratio(const Surface& mesh, Eigen::Index vertex,
                                                     const std::vector<double>& radii) {
  if (vertex < 0 || vertex >= mesh.num_vertices()) throw InvalidParams("vertex index out of range");
  const Eigen::VectorXd x = mesh.vertices().row(vertex).transpose();
  std::vector<std::pair<double, double>> out;
  for (double r : radii) {
    if (!(r > 0) || r > mesh.diameter() * (1 + 1e-12))
      throw InvalidParams("Ahlfors radii must lie in (0, diameter]");
    out.emplace_back(r, measure_in_ball(mesh, x, r) / std::pow(r, mesh.dim()));
  }
  return out;
}

ChordArcResult chord_arc_constant(const Surface& mesh, int sample_sources, std::uint64_t seed, int workers,
                                  int steiner) {
  if (sample_sources < 1) throw InvalidParams("sample count must be positive");
  const auto graph = build_geodesic_graph(mesh, steiner);
  if (!is_connected(graph)) throw DisconnectedMesh("chord-arc constant needs a connected mesh");
  const Eigen::Index V = mesh.num_vertices();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(V));
  for (Eigen::Index v = 0; v < V; ++v) order[static_cast<std::size_t>(v)] = v;
  const Eigen::Index count = std::min<Eigen::Index>(sample_sources, V);
  if (count < V) {
    // partial Fisher-Yates with a plain modulo draw, reproducible across standard libraries
    std::mt19937_64 rng(seed);
    for (Eigen::Index i = 0; i < count; ++i) {
      const auto j = i + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(V - i));
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    std::sort(order.begin(), order.begin() + count);
  }
  std::vector<double> best(static_cast<std::size_t>(count), 1.0);
  std::vector<Eigen::Index> partner(static_cast<std::size_t>(count), -1);
  parallel_for(count, workers, [&](Eigen::Index k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    const auto dist = shortest_paths(graph, static_cast<int>(src));
    for (Eigen::Index j = 0; j < V; ++j) {
      if (j == src) continue;
      const double chord = (mesh.vertices().row(src) - mesh.vertices().row(j)).norm();
      if (!(chord > 0)) throw DegenerateGeometry("two distinct vertices at zero distance");
      const double ratio = dist[static_cast<std::size_t>(j)] / chord;
      if (ratio > best[static_cast<std::size_t>(k)] || partner[static_cast<std::size_t>(k)] < 0) {
        best[static_cast<std::size_t>(k)] = std::max(1.0, ratio);
        partner[static_cast<std::size_t>(k)] = j;
      }
    }
  });
  ChordArcResult r;
  r.sources = static_cast<int>(count);
  for (Eigen::Index k = 0; k < count; ++k) {
    if (r.witness_a < 0 || best[static_cast<std::size_t>(k)] > r.gamma) {
      r.gamma = best[static_cast<std::size_t>(k)];
      r.witness_a = order[static_cast<std::size_t>(k)];
      r.witness_b = partner[static_cast<std::size_t>(k)];
    }
  }
  return r;
}

namespace {

Eigen::Vector3d closest_on_triangle(const Eigen::Vector3d& p, const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                    const Eigen::Vector3d& c) {
  const Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Eigen::Vector3d bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + d1 / (d1 - d3) * ab;
  const Eigen::Vector3d cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + d2 / (d2 - d6) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) return b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b);
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

}  // namespace

double distance_to_mesh(const Surface& mesh, const Eigen::VectorXd& point) {
  double best = kInf;
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
    if (mesh.dim() == 2) {
      const Eigen::Vector3d p = point;
      const Eigen::Vector3d q = closest_on_triangle(p, mesh.vertices().row(mesh.elements()(e, 0)).transpose(),
                                                    mesh.vertices().row(mesh.elements()(e, 1)).transpose(),
                                                    mesh.vertices().row(mesh.elements()(e, 2)).transpose());
      best = std::min(best, (p - q).norm());
    } else {
      const Eigen::VectorXd a = mesh.vertices().row(mesh.elements()(e, 0)).transpose();
      const Eigen::VectorXd b = mesh.vertices().row(mesh.elements()(e, 1)).transpose();
      const double t = std::clamp((point - a).dot(b - a) / (b - a).squaredNorm(), 0.0, 1.0);
      best = std::min(best, (point - a - t * (b - a)).norm());
    }
  }
  return best;
}

double hausdorff_to_sphere(const Surface& mesh, const Eigen::VectorXd& center, double radius, int sphere_samples,
                           int workers) {
  if (!(radius > 0)) throw InvalidParams("sphere radius must be positive");
  if (sphere_samples < 1) throw InvalidParams("sphere sample count must be positive");
  double vertex_side = 0;
  for (Eigen::Index v = 0; v < mesh.num_vertices(); ++v)
    vertex_side = std::max(vertex_side, std::abs((mesh.vertices().row(v).transpose() - center).norm() - radius));
  const int m = mesh.ambient_dim();
  Eigen::VectorXd side(sphere_samples);
  parallel_for(sphere_samples, workers, [&](Eigen::Index i) {
    Eigen::VectorXd dir(m);
    if (m == 2) {
      const double a = 2 * std::numbers::pi * (static_cast<double>(i) + 0.5) / sphere_samples;
      dir << std::cos(a), std::sin(a);
    } else {
      const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / sphere_samples;
      const double rr = std::sqrt(std::max(0.0, 1 - z * z));
      const double phi = static_cast<double>(i) * std::numbers::pi * (3.0 - std::sqrt(5.0));
      dir << rr * std::cos(phi), rr * std::sin(phi), z;
    }
    side(i) = distance_to_mesh(mesh, center + radius * dir);
  });
  return std::max(vertex_side, side.maxCoeff());
}

SphereFit fit_sphere(const Surface& mesh) {
  const Eigen::Index V = mesh.num_vertices();
  const int m = mesh.ambient_dim();
  Eigen::MatrixXd A(V, m + 1);
  Eigen::VectorXd b(V);
  for (Eigen::Index v = 0; v < V; ++v) {
    A.row(v).head(m) = 2 * mesh.vertices().row(v);
    A(v, m) = 1;
    b(v) = mesh.vertices().row(v).squaredNorm();
  }
  const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);
  SphereFit fit;
  fit.center = sol.head(m);
  const double r2 = sol(m) + fit.center.squaredNorm();
  if (!(r2 > 0)) throw DegenerateGeometry("sphere fit failed");
  fit.radius = std::sqrt(r2);
  return fit;
}

StabilityReport stability_probe(const Surface& mesh, double alpha, double q, int sphere_samples, int workers) {
  if (!mesh.is_hypersurface()) throw UnsupportedMode("the stability probe needs a hypersurface");
  const PointMatrix<double> normals = vertex_normals(mesh);
  if (!normals.allFinite()) throw DegenerateGeometry("vertex normal is undefined");
  StabilityReport r;
  r.center = measure_centroid(mesh).transpose();
  VectorX<double> u(mesh.num_vertices());
  for (Eigen::Index v = 0; v < mesh.num_vertices(); ++v)
    u(v) = (mesh.vertices().row(v) - r.center.transpose()).dot(normals.row(v));
  const auto& w = mesh.vertex_measures();
  r.R0 = u.dot(w) / w.sum();
  r.starshaped = (u.array() > 0).all();
  if (!(r.R0 > 0)) throw DegenerateGeometry("mean support function is not positive");
  r.u_seminorm = sobolev_seminorm(ScalarField<double>(mesh, u), alpha, q, DistanceMode::extrinsic, workers);
  r.hausdorff = hausdorff_to_sphere(mesh, r.center, r.R0, sphere_samples, workers);
  return r;
}

}  // namespace nlcurv
