#include "nlcurv/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/SparseCholesky>

#include "nlcurv/errors.hpp"
#include "nlcurv/parallel.hpp"
#include "nlcurv/probes.hpp"

namespace nlcurv {
namespace {

bool contains(const std::vector<int>& sorted, int value) {
  return std::binary_search(sorted.begin(), sorted.end(), value);
}

struct KernelSpec {
  int n;
  Pairing pairing;
  bool use_tangent;
  double half_exp;
  double cutoff;

  double operator()(const double* x, const double* y, const double* dir) const {
    double diff[3];
    double r2 = 0, dot = 0;
    for (int k = 0; k < n; ++k) {
      diff[k] = x[k] - y[k];
      r2 += diff[k] * diff[k];
      dot += diff[k] * dir[k];
    }
    if (r2 < cutoff) throw DegenerateGeometry("outer point coincides with a non-excluded sample");
    double pair;
    if (pairing == Pairing::signed_normal) {
      pair = dot;
    } else if (!use_tangent) {
      pair = std::abs(dot);
    } else {
      double perp2 = 0;
      for (int k = 0; k < n; ++k) {
        const double c = diff[k] - dot * dir[k];
        perp2 += c * c;
      }
      pair = std::sqrt(perp2);
    }
    return pair * std::pow(r2, half_exp);
  }
};

// Measure and normal (or tangent, for space curves) of one element.
void element_frame(const PointMatrix<double>& corners, bool use_tangent, double& measure, double* dir) {
  const int n = static_cast<int>(corners.cols());
  if (corners.rows() == 3) {
    const Eigen::Vector3d a = corners.row(0).transpose(), b = corners.row(1).transpose(),
                          c = corners.row(2).transpose();
    const Eigen::Vector3d cr = (b - a).cross(c - a);
    const double len = cr.norm();
    measure = 0.5 * len;
    for (int k = 0; k < 3; ++k) dir[k] = cr(k) / len;
    return;
  }
  const Eigen::RowVectorXd t = corners.row(1) - corners.row(0);
  measure = t.norm();
  if (use_tangent) {
    for (int k = 0; k < n; ++k) dir[k] = t(k) / measure;
  } else {
    dir[0] = t(1) / measure;
    dir[1] = -t(0) / measure;
  }
}

double mean_edge_length(const Surface& mesh) {
  double total = 0;
  long count = 0;
  const int k = mesh.dim() + 1;
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e)
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) {
        total += (mesh.vertices().row(mesh.elements()(e, a)) - mesh.vertices().row(mesh.elements()(e, b))).norm();
        ++count;
      }
  return total / static_cast<double>(count);
}

}  // namespace

GradientResult energy_gradient(const Surface& mesh, const SchemeOptions& sopt, const EnergyParameters& params,
                               double h, int workers) {
  if (!(h > 0)) throw InvalidParams("finite-difference step must be positive");
  params.validate();
  const Pairing pairing = detail::pairing_for<double>(params, true);
  detail::check_pairing(mesh, pairing);
  const auto scheme = build_scheme(mesh, sopt.order, sopt.policy);
  const VectorX<double> A = sample_curvature_field(mesh, scheme, params, pairing, workers);

  GradientResult out;
  out.energy = lp_energy(A, scheme.weights, params.p);
  const Eigen::Index N = scheme.size(), V = mesh.num_vertices();
  const int n = mesh.ambient_dim(), d = mesh.dim();
  const bool use_tangent = pairing == Pairing::projection && !mesh.is_hypersurface();
  const KernelSpec K{n, pairing, use_tangent, -(d + 1 + params.s) / 2.0, detail::degenerate_cutoff_sq(mesh)};
  const PointMatrix<double>& dirs = use_tangent ? mesh.element_tangents() : mesh.element_normals();
  const ReferenceRule rule = reference_rule(d, sopt.order);
  const Eigen::Index per = rule.weights.size();
  const double cs = params.c_s(), p = params.p;

  std::vector<std::vector<int>> excluded(static_cast<std::size_t>(N));
  for (Eigen::Index i = 0; i < N; ++i) excluded[static_cast<std::size_t>(i)] = excluded_for_sample(mesh, scheme, i);

  // mean incident edge length per vertex
  Eigen::VectorXd local_len = Eigen::VectorXd::Zero(V), local_cnt = Eigen::VectorXd::Zero(V);
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e)
    for (int a = 0; a <= d; ++a)
      for (int b = 0; b <= d; ++b) {
        if (a == b) continue;
        const int va = mesh.elements()(e, a), vb = mesh.elements()(e, b);
        local_len(va) += (mesh.vertices().row(va) - mesh.vertices().row(vb)).norm();
        local_cnt(va) += 1;
      }

  out.gradient = PointMatrix<double>::Zero(V, n);
  out.forward = out.backward = out.gradient;
  parallel_for(V, workers, [&](Eigen::Index v) {
    const auto& star = mesh.vertex_elements()[static_cast<std::size_t>(v)];
    const auto S = static_cast<Eigen::Index>(star.size()) * per;
    const double delta = h * local_len(v) / std::max(1.0, local_cnt(v));
    // perturbed samples of the star, in star order
    PointMatrix<double> ys(S, n);
    Eigen::VectorXd ws(S);
    PointMatrix<double> ds(S, n);
    std::vector<Eigen::Index> sample_of(static_cast<std::size_t>(S));
    Eigen::VectorXd terms(N);
    for (int k = 0; k < n; ++k) {
      double change[2];
      for (int side = 0; side < 2; ++side) {
        const double shift = side == 0 ? delta : -delta;
        for (std::size_t a = 0; a < star.size(); ++a) {
          const int e = star[a];
          PointMatrix<double> corners(d + 1, n);
          for (int c = 0; c <= d; ++c) {
            corners.row(c) = mesh.vertices().row(mesh.elements()(e, c));
            if (mesh.elements()(e, c) == v) corners(c, k) += shift;
          }
          double measure, dir[3];
          element_frame(corners, use_tangent, measure, dir);
          for (Eigen::Index q = 0; q < per; ++q) {
            const Eigen::Index slot = static_cast<Eigen::Index>(a) * per + q;
            ys.row(slot).setZero();
            for (int c = 0; c <= d; ++c) ys.row(slot) += rule.barycentric(q, c) * corners.row(c);
            ws(slot) = rule.weights(q) * measure;
            for (int t = 0; t < n; ++t) ds(slot, t) = dir[t];
            sample_of[static_cast<std::size_t>(slot)] = scheme.offset[static_cast<std::size_t>(e)] + q;
          }
        }
        // outer samples away from the star: only the star targets change
        for (Eigen::Index i = 0; i < N; ++i) {
          const int ei = scheme.element[static_cast<std::size_t>(i)];
          if (contains(star, ei)) {
            terms(i) = 0;
            continue;
          }
          const auto& ex = excluded[static_cast<std::size_t>(i)];
          double dA = 0;
          for (Eigen::Index slot = 0; slot < S; ++slot) {
            const Eigen::Index j = sample_of[static_cast<std::size_t>(slot)];
            const int ej = scheme.element[static_cast<std::size_t>(j)];
            if (contains(ex, ej)) continue;
            dA += K(scheme.points.row(i).data(), ys.row(slot).data(), ds.row(slot).data()) * ws(slot) -
                  K(scheme.points.row(i).data(), scheme.points.row(j).data(), dirs.row(ej).data()) *
                      scheme.weights(j);
          }
          const double Ai = A(i) + cs * dA;
          terms(i) = (std::pow(std::abs(Ai), p) - std::pow(std::abs(A(i)), p)) * scheme.weights(i);
        }
        // outer samples on the star: full re-evaluation
        for (Eigen::Index slot = 0; slot < S; ++slot) {
          const Eigen::Index i = sample_of[static_cast<std::size_t>(slot)];
          const auto& ex = excluded[static_cast<std::size_t>(i)];
          double sum = 0;
          for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
            if (contains(ex, static_cast<int>(e))) continue;
            const auto it = std::lower_bound(star.begin(), star.end(), static_cast<int>(e));
            const bool moved = it != star.end() && *it == e;
            for (Eigen::Index q = 0; q < per; ++q) {
              const Eigen::Index j = scheme.offset[static_cast<std::size_t>(e)] + q;
              if (moved) {
                const Eigen::Index sj = static_cast<Eigen::Index>(it - star.begin()) * per + q;
                sum += K(ys.row(slot).data(), ys.row(sj).data(), ds.row(sj).data()) * ws(sj);
              } else {
                sum += K(ys.row(slot).data(), scheme.points.row(j).data(), dirs.row(e).data()) * scheme.weights(j);
              }
            }
          }
          const double Ai = cs * sum;
          terms(i) = std::pow(std::abs(Ai), p) * ws(slot) - std::pow(std::abs(A(i)), p) * scheme.weights(i);
        }
        change[side] = pairwise_sum(terms);
      }
      out.gradient(v, k) = (change[0] - change[1]) / (2 * delta);
      out.forward(v, k) = change[0] / delta;
      out.backward(v, k) = -change[1] / delta;
    }
  });
  return out;
}

Surface project_area(const Surface& mesh) {
  const double a = area(mesh);
  if (!(a > 0)) throw InvalidParams("mesh measure must be positive");
  const RowVectorX<double> c = measure_centroid(mesh);
  const double lam = std::pow(a, -1.0 / mesh.dim());
  PointMatrix<double> x = ((mesh.vertices().rowwise() - c) * lam).rowwise() + c;
  return mesh.with_vertices(std::move(x));
}

double hausdorff_to_best_sphere(const Surface& mesh, int samples, int workers) {
  if (!mesh.is_hypersurface()) return std::numeric_limits<double>::quiet_NaN();
  const SphereFit fit = fit_sphere(mesh);
  return hausdorff_to_sphere(mesh, fit.center, fit.radius, samples, workers);
}

namespace {

Surface tangential_smoothing(const Surface& mesh, double weight) {
  const bool hyper = mesh.is_hypersurface();
  const PointMatrix<double> normals = hyper ? vertex_normals(mesh) : PointMatrix<double>();
  PointMatrix<double> tangents;
  if (!hyper) {
    tangents = PointMatrix<double>::Zero(mesh.num_vertices(), mesh.ambient_dim());
    for (Eigen::Index e = 0; e < mesh.num_elements(); ++e)
      for (int a = 0; a < 2; ++a) tangents.row(mesh.elements()(e, a)) += mesh.element_tangents().row(e);
    tangents.rowwise().normalize();
  }
  std::vector<std::set<int>> ring(static_cast<std::size_t>(mesh.num_vertices()));
  const int k = mesh.dim() + 1;
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e)
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        if (a != b) ring[static_cast<std::size_t>(mesh.elements()(e, a))].insert(mesh.elements()(e, b));
  PointMatrix<double> x = mesh.vertices();
  for (Eigen::Index v = 0; v < mesh.num_vertices(); ++v) {
    const auto& nb = ring[static_cast<std::size_t>(v)];
    if (nb.empty()) continue;
    RowVectorX<double> avg = RowVectorX<double>::Zero(mesh.ambient_dim());
    for (int u : nb) avg += mesh.vertices().row(u);
    avg /= static_cast<double>(nb.size());
    RowVectorX<double> move = avg - mesh.vertices().row(v);
    if (hyper)
      move -= move.dot(normals.row(v)) * normals.row(v);
    else
      move = move.dot(tangents.row(v)) * tangents.row(v);
    x.row(v) += weight * move;
  }
  return mesh.with_vertices(std::move(x));
}

// Central slopes, except at kinks: zero where both one-sided moves raise the
// energy, the steeper side where both lower it.
PointMatrix<double> descent_slopes(const GradientResult& g) {
  PointMatrix<double> out = g.gradient;
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index k = 0; k < out.cols(); ++k) {
      const double f = g.forward(i, k), b = g.backward(i, k);
      if (f >= 0 && b <= 0)
        out(i, k) = 0;
      else if (f < 0 && b > 0)
        out(i, k) = -f > b ? f : b;
    }
  return out;
}

// (I + alpha L) u = speed with the uniform graph Laplacian L
Eigen::VectorXd smooth_speed(const Surface& mesh, const Eigen::VectorXd& speed, double alpha) {
  const Eigen::Index V = mesh.num_vertices();
  std::vector<std::set<int>> ring(static_cast<std::size_t>(V));
  const int k = mesh.dim() + 1;
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e)
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        if (a != b) ring[static_cast<std::size_t>(mesh.elements()(e, a))].insert(mesh.elements()(e, b));
  std::vector<Eigen::Triplet<double>> entries;
  for (Eigen::Index v = 0; v < V; ++v) {
    const auto& nb = ring[static_cast<std::size_t>(v)];
    entries.emplace_back(v, v, 1.0 + alpha * static_cast<double>(nb.size()));
    for (int u : nb) entries.emplace_back(v, u, -alpha);
  }
  Eigen::SparseMatrix<double> M(V, V);
  M.setFromTriplets(entries.begin(), entries.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(M);
  if (solver.info() != Eigen::Success) throw DegenerateGeometry("smoothing system could not be factored");
  return solver.solve(speed);
}

}  // namespace

FlowState minimize(const Surface& mesh, const SchemeOptions& sopt, const EnergyParameters& params,
                   const FlowOptions& opt) {
  params.validate();
  if (opt.max_iter < 0) throw InvalidParams("max_iter must be non-negative");
  if (!(opt.step0 > 0) || !(opt.shrink > 0 && opt.shrink < 1)) throw InvalidParams("invalid step settings");
  FlowState st;
  if (!params.subcritical(mesh.dim()))
    st.warnings.push_back("p <= d/s: the energy is not subcritical (scaling exponent d - s p = " +
                          std::to_string(mesh.dim() - params.s * params.p) + ")");
  if (opt.smoothing) st.warnings.push_back("tangential smoothing enabled");

  st.mesh = project_area(mesh);
  const double min_measure0 = st.mesh.element_measures().minCoeff();
  GradientResult g = energy_gradient(st.mesh, sopt, params, opt.fd_step, opt.workers);
  auto grad_norm = [](const GradientResult& r) { return r.gradient.rowwise().norm().maxCoeff(); };
  st.energy = g.energy;
  st.area = area(st.mesh);
  st.grad_norm = grad_norm(g);
  st.step = opt.step0;
  st.trajectory.push_back({0, st.energy, st.area, st.grad_norm,
                           hausdorff_to_best_sphere(st.mesh, opt.hausdorff_samples, opt.workers), st.step});

  for (int it = 1; it <= opt.max_iter; ++it) {
    st.iteration = it;
    const double ell = mean_edge_length(st.mesh);
    if (st.energy == 0 || st.grad_norm * ell <= opt.grad_tol * st.energy) {
      st.stop_reason = "converged";
      return st;
    }
    // preferred direction first; the plain slopes are the fallback near kinks
    // of the energy, where the smoothed normal speed can fail to descend
    std::vector<PointMatrix<double>> dirs{descent_slopes(g)};
    if (opt.normal_descent && st.mesh.is_hypersurface()) {
      const PointMatrix<double> n = vertex_normals(st.mesh);
      Eigen::VectorXd speed = (g.gradient.array() * n.array()).rowwise().sum();
      if (opt.preconditioner > 0) speed = smooth_speed(st.mesh, speed, opt.preconditioner);
      dirs.insert(dirs.begin(), n.array().colwise() * speed.array());
    }
    Surface trial;
    bool found = false, any_direction = false;
    for (std::size_t a = 0; a < dirs.size() && !found; ++a) {
      const PointMatrix<double>& dir = dirs[a];
      const double dir_norm = dir.rowwise().norm().maxCoeff();
      if (!(dir_norm > 0)) continue;
      any_direction = true;
      if (a > 0) st.step = opt.step0;
      while (st.step >= opt.min_step) {
        const double disp = st.step * ell / dir_norm;
        try {
          trial = project_area(st.mesh.with_vertices(st.mesh.vertices() - disp * dir));
          if (opt.smoothing) trial = project_area(tangential_smoothing(trial, opt.smoothing_weight));
          const auto q = build_scheme(trial, sopt.order, sopt.policy);
          const double e = bending_energy(trial, q, params, opt.workers).energy;
          found = std::isfinite(e) && e < st.energy;
        } catch (const DegenerateGeometry&) {
          found = false;
        }
        if (found) break;
        st.step *= opt.shrink;
      }
    }
    if (!any_direction) {
      st.stop_reason = "converged";
      return st;
    }
    if (!found) throw StallError("no energy decrease down to the minimum step size");
    if (trial.element_measures().minCoeff() < 1e-10 * min_measure0)
      throw MeshDegenerationError("an element collapsed during the flow");
    st.mesh = std::move(trial);
    g = energy_gradient(st.mesh, sopt, params, opt.fd_step, opt.workers);
    st.energy = g.energy;
    st.area = area(st.mesh);
    st.grad_norm = grad_norm(g);
    ++st.accepted;
    st.trajectory.push_back({it, st.energy, st.area, st.grad_norm,
                             hausdorff_to_best_sphere(st.mesh, opt.hausdorff_samples, opt.workers), st.step});
    if (opt.on_accept) opt.on_accept(st);
    st.step = std::min(opt.step0, st.step / opt.shrink);
  }
  st.stop_reason = "max_iter";
  return st;
}

}  // namespace nlcurv
