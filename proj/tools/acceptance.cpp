// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "nlcurv/flow.hpp"
#include "nlcurv/functionals.hpp"
#include "nlcurv/oracles.hpp"
#include "nlcurv/primitives.hpp"
#include "nlcurv/probes.hpp"
#include "nlcurv/seminorms.hpp"

using namespace nlcurv;

namespace {

// pinned tolerances
constexpr double kCircleTol = 1e-3;
constexpr double kCircleSeconds = 5.0;
constexpr double kSphereTol = 1e-2;
constexpr double kSphereSeconds = 120.0;
constexpr double kScalingTol = 1e-12;
constexpr double kConvexTol = 1e-12;
constexpr double kLimitOracleTol = 2e-2;
constexpr double kLimitMeshTol = 5e-2;
constexpr double kSpreadTol = 1e-2;
constexpr double kPatchTol = 5e-2;
constexpr double kPatchSpread = 3e-2;
constexpr double kChordArcTol = 5e-2;
constexpr double kAhlforsFloor = 2.0;
constexpr double kDriftFactor = 2.0;
constexpr int kFlowMinAccepted = 50;
constexpr double kFlowHausdorffRatio = 0.5;
constexpr double kEulerTol = 3e-2;
constexpr double kBruteTol = 1e-12;

int failures = 0;

void verdict(int id, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string num(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

EnergyParameters params_with(double s, double p, double q = 6.0) {
  EnergyParameters prm;
  prm.s = s;
  prm.p = p;
  prm.q = q;
  return prm;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

void circle_oracle() {
  const double s = 0.5, exact = circle_fmc(1.0, s);
  const auto t0 = std::chrono::steady_clock::now();
  auto at = [&](int n) {
    const Surface c = make_circle(1.0, n);
    const auto q = build_scheme(c, QuadratureOrder::centroid, DiagonalPolicy::skip_same_element);
    return fractional_mean_curvature(c, q, 0, params_with(s, 4));
  };
  const double coarse = at(2048), fine = at(4096);
  const double extrap = richardson_extrapolate(coarse, fine, 2.0, 1.0 - s);
  const double t = seconds_since(t0);
  const double err = rel(extrap, exact);
  verdict(1, err <= kCircleTol && t < kCircleSeconds,
          "extrapolated rel err " + num(err, 3) + " (raw N=4096: " + num(rel(fine, exact), 3) + "), " + num(t, 3) +
              " s");
}

void sphere_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const Surface m4 = make_icosphere(1.0, 4), m5 = make_icosphere(1.0, 5);
  const auto q4 = build_scheme(m4, QuadratureOrder::gauss3, DiagonalPolicy::skip_vertex_star);
  const auto q5 = build_scheme(m5, QuadratureOrder::gauss3, DiagonalPolicy::skip_vertex_star);
  double worst = 0, worst_raw = 0;
  for (double s : {0.3, 0.5, 0.7}) {
    const double exact = sphere_fmc(1.0, s);
    std::vector<double> errs(12);
    // the 12 icosahedron vertices keep their indices under subdivision
    for (int v = 0; v < 12; ++v) {
      const double coarse = fractional_mean_curvature(m4, q4, v, params_with(s, 4));
      const double fine = fractional_mean_curvature(m5, q5, v, params_with(s, 4));
      worst = std::max(worst, rel(richardson_extrapolate(coarse, fine, 2.0, 1.0 - s), exact));
      worst_raw = std::max(worst_raw, rel(fine, exact));
    }
  }
  const double t = seconds_since(t0);
  verdict(2, worst <= kSphereTol && t < kSphereSeconds,
          "max extrapolated rel err " + num(worst, 3) + " (raw sub 5: " + num(worst_raw, 3) + "), " + num(t, 3) + " s");
}

void exact_scaling() {
  double worst = 0;
  const auto prm = params_with(0.5, 3);
  for (const Surface& m : {make_circle(1.0, 256), make_icosphere(1.0, 2)}) {
    const auto q = build_scheme(m, QuadratureOrder::gauss3, DiagonalPolicy::skip_vertex_star);
    const double w = willmore_energy(m, q, prm).energy, b = bending_energy(m, q, prm).energy;
    for (double lam : {0.5, 2.0, 10.0}) {
      const Surface big = m.with_vertices(lam * m.vertices());
      const auto qb = build_scheme(big, QuadratureOrder::gauss3, DiagonalPolicy::skip_vertex_star);
      const double f = std::pow(lam, m.dim() - prm.s * prm.p);
      worst = std::max(worst, rel(willmore_energy(big, qb, prm).energy, f * w));
      worst = std::max(worst, rel(bending_energy(big, qb, prm).energy, f * b));
    }
  }
  verdict(3, worst <= kScalingTol, "max rel deviation " + num(worst, 3));
}

void convex_equivalence() {
  const auto prm = params_with(0.5, 4);
  double worst_energy = 0, worst_point = 0;
  for (const Surface& m : {make_icosphere(1.0, 3), make_ellipsoid({1, 1, 2}, 3), make_flat_icosahedron(1.0, 2)}) {
    const auto q = build_scheme(m, QuadratureOrder::gauss3, DiagonalPolicy::skip_vertex_star);
    const double w = willmore_energy(m, q, prm).energy, b = bending_energy(m, q, prm).energy;
    worst_energy = std::max(worst_energy, std::abs(w - b) / b);
    const VectorX<double> h = vertex_curvature_field(m, q, prm, false);
    const VectorX<double> a = vertex_curvature_field(m, q, prm, true);
    worst_point = std::max(worst_point, ((a + h).array().abs() / h.array().abs()).maxCoeff());
  }
  verdict(4, worst_energy <= kConvexTol && worst_point <= kConvexTol,
          "|W-B|/B " + num(worst_energy, 3) + ", pointwise |A+H|/|H| " + num(worst_point, 3));
}

void limit_check() {
  const double v1 = 0.1 * std::abs(circle_fmc(1.0, 0.9)), v2 = 0.01 * std::abs(circle_fmc(1.0, 0.99));
  const double extrap = v2 + (v2 - v1) * (1.0 - 0.99) / (0.99 - 0.9);
  const double oracle_err = std::abs(extrap - 1.0);
  const double s = 0.9, exact = circle_fmc(1.0, s);
  auto at = [&](int n) {
    const Surface c = make_circle(1.0, n);
    const auto q = build_scheme(c, QuadratureOrder::centroid, DiagonalPolicy::skip_same_element);
    return fractional_mean_curvature(c, q, 0, params_with(s, 2));
  };
  const double coarse = at(1024), fine = at(4096);
  const double mesh_err = rel(richardson_extrapolate(coarse, fine, 4.0, 1.0 - s), exact);
  verdict(5, oracle_err <= kLimitOracleTol && mesh_err <= kLimitMeshTol,
          "oracle extrapolation " + num(extrap, 6) + " (err " + num(oracle_err, 3) + "), mesh s=0.9 extrapolated err " +
              num(mesh_err, 3) + " (raw N=4096: " + num(rel(fine, exact), 3) + ")");
}

void sphere_symmetry() {
  const Surface m = make_icosphere(1.0, 4);
  const auto q = build_scheme(m, QuadratureOrder::gauss3, DiagonalPolicy::skip_vertex_star);
  const VectorX<double> h = vertex_curvature_field(m, q, params_with(0.5, 4), false);
  const double spread = (h.maxCoeff() - h.minCoeff()) / std::abs(h.mean());
  verdict(6, spread < kSpreadTol, "relative spread " + num(spread, 4) + " over " + std::to_string(h.size()) + " vertices");
}

void patch_radius() {
  PatchOptions opt;
  opt.grad_bound = 0.5;
  opt.grid_step = 0.01;
  const Eigen::VectorXd r = patch_radius_field(make_icosphere(1.0, 4), opt);
  const double target = 1.0 / std::sqrt(5.0);
  const double worst = (r.array() - target).abs().maxCoeff() / target;
  const double spread = (r.maxCoeff() - r.minCoeff()) / r.mean();
  verdict(7, worst <= kPatchTol && spread < kPatchSpread,
          "radius in [" + num(r.minCoeff(), 4) + ", " + num(r.maxCoeff(), 4) + "], max rel err " + num(worst, 3) +
              ", spread " + num(spread, 3));
}

void chord_arc() {
  const double gamma = chord_arc_constant(make_icosphere(1.0, 4), 32, 1).gamma;
  const double err = rel(gamma, std::numbers::pi / 2);
  std::vector<double> bells;
  for (double eps : {0.2, 0.1, 0.05}) bells.push_back(chord_arc_constant(make_dumbbell(eps, 0.0, 120, 32), 64, 1).gamma);
  const bool increasing = bells[0] < bells[1] && bells[1] < bells[2];
  verdict(8, err <= kChordArcTol && increasing,
          "sphere gamma " + num(gamma, 5) + " (rel err " + num(err, 3) + "), dumbbell " + num(bells[0], 4) + " < " +
              num(bells[1], 4) + " < " + num(bells[2], 4));
}

void ahlfors() {
  std::string detail;
  bool pass = true;
  const char* names[] = {"sphere", "ellipsoid", "icosahedron"};
  int k = 0;
  for (const Surface& m : {make_icosphere(1.0, 3), make_ellipsoid({1, 1, 2}, 3), make_flat_icosahedron(1.0, 3)}) {
    std::vector<double> radii;
    for (int j = 0; j < 8; ++j) radii.push_back(0.2 * m.diameter() * std::pow(0.5, j));
    double lo = INFINITY;
    for (Eigen::Index v = 0; v < m.num_vertices(); ++v)
      for (const auto& [r, ratio] : ahlfors_ratio(m, v, radii)) lo = std::min(lo, ratio);
    pass = pass && lo >= kAhlforsFloor;
    detail += std::string(k ? ", " : "") + names[k] + " " + num(lo, 5);
    ++k;
  }
  verdict(9, pass, "min ratio " + detail);
}

void michael_simon() {
  const double alpha = 0.5, q = 2.0, qstar = 4.0;
  const auto prm = params_with(0.5, 4);
  double constant = 0, lambda = 0, drift = 1;
  std::vector<std::function<Surface(int)>> family = {
      [](int sub) { return make_icosphere(1.0, sub); },
      [](int sub) { return make_ellipsoid({1, 1, 2}, sub); },
      [](int sub) { return make_flat_icosahedron(1.0, sub); },
  };
  for (const auto& make : family) {
    std::vector<std::vector<double>> ratios;
    for (int sub : {3, 4}) {
      const Surface m = make(sub);
      const auto sch = build_scheme(m, QuadratureOrder::gauss3, DiagonalPolicy::skip_vertex_star);
      lambda = std::max(lambda, bending_energy(m, sch, prm).energy);
      std::vector<Eigen::VectorXd> fields;
      for (int c = 0; c < 3; ++c) fields.push_back(m.vertices().col(c));
      for (auto [l, mm] : {std::pair{2, 0}, std::pair{3, 1}, std::pair{4, -2}}) {
        Eigen::VectorXd f(m.num_vertices());
        for (Eigen::Index v = 0; v < m.num_vertices(); ++v)
          f(v) = real_spherical_harmonic(l, mm, m.vertices().row(v).transpose().normalized());
        fields.push_back(f);
      }
      std::vector<double> row;
      for (const auto& f : fields) {
        const ScalarField<double> field(m, f);
        const double ratio =
            lq_norm(field, qstar) / (sobolev_seminorm(field, alpha, q) + lq_norm(field, q));
        row.push_back(ratio);
        constant = std::max(constant, ratio);
      }
      ratios.push_back(row);
    }
    for (std::size_t i = 0; i < ratios[0].size(); ++i) {
      const double d = ratios[1][i] / ratios[0][i];
      drift = std::max({drift, d, 1.0 / d});
    }
  }
  verdict(10, std::isfinite(constant) && drift <= kDriftFactor,
          "constant " + num(constant, 5) + " under Lambda " + num(lambda, 6) + ", max drift 3->4 " + num(drift, 4));
}

double euler_defect(const Surface& m, const SchemeOptions& so, const EnergyParameters& prm) {
  const auto g = energy_gradient(m, so, prm);
  const double lhs = (g.gradient.array() * m.vertices().array()).sum();
  const double k = m.dim() - prm.s * prm.p;
  return std::abs(lhs - k * g.energy) / (g.energy * std::max(1.0, std::abs(k)));
}

void flow() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto prm = params_with(0.5, 4);
  const SchemeOptions so{QuadratureOrder::centroid, DiagonalPolicy::skip_same_element};
  FlowOptions opt;
  opt.max_iter = 60;
  const Surface start = project_area(make_perturbed_sphere(1.0, 2, 0.05, 3));
  bool monotone = true;
  double last = INFINITY;
  opt.on_accept = [&](const FlowState& st) {
    monotone = monotone && st.energy <= last;
    last = st.energy;
  };
  FlowState st;
  std::string error;
  try {
    st = minimize(start, so, prm, opt);
  } catch (const Error& e) {
    error = e.kind();
  }
  if (!error.empty()) {
    verdict(11, false, "flow stopped with " + error);
    return;
  }
  monotone = monotone && st.trajectory[1].energy <= st.trajectory[0].energy;
  const double h0 = st.trajectory.front().hausdorff, h1 = st.trajectory.back().hausdorff;
  const double euler = std::max(euler_defect(start, so, prm), euler_defect(st.mesh, so, prm));
  const bool pass = st.accepted >= kFlowMinAccepted && monotone && h1 <= kFlowHausdorffRatio * h0 && euler <= kEulerTol;
  verdict(11, pass,
          std::to_string(st.accepted) + " accepted, monotone " + (monotone ? "yes" : "no") + ", hausdorff " +
              num(h0, 4) + " -> " + num(h1, 4) + " (ratio " + num(h1 / h0, 3) + "), Euler defect " + num(euler, 3) +
              ", " + num(seconds_since(t0), 3) + " s");
}

void stability() {
  std::vector<double> u, h;
  for (double amp : {0.01, 0.03, 0.05, 0.1}) {
    const StabilityReport r = stability_probe(make_perturbed_sphere(1.0, 3, amp, 3), 0.5, 2.0, 2000);
    u.push_back(r.u_seminorm / r.R0);
    h.push_back(r.hausdorff);
  }
  bool pass = true;
  std::string detail = "u/R0";
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (i > 0) pass = pass && u[i] > u[i - 1] && h[i] > h[i - 1];
    detail += " " + num(u[i], 4);
  }
  detail += "; hausdorff";
  for (double x : h) detail += " " + num(x, 4);
  verdict(12, pass, detail);
}

// Reference loops written from the definitions, sharing nothing with the
// library beyond the mesh arrays and the reference rule tables.
struct NaiveSamples {
  std::vector<Eigen::Vector3d> x;
  std::vector<double> w;
  std::vector<int> elem;
};

NaiveSamples naive_samples(const Surface& m, QuadratureOrder order) {
  const ReferenceRule rule = reference_rule(2, order);
  NaiveSamples s;
  for (Eigen::Index e = 0; e < m.num_elements(); ++e) {
    const Eigen::Vector3d a = m.vertices().row(m.elements()(e, 0)).transpose();
    const Eigen::Vector3d b = m.vertices().row(m.elements()(e, 1)).transpose();
    const Eigen::Vector3d c = m.vertices().row(m.elements()(e, 2)).transpose();
    const double area = 0.5 * (b - a).cross(c - a).norm();
    for (Eigen::Index k = 0; k < rule.weights.size(); ++k) {
      s.x.push_back(rule.barycentric(k, 0) * a + rule.barycentric(k, 1) * b + rule.barycentric(k, 2) * c);
      s.w.push_back(rule.weights(k) * area);
      s.elem.push_back(static_cast<int>(e));
    }
  }
  return s;
}

Eigen::Vector3d naive_normal(const Surface& m, int e) {
  const Eigen::Vector3d a = m.vertices().row(m.elements()(e, 0)).transpose();
  const Eigen::Vector3d b = m.vertices().row(m.elements()(e, 1)).transpose();
  const Eigen::Vector3d c = m.vertices().row(m.elements()(e, 2)).transpose();
  return (b - a).cross(c - a).normalized();
}

bool on_triangle(const Surface& m, int e, const Eigen::Vector3d& x) {
  const Eigen::Vector3d a = m.vertices().row(m.elements()(e, 0)).transpose();
  const Eigen::Vector3d b = m.vertices().row(m.elements()(e, 1)).transpose();
  const Eigen::Vector3d c = m.vertices().row(m.elements()(e, 2)).transpose();
  const Eigen::Vector3d n = (b - a).cross(c - a);
  const double scale = n.norm();
  if (std::abs(n.dot(x - a)) > 1e-12 * scale) return false;
  const double l0 = n.dot((c - b).cross(x - b)) / (scale * scale), l1 = n.dot((a - c).cross(x - c)) / (scale * scale);
  const double l2 = 1.0 - l0 - l1;
  return l0 >= -1e-12 && l1 >= -1e-12 && l2 >= -1e-12;
}

bool shares_vertex(const Surface& m, int e, int f) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (m.elements()(e, i) == m.elements()(f, j)) return true;
  return false;
}

std::vector<char> naive_excluded(const Surface& m, const Eigen::Vector3d& x, DiagonalPolicy policy) {
  const auto M = static_cast<int>(m.num_elements());
  std::vector<char> host(M, 0), out(M, 0);
  for (int e = 0; e < M; ++e) host[e] = on_triangle(m, e, x);
  for (int e = 0; e < M; ++e) {
    if (policy == DiagonalPolicy::skip_same_element) {
      out[e] = host[e];
    } else {
      for (int h = 0; h < M && !out[e]; ++h) out[e] = host[h] && shares_vertex(m, e, h);
    }
  }
  return out;
}

struct NaiveEnergies {
  double w = 0, b = 0, t = 0;
};

NaiveEnergies naive_energies(const Surface& m, QuadratureOrder order, DiagonalPolicy policy,
                             const EnergyParameters& prm) {
  const NaiveSamples s = naive_samples(m, order);
  NaiveEnergies out;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const std::vector<char> ex = naive_excluded(m, s.x[i], policy);
    double h = 0, a = 0, t = 0;
    for (std::size_t j = 0; j < s.x.size(); ++j) {
      if (ex[s.elem[j]]) continue;
      const Eigen::Vector3d d = s.x[i] - s.x[j];
      const double r = d.norm(), pair = d.dot(naive_normal(m, s.elem[j]));
      h += pair / std::pow(r, 2 + 1 + prm.s) * s.w[j];
      a += std::abs(pair) / std::pow(r, 2 + 1 + prm.s) * s.w[j];
      t += std::pow(std::abs(pair), prm.p) / std::pow(r, prm.q - prm.p) * s.w[j];
    }
    out.w += std::pow(std::abs(h), prm.p) * s.w[i];
    out.b += std::pow(std::abs(a), prm.p) * s.w[i];
    out.t += t * s.w[i];
  }
  return out;
}

double naive_sobolev(const Surface& m, const Eigen::VectorXd& f, double alpha, double q) {
  const Eigen::Index V = m.num_vertices();
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(V);
  for (Eigen::Index e = 0; e < m.num_elements(); ++e) {
    const Eigen::Vector3d a = m.vertices().row(m.elements()(e, 0)).transpose();
    const Eigen::Vector3d b = m.vertices().row(m.elements()(e, 1)).transpose();
    const Eigen::Vector3d c = m.vertices().row(m.elements()(e, 2)).transpose();
    const double third = (b - a).cross(c - a).norm() / 6.0;
    for (int k = 0; k < 3; ++k) mu(m.elements()(e, k)) += third;
  }
  double sum = 0;
  for (Eigen::Index i = 0; i < V; ++i)
    for (Eigen::Index j = 0; j < V; ++j) {
      if (i == j) continue;
      const double r = (m.vertices().row(i) - m.vertices().row(j)).norm();
      sum += std::pow(std::abs(f(i) - f(j)), q) / std::pow(r, 2 + alpha * q) * mu(i) * mu(j);
    }
  return std::pow(sum, 1.0 / q);
}

void brute_force() {
  double worst = 0;
  const Surface m = make_perturbed_sphere(1.0, 2, 0.1, 11);  // V = 162
  const auto prm = params_with(0.4, 3, 5);
  for (QuadratureOrder order : {QuadratureOrder::centroid, QuadratureOrder::gauss3}) {
    for (DiagonalPolicy policy : {DiagonalPolicy::skip_same_element, DiagonalPolicy::skip_vertex_star}) {
      const NaiveEnergies ref = naive_energies(m, order, policy, prm);
      const auto q = build_scheme(m, order, policy);
      for (int workers : {1, 4, 8}) {
        worst = std::max(worst, rel(willmore_energy(m, q, prm, workers).energy, ref.w));
        worst = std::max(worst, rel(bending_energy(m, q, prm, workers).energy, ref.b));
        worst = std::max(worst, rel(tangent_point_energy(m, q, prm, workers).energy, ref.t));
      }
    }
  }
  const Eigen::VectorXd f = m.vertices().col(2);
  const double sref = naive_sobolev(m, f, 0.5, 2.0);
  for (int workers : {1, 4, 8})
    worst = std::max(worst, rel(sobolev_seminorm(ScalarField<double>(m, f), 0.5, 2.0, DistanceMode::extrinsic, workers),
                                sref));
  verdict(13, worst <= kBruteTol, "max rel deviation " + num(worst, 3) + " over workers {1,4,8}, V=162");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  circle_oracle();
  sphere_oracle();
  exact_scaling();
  convex_equivalence();
  limit_check();
  sphere_symmetry();
  patch_radius();
  chord_arc();
  ahlfors();
  michael_simon();
  flow();
  stability();
  brute_force();
  std::printf("%d of 13 criteria failed, %.1f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
