#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nlcurv/primitives.hpp"
#include "nlcurv/probes.hpp"

using namespace nlcurv;

namespace {

const double kTarget = 1.0 / std::sqrt(5.0);

// Moller-Trumbore hits of the line origin + t*dir with every triangle, |t| <= reach,
// merged when closer than tol.
std::vector<double> brute_line_hits(const Surface& m, const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                                    double reach, double tol) {
  std::vector<double> ts;
  for (Eigen::Index e = 0; e < m.num_elements(); ++e) {
    const Eigen::Vector3d a = m.vertices().row(m.elements()(e, 0)).transpose();
    const Eigen::Vector3d b = m.vertices().row(m.elements()(e, 1)).transpose();
    const Eigen::Vector3d c = m.vertices().row(m.elements()(e, 2)).transpose();
    const Eigen::Vector3d e1 = b - a, e2 = c - a, pv = dir.cross(e2);
    const double det = e1.dot(pv);
    if (std::abs(det) < 1e-15) continue;
    const Eigen::Vector3d tv = origin - a;
    const double u = tv.dot(pv) / det;
    const Eigen::Vector3d qv = tv.cross(e1);
    const double v = dir.dot(qv) / det;
    if (u < -1e-12 || v < -1e-12 || u + v > 1 + 1e-12) continue;
    const double t = e2.dot(qv) / det;
    if (std::abs(t) <= reach) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  std::vector<double> out;
  for (double t : ts)
    if (out.empty() || t - out.back() > tol) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("patch on the sphere approaches the closed-form radius") {
  PatchOptions opt;
  opt.grid_step = 0.01;
  opt.compute_holder = false;
  for (int sub : {3, 4}) {
    const Surface m = make_icosphere(1.0, sub);
    for (Eigen::Index v : {0, 5, 100}) {
      const PatchChart p = extract_patch(m, v, opt);
      CHECK(std::abs(p.radius - kTarget) <= 0.05 * kTarget);
      CHECK(p.grad_sup <= 0.5);
      // base point normalization
      CHECK(std::abs(p.heights(0)) <= 1e-9 * p.radius);
      CHECK(p.gradients.row(0).norm() <= 1e-9 * p.radius);
      CHECK(p.nodes.row(0).norm() == 0.0);
      CHECK(std::abs(p.rotation.determinant() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("patch heights and gradients follow the cap formula") {
  const Surface m = make_icosphere(1.0, 4);
  PatchOptions opt;
  opt.grid_step = 0.02;
  const PatchChart p = extract_patch(m, 7, opt);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double r2 = p.nodes.row(i).squaredNorm();
    CHECK(std::abs(p.heights(i) + (1 - std::sqrt(1 - r2))) < 5e-3);
    const Eigen::RowVector2d expect = -p.nodes.row(i) / std::sqrt(1 - r2);
    CHECK((p.gradients.row(i) - expect).norm() < 2e-2);
  }
  CHECK(p.grad_holder > 0);
  CHECK(p.holder_exponent == 0.5);
}

TEST_CASE("tighter gradient bound shrinks the patch") {
  const Surface m = make_perturbed_sphere(1.0, 3, 0.1, 2);
  double prev = 1e9;
  for (double bound : {0.8, 0.5, 0.3, 0.1}) {
    PatchOptions opt;
    opt.grad_bound = bound;
    opt.grid_step = 0.01;
    opt.compute_holder = false;
    const double r = extract_patch(m, 11, opt).radius;
    CHECK(r <= prev);
    prev = r;
  }
}

TEST_CASE("flat disc patch stops at the fixture boundary") {
  const Surface disc = make_flat_disc(1.0, 8);
  PatchOptions opt;
  opt.grid_step = 0.02;
  const PatchChart p = extract_patch(disc, 0, opt);
  CHECK(p.radius > 0.8);
  CHECK(p.radius <= 1.0);
  CHECK(p.grad_sup < 1e-12);
}

TEST_CASE("patch on a curve") {
  const Surface c = make_circle(1.0, 2048);
  PatchOptions opt;
  opt.grid_step = 0.005;
  const PatchChart p = extract_patch(c, 0, opt);
  CHECK(p.dim() == 1);
  CHECK(std::abs(p.radius - kTarget) <= 0.03 * kTarget);
  CHECK_THROWS_AS(extract_patch(make_circle(1.0, 64, true), 0, opt), UnsupportedMode);
}

TEST_CASE("dumbbell neck patch is single-valued by brute-force ray casting") {
  const double eps = 0.1;
  const Surface bell = make_dumbbell(eps, 0.0, 120, 32);
  // vertex closest to the neck centre
  Eigen::Index neck = 0;
  for (Eigen::Index v = 0; v < bell.num_vertices(); ++v)
    if (std::abs(bell.vertices()(v, 2)) < std::abs(bell.vertices()(neck, 2))) neck = v;
  PatchOptions opt;
  opt.grid_step = 0.01;
  opt.compute_holder = false;
  PatchChart p;
  try {
    p = extract_patch(bell, neck, opt);
  } catch (const NonGraphical&) {
    return;
  }
  CHECK(p.radius < 2 * eps);
  const double tol = 1e-9 * bell.diameter();
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    Eigen::Vector3d local = Eigen::Vector3d::Zero();
    local.head(2) = p.nodes.row(i).transpose();
    const Eigen::Vector3d origin = p.origin + p.rotation.transpose() * local;
    const Eigen::Vector3d dir = p.rotation.row(2).transpose();
    const auto hits = brute_line_hits(bell, origin, dir, p.radius, tol);
    REQUIRE(hits.size() == 1);
    CHECK(std::abs(hits[0] - p.heights(i)) < 1e-9);
  }
  // one step further the chart breaks: a second sheet or a steep gradient
  opt.grid_step = p.radius + opt.grid_step;
  bool next_fails = false;
  try {
    next_fails = extract_patch(bell, neck, opt).radius < opt.grid_step;
  } catch (const NonGraphical&) {
    next_fails = true;
  }
  CHECK(next_fails);
}

TEST_CASE("exact ball clipping") {
  // planar disc fully inside the fixture: area pi r^2 exactly
  const Surface disc = make_flat_disc(1.0, 8);
  for (auto [r, ratio] : ahlfors_ratio(disc, 0, {0.1, 0.3, 0.6}))
    CHECK(ratio == doctest::Approx(std::numbers::pi).epsilon(1e-12));

  const Surface s = make_icosphere(1.0, 4);
  const auto small = ahlfors_ratio(s, 0, {0.01, 0.05});
  for (auto [r, ratio] : small) CHECK(std::abs(ratio - std::numbers::pi) < 1e-2 * std::numbers::pi);
  const auto all = ahlfors_ratio(s, 0, {2.0});
  CHECK(all[0].second == doctest::Approx(area(s) / 4).epsilon(1e-12));
  CHECK_THROWS_AS(ahlfors_ratio(s, 0, {0.0}), InvalidParams);
  CHECK_THROWS_AS(ahlfors_ratio(s, 0, {5.0}), InvalidParams);

  // independent oracle: fine sub-triangle midpoint sampling of a ragged mesh
  const Surface m = make_perturbed_sphere(1.0, 1, 0.2, 3);
  const Eigen::VectorXd x = m.vertices().row(4).transpose();
  for (double r : {0.3, 0.7, 1.1}) {
    const int n = 200;
    double sampled = 0;
    for (Eigen::Index e = 0; e < m.num_elements(); ++e) {
      const Eigen::Vector3d a = m.vertices().row(m.elements()(e, 0)).transpose();
      const Eigen::Vector3d b = m.vertices().row(m.elements()(e, 1)).transpose();
      const Eigen::Vector3d c = m.vertices().row(m.elements()(e, 2)).transpose();
      const double cell = m.element_measures()(e) / (n * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; i + j < n; ++j) {
          const Eigen::Vector3d up = a + ((i + 1.0 / 3) * (b - a) + (j + 1.0 / 3) * (c - a)) / n;
          if ((up - x).norm() <= r) sampled += cell;
          if (i + j + 1 < n) {
            const Eigen::Vector3d down = a + ((i + 2.0 / 3) * (b - a) + (j + 2.0 / 3) * (c - a)) / n;
            if ((down - x).norm() <= r) sampled += cell;
          }
        }
    }
    const double exact = measure_in_ball(m, x, r);
    CHECK(std::abs(exact - sampled) < 2e-3 * exact);
  }
}

TEST_CASE("Ahlfors ratio on curves") {
  const Surface c = make_circle(1.0, 4096);
  const auto res = ahlfors_ratio(c, 0, {0.01, 2.0});
  CHECK(res[0].second == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(res[1].second == doctest::Approx(area(c) / 2).epsilon(1e-12));
}

TEST_CASE("chord-arc constant") {
  const Surface s = make_icosphere(1.0, 4);
  const auto r = chord_arc_constant(s, 32, 1);
  CHECK(r.gamma >= 1.0);
  CHECK(std::abs(r.gamma - std::numbers::pi / 2) <= 0.05 * std::numbers::pi / 2);
  const auto again = chord_arc_constant(s, 32, 1, 3);
  CHECK(again.gamma == r.gamma);
  CHECK(again.witness_a == r.witness_a);
  CHECK(again.witness_b == r.witness_b);

  const Surface disc = make_flat_disc(1.0, 10);
  const double flat = chord_arc_constant(disc, 1000, 0).gamma;
  CHECK(flat >= 1.0);
  CHECK(flat <= 1.02);

  double prev = 0;
  for (double eps : {0.2, 0.1, 0.05}) {
    const double g = chord_arc_constant(make_dumbbell(eps, 0.0, 120, 32), 64, 1).gamma;
    CHECK(g > prev);
    prev = g;
  }
  CHECK_THROWS_AS(chord_arc_constant(s, 0, 1), InvalidParams);
}

TEST_CASE("chord-arc constant on a disconnected mesh") {
  const Surface a = make_icosphere(1.0, 0);
  PointMatrix<double> pts(24, 3);
  pts.topRows(12) = a.vertices();
  pts.bottomRows(12) = a.vertices();
  pts.bottomRows(12).col(0).array() += 5.0;
  ElementMatrix el(40, 3);
  el.topRows(20) = a.elements();
  el.bottomRows(20) = a.elements().array() + 12;
  CHECK_THROWS_AS(chord_arc_constant(Surface::build(pts, el, Closure::closed), 10, 1), DisconnectedMesh);
}

TEST_CASE("stability probe on spheres") {
  double prev_h = 1e9, prev_u = 1e9;
  for (int sub : {2, 3, 4}) {
    const auto r = stability_probe(make_icosphere(1.0, sub), 0.5, 2.0, 1000);
    CHECK(r.starshaped);
    CHECK(std::abs(r.R0 - 1) < 0.02);
    CHECK(r.hausdorff < prev_h);
    CHECK(r.u_seminorm < prev_u);
    prev_h = r.hausdorff;
    prev_u = r.u_seminorm;
  }
  CHECK(prev_h < 5e-3);

  const auto p = stability_probe(make_perturbed_sphere(1.0, 3, 0.05, 3));
  CHECK(p.hausdorff > 0);
  CHECK(p.hausdorff < 0.1);
  CHECK(p.u_seminorm > 0);
}

TEST_CASE("stability probe is translation invariant") {
  const Surface m = make_perturbed_sphere(1.0, 2, 0.05, 3);
  Eigen::VectorXd shift(3);
  shift << 5, 0, 0;
  const auto a = stability_probe(m, 0.5, 2.0, 500);
  const auto b = stability_probe(translate(m, RowVectorX<double>(shift.transpose())), 0.5, 2.0, 500);
  CHECK((b.center - a.center - shift).norm() < 1e-12);
  CHECK(b.R0 == doctest::Approx(a.R0).epsilon(1e-12));
  CHECK(b.u_seminorm == doctest::Approx(a.u_seminorm).epsilon(1e-9));
  CHECK(b.hausdorff == doctest::Approx(a.hausdorff).epsilon(1e-9));
}

TEST_CASE("distance to mesh and sphere fit") {
  const Surface s = make_icosphere(2.0, 3);
  Eigen::VectorXd shift(3);
  shift << 1, -2, 0.5;
  const SphereFit fit = fit_sphere(translate(s, RowVectorX<double>(shift.transpose())));
  CHECK((fit.center - shift).norm() < 1e-9);
  CHECK(fit.radius == doctest::Approx(2.0).epsilon(1e-12));

  // point-to-mesh distance against dense sampling of the closest triangle area
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 0; k < 5; ++k) {
    const Eigen::Vector3d p(u(rng), u(rng), u(rng));
    const double d = distance_to_mesh(s, p);
    double vertex_min = 1e9;
    for (Eigen::Index v = 0; v < s.num_vertices(); ++v)
      vertex_min = std::min(vertex_min, (s.vertices().row(v).transpose() - p).norm());
    CHECK(d <= vertex_min + 1e-15);
    CHECK(d >= std::abs(p.norm() - 2.0) - 1e-12);
  }
}
