#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlcurv/functionals.hpp"
#include "nlcurv/oracles.hpp"
#include "nlcurv/primitives.hpp"

using namespace nlcurv;

namespace {

EnergyParameters params_with(double s, double p, double q = 6.0) {
  EnergyParameters prm;
  prm.s = s;
  prm.p = p;
  prm.q = q;
  return prm;
}

double circle_vertex_fmc(int n, double s, QuadratureOrder order = QuadratureOrder::centroid) {
  const Surface c = make_circle(1.0, n);
  const auto q = build_scheme(c, order, DiagonalPolicy::skip_same_element);
  return fractional_mean_curvature(c, q, 0, params_with(s, 2));
}

}  // namespace

TEST_CASE("flat fixtures have vanishing curvature") {
  const Surface disc = make_flat_disc(1.0, 6);
  const auto qd = build_scheme(disc, QuadratureOrder::gauss3, DiagonalPolicy::skip_same_element);
  const auto prm = params_with(0.5, 2);
  CHECK(fractional_mean_curvature(disc, qd, 0, prm) == 0.0);
  CHECK(nonlocal_second_fundamental(disc, qd, 0, prm) == 0.0);
  CHECK(willmore_energy(disc, qd, prm).energy == 0.0);
  CHECK(bending_energy(disc, qd, prm).energy == 0.0);

  const Surface strip = make_flat_strip(2.0, 40);
  const auto qs = build_scheme(strip, QuadratureOrder::gauss7, DiagonalPolicy::skip_vertex_star);
  CHECK(willmore_energy(strip, qs, prm).energy == 0.0);
}

TEST_CASE("circle curvature converges to the closed form after extrapolation") {
  const double s = 0.5;
  const double exact = circle_fmc(1.0, s);
  const double coarse = circle_vertex_fmc(2048, s);
  const double fine = circle_vertex_fmc(4096, s);
  // the raw polygon bias decays like h^(1-s)
  CHECK(std::abs(fine - exact) < std::abs(coarse - exact));
  const double extrap = richardson_extrapolate(coarse, fine, 2.0, 1.0 - s);
  CHECK(std::abs(extrap - exact) < 1e-3 * std::abs(exact));
  CHECK(fine < 0);
}

TEST_CASE("sphere curvature converges to the closed form after extrapolation") {
  const double s = 0.5;
  const double exact = sphere_fmc(1.0, s);
  const auto value = [&](int sub) {
    const Surface m = make_icosphere(1.0, sub);
    const auto q = build_scheme(m, QuadratureOrder::centroid, DiagonalPolicy::skip_same_element);
    return fractional_mean_curvature(m, q, 0, params_with(s, 2));
  };
  const double coarse = value(3), fine = value(4);
  const double extrap = richardson_extrapolate(coarse, fine, 2.0, 1.0 - s);
  CHECK(std::abs(extrap - exact) < 5e-3 * std::abs(exact));
  CHECK(std::abs(extrap - exact) < std::abs(fine - exact));
}

TEST_CASE("convex identity |A| = -H and W = B") {
  const Surface m = make_icosphere(1.0, 2);
  const auto q = build_scheme(m, QuadratureOrder::gauss3, DiagonalPolicy::skip_same_element);
  const auto prm = params_with(0.4, 3);
  const VectorX<double> h = vertex_curvature_field(m, q, prm, false);
  const VectorX<double> a = vertex_curvature_field(m, q, prm, true);
  CHECK((h.array() < 0).all());
  CHECK(((a + h).array().abs() <= 1e-12 * a.array().abs()).all());
  const double w = willmore_energy(m, q, prm).energy;
  const double b = bending_energy(m, q, prm).energy;
  CHECK(std::abs(w - b) <= 1e-12 * b);
}

TEST_CASE("bending dominates Willmore on a non-convex torus") {
  const Surface t = make_torus(2.0, 0.6, 32, 16);
  const auto q = build_scheme(t, QuadratureOrder::centroid, DiagonalPolicy::skip_same_element);
  const auto prm = params_with(0.5, 2);
  const double w = willmore_energy(t, q, prm).energy;
  const double b = bending_energy(t, q, prm).energy;
  CHECK(b > w * (1 + 1e-6));
}

TEST_CASE("energies scale as lambda^(d - s p)") {
  const std::vector<Surface> meshes = {make_circle(1.0, 128), make_perturbed_sphere(1.0, 2, 0.1, 5)};
  for (const auto& m : meshes) {
    const auto prm = params_with(0.3, 3);
    const auto q = build_scheme(m, QuadratureOrder::gauss3, DiagonalPolicy::skip_same_element);
    const double base = willmore_energy(m, q, prm).energy;
    const double base_b = bending_energy(m, q, prm).energy;
    for (double lam : {0.5, 2.0, 10.0}) {
      const Surface r = rescale(m, lam);
      const auto qr = build_scheme(r, QuadratureOrder::gauss3, DiagonalPolicy::skip_same_element);
      const double factor = std::pow(lam, expected_scaling_exponent(m.dim(), prm.s, prm.p));
      CHECK(std::abs(willmore_energy(r, qr, prm).energy - factor * base) <= 1e-12 * factor * base);
      CHECK(std::abs(bending_energy(r, qr, prm).energy - factor * base_b) <= 1e-12 * factor * base_b);
    }
  }
}

TEST_CASE("planar curve and its 3-D embedding agree in projection mode") {
  const Surface planar = make_circle(1.0, 256);
  const Surface space = make_circle(1.0, 256, true);
  auto prm = params_with(0.5, 2);
  const auto qp = build_scheme(planar, QuadratureOrder::gauss3, DiagonalPolicy::skip_same_element);
  const auto qs = build_scheme(space, QuadratureOrder::gauss3, DiagonalPolicy::skip_same_element);
  const double flat = bending_energy(planar, qp, prm).energy;
  prm.codim = CodimMode::projection;
  const double embedded = bending_energy(space, qs, prm).energy;
  CHECK(std::abs(flat - embedded) <= 1e-10 * flat);
  // the hypersurface pairing has no meaning for a space curve
  prm.codim = CodimMode::hypersurface;
  CHECK_THROWS_AS(bending_energy(space, qs, prm), UnsupportedMode);
}

TEST_CASE("tangent-point radius") {
  using V2 = Eigen::Vector2d;
  // points on the unit circle: radius 2R for every pair
  for (double t : {0.3, 1.0, 2.5}) {
    const V2 x(std::cos(t), std::sin(t)), y(1, 0), ny(1, 0);
    CHECK(tangent_point_radius<double, 2>(x, y, ny) == doctest::Approx(2.0).epsilon(1e-13));
  }
  // along the normal at distance h: radius h
  CHECK(tangent_point_radius<double, 2>(V2(0, 0.7), V2(0, 0), V2(0, 1)) == doctest::Approx(0.7).epsilon(1e-15));
  // collinear with the tangent line: infinite radius
  CHECK(std::isinf(tangent_point_radius<double, 2>(V2(3, 0), V2(0, 0), V2(0, 1))));
  CHECK_THROWS_AS((tangent_point_radius<double, 2>(V2(1, 1), V2(1, 1), V2(0, 1))), InvalidParams);
}

TEST_CASE("tangent-point energy of the circle approaches pi^2") {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const auto prm = params_with(0.5, 2, 6);
  double prev_err = 1e300;
  for (int n : {128, 256, 512}) {
    const Surface c = make_circle(1.0, n);
    const auto q = build_scheme(c, QuadratureOrder::gauss3, DiagonalPolicy::skip_same_element);
    const double e = tangent_point_energy(c, q, prm).energy;
    const double err = std::abs(e - pi2);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 2e-2 * pi2);
}

TEST_CASE("tangent-point energy homogeneity") {
  const Surface m = make_perturbed_sphere(1.0, 1, 0.1, 2);
  const auto prm = params_with(0.5, 2, 5);
  const auto q = build_scheme(m, QuadratureOrder::centroid, DiagonalPolicy::skip_same_element);
  const double e1 = tangent_point_energy(m, q, prm).energy;
  const Surface m2 = rescale(m, 2.0);
  const auto q2 = build_scheme(m2, QuadratureOrder::centroid, DiagonalPolicy::skip_same_element);
  const double e2 = tangent_point_energy(m2, q2, prm).energy;
  const double factor = std::pow(2.0, 2 * prm.p - prm.q + 2 * m.dim());
  CHECK(std::abs(e2 - factor * e1) <= 1e-12 * factor * e1);
  CHECK_THROWS_AS(tangent_point_energy(m, q, params_with(0.5, 4, 3)), InvalidParams);
}

TEST_CASE("parallel evaluation is bit-identical for every worker count") {
  const Surface m = make_perturbed_sphere(1.0, 2, 0.1, 9);
  const auto q = build_scheme(m, QuadratureOrder::gauss3, DiagonalPolicy::skip_vertex_star);
  const auto prm = params_with(0.5, 4);
  const double ref = willmore_energy(m, q, prm, 1).energy;
  const VectorX<double> field = vertex_curvature_field(m, q, prm, false, 1);
  // serial brute force without the library reduction
  double brute = 0;
  for (Eigen::Index v = 0; v < m.num_vertices(); ++v)
    CHECK(fractional_mean_curvature(m, q, v, prm) == field(v));
  const VectorX<double> h = sample_curvature_field(m, q, prm, Pairing::signed_normal, 1);
  for (Eigen::Index i = 0; i < h.size(); ++i) brute += std::pow(std::abs(h(i)), 4.0) * q.weights(i);
  CHECK(std::abs(brute - ref) <= 1e-12 * ref);
  for (int workers : {4, 8}) {
    CHECK(willmore_energy(m, q, prm, workers).energy == ref);
    CHECK((vertex_curvature_field(m, q, prm, false, workers) - field).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(willmore_energy(m, q, prm, 4).energy == willmore_energy(m, q, prm, 4).energy);
}

TEST_CASE("limit normalization tends to the classical curvature") {
  auto prm = params_with(0.99, 2);
  prm.normalization = Normalization::limit_normalized;
  const Surface c = make_circle(1.0, 1024);
  const auto q = build_scheme(c, QuadratureOrder::centroid, DiagonalPolicy::skip_same_element);
  const double h = fractional_mean_curvature(c, q, 0, prm);
  const double raw = circle_vertex_fmc(1024, 0.99);
  CHECK(h == doctest::Approx(0.01 * raw).epsilon(1e-14));
  // classical curvature of the unit circle is -1 in this sign convention
  CHECK(std::abs((1 - 0.99) * circle_fmc(1.0, 0.99) + 1.0) < 2e-2);
}

TEST_CASE("invalid parameters") {
  const Surface c = make_circle(1.0, 32);
  const auto q = build_scheme(c, QuadratureOrder::centroid, DiagonalPolicy::skip_same_element);
  CHECK_THROWS_AS(fractional_mean_curvature(c, q, 0, params_with(1.2, 2)), InvalidParams);
  CHECK_THROWS_AS(fractional_mean_curvature(c, q, 0, params_with(0.5, 0.0)), InvalidParams);
  CHECK_THROWS_AS(fractional_mean_curvature(c, q, 99, params_with(0.5, 2)), InvalidParams);
}
