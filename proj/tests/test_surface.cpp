#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nlcurv/mesh_io.hpp"
#include "nlcurv/primitives.hpp"
#include "nlcurv/surface.hpp"

using namespace nlcurv;

namespace {

std::string icosahedron_off(bool drop_last_face = false) {
  std::ostringstream out;
  write_off(out, make_icosphere(1.0, 0));
  if (!drop_last_face) return out.str();
  std::string text = out.str();
  text.replace(text.find("12 20 0"), 7, "12 19 0");
  return text.substr(0, text.rfind('\n', text.size() - 2) + 1);
}

// Unit cube as 12 triangles wound clockwise seen from outside.
const char* kInwardCube = R"(# cube
v 0 0 0
v 1 0 0
v 1 1 0
v 0 1 0
v 0 0 1
v 1 0 1
v 1 1 1
v 0 1 1
f 1 2 3
f 1 3 4
f 5 8 7
f 5 7 6
f 1 5 6
f 1 6 2
f 2 6 7
f 2 7 3
f 3 7 8
f 3 8 4
f 4 8 5
f 4 5 1
)";

}  // namespace

TEST_CASE("OFF icosahedron loads as a closed outward mesh") {
  std::istringstream in(icosahedron_off());
  const Surface m = read_off(in);
  CHECK(m.num_vertices() == 12);
  CHECK(m.num_elements() == 20);
  CHECK(m.signed_volume() > 0);
  CHECK(m.dim() == 2);
  CHECK(m.ambient_dim() == 3);
}

TEST_CASE("OFF with a missing face is rejected as non-manifold") {
  std::istringstream in(icosahedron_off(true));
  CHECK_THROWS_AS(read_off(in), NonManifoldError);
}

TEST_CASE("inward OBJ cube is flipped to outward orientation") {
  std::istringstream in(kInwardCube);
  const Surface m = read_obj(in);
  CHECK(m.signed_volume() == doctest::Approx(1.0));
  // the bottom face z = 0 must have normal -z after repair
  for (Eigen::Index e = 0; e < m.num_elements(); ++e) {
    bool bottom = true;
    for (int k = 0; k < 3; ++k) bottom = bottom && m.vertices()(m.elements()(e, k), 2) == 0.0;
    if (bottom) CHECK(m.element_normals()(e, 2) == doctest::Approx(-1.0));
  }
}

TEST_CASE("inconsistent winding is an orientation error") {
  std::string text = kInwardCube;
  text.replace(text.find("f 1 2 3"), 7, "f 1 3 2");
  std::istringstream in(text);
  CHECK_THROWS_AS(read_obj(in), OrientationError);
}

TEST_CASE("malformed files raise parse errors") {
  std::istringstream bad_header("OFX\n3 1 0\n");
  CHECK_THROWS_AS(read_off(bad_header), ParseError);
  std::istringstream truncated("OFF\n3 1 0\n0 0 0\n1 0 0\n");
  CHECK_THROWS_AS(read_off(truncated), ParseError);
  std::istringstream quad("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  CHECK_THROWS_AS(read_obj(quad), ParseError);
  std::istringstream out_of_range("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n");
  CHECK_THROWS_AS(read_off(out_of_range), ParseError);
}

TEST_CASE("OFF round trip keeps geometry") {
  const Surface torus = make_torus(2.0, 0.5, 24, 12);
  std::stringstream io;
  write_off(io, torus);
  const Surface back = read_off(io);
  CHECK(back.num_vertices() == torus.num_vertices());
  CHECK((back.vertices() - torus.vertices()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(area(back) == doctest::Approx(area(torus)).epsilon(1e-14));
}

TEST_CASE("planar polyline OFF loads as a curve in the plane") {
  std::stringstream io;
  write_off(io, make_circle(1.0, 16));
  const Surface c = read_off(io);
  CHECK(c.dim() == 1);
  CHECK(c.ambient_dim() == 2);
  CHECK(c.signed_volume() > 0);
}

TEST_CASE("mesh invariants on the primitive family") {
  const std::vector<Surface> family = {
      make_circle(1.5, 64),       make_icosphere(1.0, 2),
      make_ellipsoid({1, 1, 2}, 2), make_torus(2.0, 0.5, 32, 16),
      make_perturbed_sphere(1.0, 2, 0.1, 3), make_circle(1.0, 32, true)};
  for (const auto& m : family) {
    CHECK((m.element_measures().array() > 0).all());
    const double vsum = m.vertex_measures().sum();
    CHECK(std::abs(vsum - area(m)) <= 1e-10 * area(m));
    for (Eigen::Index e = 0; e < m.element_normals().rows(); ++e)
      CHECK(std::abs(m.element_normals().row(e).norm() - 1.0) < 1e-12);
    if (m.is_hypersurface()) CHECK(m.signed_volume() > 0);
  }
}

TEST_CASE("circle and sphere measures") {
  const double pi = std::numbers::pi;
  const Surface c = make_circle(1.0, 4096);
  CHECK(std::abs(area(c) - 2 * pi) < 1e-5);
  CHECK(area(c) == doctest::Approx(2 * 4096 * std::sin(pi / 4096)).epsilon(1e-14));

  const Surface c2 = make_circle(2.0, 1024);
  CHECK(std::abs(area(c2) - 4 * pi) < 1e-4);

  const Surface s5 = make_icosphere(1.0, 5);
  CHECK(area(s5) < 4 * pi);
  CHECK(area(s5) > 4 * pi * (1 - 0.002));

  const Surface ico = make_icosphere(1.0, 0);
  CHECK(ico.num_vertices() == 12);
  CHECK(ico.num_elements() == 20);
}

TEST_CASE("perturbed sphere is deterministic and reduces to the sphere at zero amplitude") {
  const Surface a = make_perturbed_sphere(1.0, 3, 0.0, 7);
  const Surface b = make_icosphere(1.0, 3);
  CHECK((a.vertices() - b.vertices()).cwiseAbs().maxCoeff() == 0.0);
  const Surface p1 = make_perturbed_sphere(1.0, 3, 0.05, 11);
  const Surface p2 = make_perturbed_sphere(1.0, 3, 0.05, 11);
  CHECK((p1.vertices() - p2.vertices()).cwiseAbs().maxCoeff() == 0.0);
  const Surface p3 = make_perturbed_sphere(1.0, 3, 0.05, 12);
  CHECK((p1.vertices() - p3.vertices()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("perturbation field has unit sup norm") {
  // a finer Fibonacci sampling than the one used for the normalization
  const int n = 50000;
  double sup = 0, acc = 0;
  const PerturbationField g(5);
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(1 - z * z);
    const double phi = i * std::numbers::pi * (3.0 - std::sqrt(5.0));
    const double v = g({r * std::cos(phi), r * std::sin(phi), z});
    sup = std::max(sup, std::abs(v));
    acc += v;
  }
  CHECK(sup == doctest::Approx(1.0).epsilon(1e-3));
  // degrees >= 2 have zero mean
  CHECK(std::abs(acc / n) < 1e-3);
  CHECK(perturbation_field({0, 0, 1}, 5) == g({0, 0, 1}));
}

TEST_CASE("rescale scales vertices and measures, keeps normals") {
  const Surface c = make_circle(1.0, 64);
  const Surface c3 = rescale(c, 3.0);
  for (Eigen::Index v = 0; v < c3.num_vertices(); ++v)
    CHECK(c3.vertices().row(v).norm() == doctest::Approx(3.0).epsilon(1e-15));
  const Surface same = rescale(c, 1.0);
  CHECK((same.vertices() - c.vertices()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(rescale(c, 0.0), InvalidParams);
  CHECK_THROWS_AS(rescale(c, -2.0), InvalidParams);

  // homogeneity of the area on random meshes and factors
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> lam(0.1, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Surface m = trial % 2 ? make_perturbed_sphere(1.0, 2, 0.1, trial) : make_circle(1.0, 40 + trial);
    const double l = lam(rng);
    const Surface r = rescale(m, l);
    const double expect = std::pow(l, m.dim()) * area(m);
    CHECK(std::abs(area(r) - expect) <= 1e-12 * expect);
    CHECK((r.element_normals() - m.element_normals()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("convexity check") {
  for (int sub = 0; sub <= 4; ++sub) {
    const auto res = convexity_check(make_icosphere(1.0, sub));
    CHECK(res.is_convex);
    CHECK(res.max_violation <= 1e-12);
  }
  const auto torus = convexity_check(make_torus(2.0, 0.5, 32, 16));
  CHECK_FALSE(torus.is_convex);
  CHECK(torus.max_violation > 0);
  CHECK_THROWS_AS(convexity_check(make_circle(1.0, 16, true)), UnsupportedMode);
}

TEST_CASE("convexity check agrees with an exhaustive half-space oracle on dented spheres") {
  int dented = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Surface m = make_perturbed_sphere(1.0, 1, 0.3, seed);
    // oracle: every (vertex, element) pair by explicit plane equation
    double worst = 0;
    for (Eigen::Index e = 0; e < m.num_elements(); ++e) {
      const Eigen::Vector3d a = m.vertices().row(m.elements()(e, 0)).transpose();
      const Eigen::Vector3d b = m.vertices().row(m.elements()(e, 1)).transpose();
      const Eigen::Vector3d c = m.vertices().row(m.elements()(e, 2)).transpose();
      const Eigen::Vector3d n = (b - a).cross(c - a).normalized();
      const Eigen::Vector3d g = (a + b + c) / 3.0;
      for (Eigen::Index v = 0; v < m.num_vertices(); ++v)
        worst = std::max(worst, (m.vertices().row(v).transpose() - g).dot(n));
    }
    const bool oracle_convex = worst <= 1e-9 * m.diameter();
    const auto res = convexity_check(m);
    CHECK(res.is_convex == oracle_convex);
    CHECK(res.max_violation == doctest::Approx(worst).epsilon(1e-12));
    if (!res.is_convex) ++dented;
  }
  CHECK(dented > 0);
}

TEST_CASE("flat fixtures and dumbbell are valid meshes") {
  const Surface disc = make_flat_disc(1.0, 8);
  CHECK(disc.closure() == Closure::open);
  CHECK(area(disc) > 3.0);
  CHECK((disc.element_normals().col(2).array() == 1.0).all());
  const Surface strip = make_flat_strip(2.0, 20);
  CHECK(strip.dim() == 1);
  CHECK((strip.element_normals().col(1).array() == 1.0).all());
  const Surface bell = make_dumbbell(0.1, 0.0, 120, 32);
  CHECK(bell.signed_volume() > 0);
  CHECK(bell.closure() == Closure::closed);
}

TEST_CASE("invalid primitive parameters") {
  CHECK_THROWS_AS(make_circle(1.0, 4), InvalidParams);
  CHECK_THROWS_AS(make_circle(-1.0, 16), InvalidParams);
  CHECK_THROWS_AS(make_icosphere(0.0, 2), InvalidParams);
  CHECK_THROWS_AS(make_icosphere(1.0, -1), InvalidParams);
  CHECK_THROWS_AS(make_torus(1.0, 2.0, 16, 8), InvalidParams);
  CHECK_THROWS_AS(primitive_kind_from_string("cone"), InvalidParams);
}
