#include "nlcurv/primitives.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <vector>

namespace nlcurv {
namespace {

using Vec3 = Eigen::Vector3d;
using Tri = std::array<int, 3>;

constexpr double kPi = std::numbers::pi;

struct TriangleSoup {
  std::vector<Vec3> vertices;
  std::vector<Tri> faces;
};

TriangleSoup icosahedron() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriangleSoup s;
  s.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : s.vertices) v.normalize();
  s.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  return s;
}

// 1-to-4 midpoint subdivision. New vertices are appended, so vertices of the
// coarse level keep their indices.
void subdivide(TriangleSoup& s, bool project) {
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
    Vec3 m = 0.5 * (s.vertices[static_cast<std::size_t>(a)] + s.vertices[static_cast<std::size_t>(b)]);
    if (project) m.normalize();
    s.vertices.push_back(m);
    const int idx = static_cast<int>(s.vertices.size()) - 1;
    midpoint.emplace(key, idx);
    return idx;
  };
  std::vector<Tri> faces;
  faces.reserve(s.faces.size() * 4);
  for (const auto& [a, b, c] : s.faces) {
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    faces.push_back({a, ab, ca});
    faces.push_back({b, bc, ab});
    faces.push_back({c, ca, bc});
    faces.push_back({ab, bc, ca});
  }
  s.faces = std::move(faces);
}

TriangleSoup unit_icosphere(int subdivisions, bool project = true) {
  TriangleSoup s = icosahedron();
  for (int i = 0; i < subdivisions; ++i) subdivide(s, project);
  return s;
}

Surface to_surface(const std::vector<Vec3>& verts, const std::vector<Tri>& faces,
                   Closure closure = Closure::closed) {
  PointMatrix<double> V(static_cast<Eigen::Index>(verts.size()), 3);
  for (std::size_t i = 0; i < verts.size(); ++i) V.row(static_cast<Eigen::Index>(i)) = verts[i].transpose();
  ElementMatrix E(static_cast<Eigen::Index>(faces.size()), 3);
  for (std::size_t i = 0; i < faces.size(); ++i)
    for (int k = 0; k < 3; ++k) E(static_cast<Eigen::Index>(i), k) = faces[i][static_cast<std::size_t>(k)];
  return Surface::build(std::move(V), std::move(E), closure);
}

void require(bool ok, const char* what) {
  if (!ok) throw InvalidParams(what);
}

// Surface of revolution about the z axis through profile points (r_k, z_k);
// the first and last points must lie on the axis.
Surface revolve(const std::vector<std::pair<double, double>>& profile, int ring_segments) {
  const int rings = static_cast<int>(profile.size()) - 2;
  std::vector<Vec3> verts;
  verts.push_back({0, 0, profile.front().second});
  for (int k = 1; k <= rings; ++k) {
    const auto [r, z] = profile[static_cast<std::size_t>(k)];
    for (int j = 0; j < ring_segments; ++j) {
      const double phi = 2.0 * kPi * j / ring_segments;
      verts.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
  }
  verts.push_back({0, 0, profile.back().second});
  const int south = 0;
  const int north = static_cast<int>(verts.size()) - 1;
  auto at = [&](int ring, int j) { return 1 + (ring - 1) * ring_segments + (j % ring_segments); };
  std::vector<Tri> faces;
  for (int j = 0; j < ring_segments; ++j) faces.push_back({south, at(1, j + 1), at(1, j)});
  for (int k = 1; k < rings; ++k)
    for (int j = 0; j < ring_segments; ++j) {
      faces.push_back({at(k, j), at(k, j + 1), at(k + 1, j + 1)});
      faces.push_back({at(k, j), at(k + 1, j + 1), at(k + 1, j)});
    }
  for (int j = 0; j < ring_segments; ++j) faces.push_back({north, at(rings, j), at(rings, j + 1)});
  return to_surface(verts, faces);
}

double uniform_pm1(std::mt19937_64& rng) {
  // 53 random bits mapped to [-1, 1); independent of the standard library's
  // distribution implementations.
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

}  // namespace

PrimitiveKind primitive_kind_from_string(const std::string& name) {
  if (name == "circle") return PrimitiveKind::circle;
  if (name == "sphere" || name == "sphere_icosub") return PrimitiveKind::sphere_icosub;
  if (name == "ellipsoid") return PrimitiveKind::ellipsoid;
  if (name == "torus") return PrimitiveKind::torus;
  if (name == "perturbed_sphere") return PrimitiveKind::perturbed_sphere;
  throw InvalidParams("unknown primitive '" + name + "'");
}

std::string to_string(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::circle: return "circle";
    case PrimitiveKind::sphere_icosub: return "sphere_icosub";
    case PrimitiveKind::ellipsoid: return "ellipsoid";
    case PrimitiveKind::torus: return "torus";
    case PrimitiveKind::perturbed_sphere: return "perturbed_sphere";
  }
  return "unknown";
}

double real_spherical_harmonic(int l, int m, const Eigen::Vector3d& direction) {
  const Vec3 u = direction.normalized();
  const double ct = std::clamp(u.z(), -1.0, 1.0);
  const double phi = std::atan2(u.y(), u.x());
  const int am = std::abs(m);
  double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * std::tgamma(l - am + 1.0) /
                          std::tgamma(l + am + 1.0));
  const double legendre = std::assoc_legendre(static_cast<unsigned>(l), static_cast<unsigned>(am), ct);
  if (m == 0) return norm * legendre;
  norm *= std::sqrt(2.0);
  return m > 0 ? norm * legendre * std::cos(am * phi) : norm * legendre * std::sin(am * phi);
}

PerturbationField::PerturbationField(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int l = 2; l <= 4; ++l)
    for (int m = -l; m <= l; ++m) coeffs_.push_back(uniform_pm1(rng));
  // sup norm over a dense Fibonacci sampling of the sphere
  const int n = 8192;
  double sup = 0;
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(1 - z * z);
    const double phi = i * kPi * (3.0 - std::sqrt(5.0));
    sup = std::max(sup, std::abs(raw(Vec3(r * std::cos(phi), r * std::sin(phi), z))));
  }
  scale_ = 1.0 / sup;
}

double PerturbationField::raw(const Eigen::Vector3d& direction) const {
  double sum = 0.0;
  std::size_t k = 0;
  for (int l = 2; l <= 4; ++l)
    for (int m = -l; m <= l; ++m) sum += coeffs_[k++] * real_spherical_harmonic(l, m, direction);
  return sum;
}

double PerturbationField::operator()(const Eigen::Vector3d& direction) const { return scale_ * raw(direction); }

double perturbation_field(const Eigen::Vector3d& direction, std::uint64_t seed) {
  return PerturbationField(seed)(direction);
}

Surface make_circle(double radius, int segments, bool embed_in_3d) {
  require(radius > 0, "circle radius must be positive");
  require(segments >= 8, "circle needs at least 8 segments");
  const int n = embed_in_3d ? 3 : 2;
  PointMatrix<double> V = PointMatrix<double>::Zero(segments, n);
  ElementMatrix E(segments, 2);
  for (int k = 0; k < segments; ++k) {
    const double t = 2.0 * kPi * k / segments;
    V(k, 0) = radius * std::cos(t);
    V(k, 1) = radius * std::sin(t);
    E(k, 0) = k;
    E(k, 1) = (k + 1) % segments;
  }
  return Surface::build(std::move(V), std::move(E));
}

Surface make_icosphere(double radius, int subdivisions) {
  require(radius > 0, "sphere radius must be positive");
  require(subdivisions >= 0 && subdivisions <= 8, "subdivision level must lie in [0, 8]");
  TriangleSoup s = unit_icosphere(subdivisions);
  for (auto& v : s.vertices) v *= radius;
  return to_surface(s.vertices, s.faces);
}

Surface make_flat_icosahedron(double radius, int subdivisions) {
  require(radius > 0, "radius must be positive");
  require(subdivisions >= 0 && subdivisions <= 8, "subdivision level must lie in [0, 8]");
  TriangleSoup s = unit_icosphere(subdivisions, false);
  for (auto& v : s.vertices) v *= radius;
  return to_surface(s.vertices, s.faces);
}

Surface make_ellipsoid(const Eigen::Vector3d& axes, int subdivisions) {
  require((axes.array() > 0).all(), "ellipsoid axes must be positive");
  require(subdivisions >= 0 && subdivisions <= 8, "subdivision level must lie in [0, 8]");
  TriangleSoup s = unit_icosphere(subdivisions);
  for (auto& v : s.vertices) v = v.cwiseProduct(axes);
  return to_surface(s.vertices, s.faces);
}

Surface make_torus(double major, double minor, int segments_major, int segments_minor) {
  require(major > 0 && minor > 0 && minor < major, "torus needs 0 < minor < major");
  require(segments_major >= 8 && segments_minor >= 4, "torus resolution too small");
  std::vector<Vec3> verts;
  for (int i = 0; i < segments_major; ++i) {
    const double u = 2.0 * kPi * i / segments_major;
    for (int j = 0; j < segments_minor; ++j) {
      const double v = 2.0 * kPi * j / segments_minor;
      const double rho = major + minor * std::cos(v);
      verts.push_back({rho * std::cos(u), rho * std::sin(u), minor * std::sin(v)});
    }
  }
  auto at = [&](int i, int j) {
    return (i % segments_major) * segments_minor + (j % segments_minor);
  };
  std::vector<Tri> faces;
  for (int i = 0; i < segments_major; ++i)
    for (int j = 0; j < segments_minor; ++j) {
      faces.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
      faces.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
    }
  return to_surface(verts, faces);
}

Surface make_perturbed_sphere(double radius, int subdivisions, double amplitude, std::uint64_t seed) {
  require(radius > 0, "sphere radius must be positive");
  require(amplitude >= 0, "perturbation amplitude must be non-negative");
  require(subdivisions >= 0 && subdivisions <= 8, "subdivision level must lie in [0, 8]");
  TriangleSoup s = unit_icosphere(subdivisions);
  const PerturbationField field(seed);
  for (auto& v : s.vertices) {
    const double r = radius * (1.0 + amplitude * field(v));
    if (!(r > 0)) throw InvalidParams("perturbation amplitude folds the sphere through its center");
    v *= r;
  }
  return to_surface(s.vertices, s.faces);
}

Surface make_dumbbell(double neck_radius, double gap, int profile_samples, int ring_segments) {
  require(neck_radius > 0 && neck_radius < 0.5, "neck radius must lie in (0, 0.5)");
  require(profile_samples >= 16 && ring_segments >= 8, "dumbbell resolution too small");
  if (gap <= 0) gap = 2.0 * neck_radius;
  const double zc = 1.0 + gap / 2.0;  // bulb centers at +-zc
  const double ztop = zc + 1.0;
  // smooth union of the two bulbs with the neck cylinder |z| < zc
  auto radius_at = [&](double z) {
    const double dz = std::abs(z) - zc;
    const double bulb = dz * dz < 1.0 ? std::sqrt(1.0 - dz * dz) : 0.0;
    const double w = std::clamp((zc - std::abs(z)) / 0.25 + 1.0, 0.0, 1.0);
    const double neck = neck_radius * w * w * (3.0 - 2.0 * w);
    constexpr double k = 8.0;
    return std::pow(std::pow(bulb, k) + std::pow(neck, k), 1.0 / k);
  };
  // dense polyline of the profile, clustered towards the poles
  const int dense = 200000;
  std::vector<std::pair<double, double>> poly;
  poly.reserve(dense + 1);
  for (int i = 0; i <= dense; ++i) {
    const double t = -1.0 + 2.0 * i / dense;
    const double z = ztop * std::sin(0.5 * kPi * t);
    poly.emplace_back(i == 0 || i == dense ? 0.0 : radius_at(z), z);
  }
  std::vector<double> arc(poly.size(), 0.0);
  for (std::size_t i = 1; i < poly.size(); ++i)
    arc[i] = arc[i - 1] + std::hypot(poly[i].first - poly[i - 1].first, poly[i].second - poly[i - 1].second);
  std::vector<std::pair<double, double>> profile;
  std::size_t cursor = 0;
  for (int k = 0; k <= profile_samples; ++k) {
    const double target = arc.back() * k / profile_samples;
    while (cursor + 1 < arc.size() - 1 && arc[cursor + 1] < target) ++cursor;
    const double span = arc[cursor + 1] - arc[cursor];
    const double t = span > 0 ? std::clamp((target - arc[cursor]) / span, 0.0, 1.0) : 0.0;
    profile.emplace_back((1 - t) * poly[cursor].first + t * poly[cursor + 1].first,
                         (1 - t) * poly[cursor].second + t * poly[cursor + 1].second);
  }
  profile.front() = {0.0, -ztop};
  profile.back() = {0.0, ztop};
  return revolve(profile, ring_segments);
}

Surface make_flat_disc(double radius, int rings) {
  require(radius > 0 && rings >= 1, "flat disc needs positive radius and rings");
  std::vector<Vec3> verts{{0, 0, 0}};
  std::vector<Tri> faces;
  // ring k has 6k vertices, as in a hexagonal disc
  std::vector<int> ring_start{0};
  for (int k = 1; k <= rings; ++k) {
    ring_start.push_back(static_cast<int>(verts.size()));
    for (int j = 0; j < 6 * k; ++j) {
      const double phi = 2.0 * kPi * j / (6 * k);
      const double r = radius * k / rings;
      verts.push_back({r * std::cos(phi), r * std::sin(phi), 0});
    }
  }
  for (int j = 0; j < 6; ++j) faces.push_back({0, 1 + j, 1 + (j + 1) % 6});
  for (int k = 1; k < rings; ++k) {
    const int n_in = 6 * k, n_out = 6 * (k + 1);
    const int in0 = ring_start[static_cast<std::size_t>(k)];
    const int out0 = ring_start[static_cast<std::size_t>(k + 1)];
    // merge the two rings by angle
    int i = 0, o = 0;
    while (i < n_in || o < n_out) {
      const double ai = 2.0 * kPi * (i + 0.5) / n_in;
      const double ao = 2.0 * kPi * (o + 0.5) / n_out;
      if (o < n_out && (i >= n_in || ao <= ai)) {
        faces.push_back({in0 + i % n_in, out0 + o, out0 + (o + 1) % n_out});
        ++o;
      } else {
        faces.push_back({in0 + i, out0 + o % n_out, in0 + (i + 1) % n_in});
        ++i;
      }
    }
  }
  return to_surface(verts, faces, Closure::open);
}

Surface make_flat_strip(double length, int segments) {
  require(length > 0 && segments >= 1, "flat strip needs positive length and segments");
  PointMatrix<double> V = PointMatrix<double>::Zero(segments + 1, 2);
  ElementMatrix E(segments, 2);
  for (int k = 0; k <= segments; ++k) V(k, 0) = length * k / segments;
  for (int k = 0; k < segments; ++k) {
    // traversed right to left so that n = (t_y, -t_x) is +y
    E(k, 0) = k + 1;
    E(k, 1) = k;
  }
  return Surface::build(std::move(V), std::move(E), Closure::open);
}

Surface make_primitive(const PrimitiveParams& p) {
  switch (p.kind) {
    case PrimitiveKind::circle: return make_circle(p.radius, p.resolution, p.embed_in_3d);
    case PrimitiveKind::sphere_icosub: return make_icosphere(p.radius, p.resolution);
    case PrimitiveKind::ellipsoid: return make_ellipsoid(p.axes, p.resolution);
    case PrimitiveKind::torus:
      return make_torus(p.radius, p.minor_radius, p.resolution,
                        p.resolution_minor > 0 ? p.resolution_minor : std::max(4, p.resolution / 2));
    case PrimitiveKind::perturbed_sphere:
      return make_perturbed_sphere(p.radius, p.resolution, p.amplitude, p.seed);
  }
  throw InvalidParams("unknown primitive kind");
}

}  // namespace nlcurv
