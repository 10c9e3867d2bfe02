#include "nlcurv/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

namespace nlcurv {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Strip comments and return the next non-empty line; false at end of input.
bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

Surface assemble(const std::vector<std::array<double, 3>>& verts,
                 const std::vector<std::vector<int>>& faces) {
  if (verts.empty()) throw ParseError("no vertices");
  if (faces.empty()) throw ParseError("no faces");
  const std::size_t arity = faces.front().size();
  if (arity != 2 && arity != 3)
    throw ParseError("only segments and triangles are supported, got a face with " +
                     std::to_string(arity) + " vertices");
  for (const auto& f : faces)
    if (f.size() != arity) throw ParseError("mixed element arities");

  bool planar = arity == 2 &&
                std::all_of(verts.begin(), verts.end(), [](const auto& v) { return v[2] == 0.0; });
  const int n = planar ? 2 : 3;
  PointMatrix<double> V(static_cast<Eigen::Index>(verts.size()), n);
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (int k = 0; k < n; ++k) V(static_cast<Eigen::Index>(i), k) = verts[i][static_cast<std::size_t>(k)];
  ElementMatrix E(static_cast<Eigen::Index>(faces.size()), static_cast<Eigen::Index>(arity));
  for (std::size_t i = 0; i < faces.size(); ++i)
    for (std::size_t k = 0; k < arity; ++k) E(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = faces[i][k];
  return Surface::build(std::move(V), std::move(E));
}

}  // namespace

MeshFormat format_from_path(const std::string& path) {
  const std::string l = lower(path);
  if (l.size() >= 4 && l.compare(l.size() - 4, 4, ".off") == 0) return MeshFormat::off;
  if (l.size() >= 4 && l.compare(l.size() - 4, 4, ".obj") == 0) return MeshFormat::obj;
  throw ParseError("cannot infer mesh format from '" + path + "'");
}

Surface read_off(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw ParseError("empty OFF file");
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic != "OFF") throw ParseError("missing OFF header");
  long nv = -1, nf = -1, ne = 0;
  if (!(header >> nv >> nf)) {
    if (!next_line(in, line)) throw ParseError("missing OFF counts");
    std::istringstream counts(line);
    if (!(counts >> nv >> nf)) throw ParseError("malformed OFF counts");
    counts >> ne;
  }
  if (nv <= 0 || nf <= 0) throw ParseError("OFF counts must be positive");

  std::vector<std::array<double, 3>> verts(static_cast<std::size_t>(nv));
  for (auto& v : verts) {
    if (!next_line(in, line)) throw ParseError("truncated OFF vertex list");
    std::istringstream ls(line);
    if (!(ls >> v[0] >> v[1] >> v[2])) throw ParseError("malformed OFF vertex: " + line);
  }
  std::vector<std::vector<int>> faces(static_cast<std::size_t>(nf));
  for (auto& f : faces) {
    if (!next_line(in, line)) throw ParseError("truncated OFF face list");
    std::istringstream ls(line);
    int k = 0;
    if (!(ls >> k) || k <= 0) throw ParseError("malformed OFF face: " + line);
    f.resize(static_cast<std::size_t>(k));
    for (auto& idx : f)
      if (!(ls >> idx)) throw ParseError("malformed OFF face: " + line);
  }
  return assemble(verts, faces);
}

Surface read_obj(std::istream& in) {
  std::vector<std::array<double, 3>> verts;
  std::vector<std::vector<int>> faces;
  std::string line;
  while (next_line(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      std::array<double, 3> v{};
      if (!(ls >> v[0] >> v[1])) throw ParseError("malformed OBJ vertex: " + line);
      if (!(ls >> v[2])) v[2] = 0.0;
      verts.push_back(v);
    } else if (tag == "f" || tag == "l") {
      std::vector<int> f;
      std::string tok;
      while (ls >> tok) {
        // "a", "a/b", "a//c", "a/b/c"
        const std::string head = tok.substr(0, tok.find('/'));
        int idx = 0;
        try {
          idx = std::stoi(head);
        } catch (const std::exception&) {
          throw ParseError("malformed OBJ index '" + tok + "'");
        }
        if (idx == 0) throw ParseError("OBJ indices are 1-based");
        f.push_back(idx > 0 ? idx - 1 : static_cast<int>(verts.size()) + idx);
      }
      if (tag == "l") {
        // a polyline record: split into consecutive segments
        for (std::size_t i = 0; i + 1 < f.size(); ++i) faces.push_back({f[i], f[i + 1]});
      } else {
        faces.push_back(std::move(f));
      }
    }
    // other records (vn, vt, o, g, s, usemtl, ...) carry nothing we need
  }
  return assemble(verts, faces);
}

Surface load_mesh(const std::string& path, MeshFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return format == MeshFormat::off ? read_off(in) : read_obj(in);
}

Surface load_mesh(const std::string& path) { return load_mesh(path, format_from_path(path)); }

void write_off(std::ostream& out, const Surface& mesh) {
  out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_elements() << " 0\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index v = 0; v < mesh.num_vertices(); ++v) {
    for (int k = 0; k < 3; ++k) {
      const double x = k < mesh.ambient_dim() ? mesh.vertices()(v, k) : 0.0;
      out << x << (k < 2 ? ' ' : '\n');
    }
  }
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
    out << mesh.elements().cols();
    for (Eigen::Index k = 0; k < mesh.elements().cols(); ++k) out << ' ' << mesh.elements()(e, k);
    out << '\n';
  }
}

void write_off(const std::string& path, const Surface& mesh) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  write_off(out, mesh);
}

}  // namespace nlcurv
