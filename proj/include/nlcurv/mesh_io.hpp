#pragma once

#include <iosfwd>
#include <string>

#include "nlcurv/surface.hpp"

namespace nlcurv {

enum class MeshFormat { off, obj };

/// Guess the format from the file extension (case-insensitive).
MeshFormat format_from_path(const std::string& path);

/// Read an ASCII OFF or OBJ file. Triangles give surfaces; two-index faces
/// (OFF) or `l` records (OBJ) give closed polylines. A polyline whose z
/// coordinates are all zero is read as a planar curve.
Surface load_mesh(const std::string& path, MeshFormat format);
Surface load_mesh(const std::string& path);

Surface read_off(std::istream& in);
Surface read_obj(std::istream& in);

void write_off(std::ostream& out, const Surface& mesh);
void write_off(const std::string& path, const Surface& mesh);

}  // namespace nlcurv
