#pragma once

#include <filesystem>
#include <iosfwd>

#include "ugrid/geometry.hpp"

namespace ugrid {

// Wavefront OBJ subset: `v x y z` and `f` records (1-based or negative
// indices, `v`, `v/vt`, `v//vn`, `v/vt/vn` corner forms). Faces with more
// than three corners are fan-triangulated. Every other record is skipped.
TriangleMesh parse_obj(std::istream& in);
TriangleMesh load_obj(const std::filesystem::path& path);

void write_obj(const TriangleMesh& mesh, std::ostream& out);
void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path);

}  // namespace ugrid
