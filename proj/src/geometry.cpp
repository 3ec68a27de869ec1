#include "ugrid/geometry.hpp"

#include <string>

#include "ugrid/errors.hpp"

namespace ugrid {

void TriangleMesh::validate() const {
  const auto nverts = vertices.size();
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (auto idx : triangles[t]) {
      if (idx >= nverts)
        throw InvariantError("triangle " + std::to_string(t) + " references vertex " +
                             std::to_string(idx) + " of " + std::to_string(nverts));
    }
  }
}

Aabb mesh_bounds(const TriangleMesh& mesh) {
  if (mesh.vertices.empty()) throw InputError("mesh_bounds: mesh has no vertices");
  Aabb box = Aabb::of_point(mesh.vertices.front());
  for (const auto& v : mesh.vertices) box.expand(v);
  return box;
}

Aabb triangle_aabb(const TriangleMesh& mesh, std::size_t tri_index) {
  const Vec3& a = mesh.corner(tri_index, 0);
  const Vec3& b = mesh.corner(tri_index, 1);
  const Vec3& c = mesh.corner(tri_index, 2);
  return {a.cwiseMin(b).cwiseMin(c), a.cwiseMax(b).cwiseMax(c)};
}

}  // namespace ugrid
