#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace ugrid {

using Vec3 = Eigen::Vector3d;

template <class Scalar>
struct AabbT {
  using Point = Eigen::Matrix<Scalar, 3, 1>;

  Point lo;
  Point hi;

  Point extent() const { return hi - lo; }
  bool valid() const { return (lo.array() <= hi.array()).all(); }

  bool contains(const Point& p) const {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  }

  // Closed-interval overlap: touching boxes overlap.
  bool overlaps(const AabbT& other) const {
    return (lo.array() <= other.hi.array()).all() && (other.lo.array() <= hi.array()).all();
  }

  void expand(const Point& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }

  static AabbT of_point(const Point& p) { return {p, p}; }
};

using Aabb = AabbT<double>;

using Triangle = std::array<std::uint32_t, 3>;

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;

  std::size_t triangle_count() const noexcept { return triangles.size(); }
  bool empty() const noexcept { return triangles.empty(); }

  const Vec3& corner(std::size_t tri, int k) const { return vertices[triangles[tri][k]]; }

  /// Throws InvariantError if any triangle index is out of range.
  void validate() const;
};

/// Tight bounds over every vertex. Throws InputError for a vertex-less mesh.
Aabb mesh_bounds(const TriangleMesh& mesh);

Aabb triangle_aabb(const TriangleMesh& mesh, std::size_t tri_index);

}  // namespace ugrid
