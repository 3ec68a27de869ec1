#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "ugrid/geometry.hpp"
#include "ugrid/grid.hpp"

namespace ugrid {

// Edge hits within this barycentric tolerance count as hits; hits whose t
// differ by less than this are ties, resolved to the lowest triangle id.
inline constexpr double kEdgeTolerance = 1e-9;
inline constexpr double kTieTolerance = 1e-9;

class Ray {
 public:
  // Throws InputError unless |direction| = 1 within 1e-9 and t_max > 0.
  Ray(const Vec3& origin, const Vec3& direction,
      double t_max = std::numeric_limits<double>::infinity());

  const Vec3& origin() const noexcept { return origin_; }
  const Vec3& direction() const noexcept { return direction_; }
  double t_max() const noexcept { return t_max_; }
  Vec3 at(double t) const { return origin_ + t * direction_; }

 private:
  Vec3 origin_;
  Vec3 direction_;
  double t_max_;
};

struct Hit {
  std::uint32_t triangle_id;
  double t;

  bool operator==(const Hit&) const = default;
};

/// Moller-Trumbore. Smallest t in [0, t_max] or nullopt; rays parallel to the
/// triangle plane miss.
std::optional<double> ray_triangle(const Ray& ray, const Vec3& v0, const Vec3& v1, const Vec3& v2);

/// Nearest hit over every triangle, ties broken by lowest id.
std::optional<Hit> brute_force_raycast(const TriangleMesh& mesh, const Ray& ray);

/// 3D-DDA walk through `grid`, front to back, testing the triangles stored in
/// each visited cell. Same tie rule as brute_force_raycast. When `visited` is
/// non-null the ids of the cells actually walked are appended to it.
std::optional<Hit> dda_traverse(const CompactGrid& grid, const TriangleMesh& mesh, const Ray& ray,
                                std::vector<std::uint32_t>* visited = nullptr);

/// Every cell the ray segment [0, t_max] passes through, in walk order.
std::vector<std::uint32_t> dda_cells(const GridSpec& spec, const Ray& ray);

/// Parametric interval of the ray inside `box`, clipped to [0, t_max].
std::optional<std::pair<double, double>> clip_to_box(const Ray& ray, const Aabb& box);

}  // namespace ugrid
