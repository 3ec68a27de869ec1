#include "ugrid/traverse.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Geometry>

#include "ugrid/errors.hpp"

namespace ugrid {
namespace {

// Lowest id among the hits within kTieTolerance of the nearest one.
std::optional<Hit> select_nearest(const std::vector<Hit>& hits) {
  if (hits.empty()) return std::nullopt;
  double t_min = std::numeric_limits<double>::infinity();
  for (const auto& h : hits) t_min = std::min(t_min, h.t);
  std::optional<Hit> best;
  for (const auto& h : hits) {
    if (h.t > t_min + kTieTolerance) continue;
    if (!best || h.triangle_id < best->triangle_id) best = h;
  }
  return best;
}

// Calls visit(cell_id, t_entry, t_exit) for each cell pierced by the ray, front
// to back, until visit returns false or the ray leaves the grid.
template <class Visit>
void walk_cells(const GridSpec& spec, const Ray& ray, Visit&& visit) {
  const auto span = clip_to_box(ray, spec.bounds());
  if (!span) return;
  const auto [t_start, t_end] = *span;

  const Vec3& lo = spec.bounds().lo;
  const Vec3& size = spec.cell_size();
  const Vec3& o = ray.origin();
  const Vec3& d = ray.direction();
  const Index3& dims = spec.dims();
  const Vec3 start = ray.at(t_start);

  std::array<std::int64_t, 3> cell{};
  std::array<int, 3> step{};
  for (int k = 0; k < 3; ++k) {
    const double f = std::floor((start[k] - lo[k]) / size[k]);
    cell[k] = static_cast<std::int64_t>(std::clamp(f, 0.0, static_cast<double>(dims[k] - 1)));
    step[k] = d[k] > 0 ? 1 : (d[k] < 0 ? -1 : 0);
  }
  auto boundary_t = [&](int k) {
    if (step[k] == 0) return std::numeric_limits<double>::infinity();
    const std::int64_t face = step[k] > 0 ? cell[k] + 1 : cell[k];
    return (lo[k] + static_cast<double>(face) * size[k] - o[k]) / d[k];
  };

  double t_entry = t_start;
  for (;;) {
    std::array<double, 3> next{boundary_t(0), boundary_t(1), boundary_t(2)};
    const int axis = static_cast<int>(std::min_element(next.begin(), next.end()) - next.begin());
    const double t_exit = std::min(next[axis], t_end);
    const auto id = static_cast<std::uint32_t>(
        cell[0] + std::int64_t{dims.x()} * (cell[1] + std::int64_t{dims.y()} * cell[2]));
    if (!visit(id, t_entry, t_exit)) return;
    if (next[axis] >= t_end) return;
    cell[axis] += step[axis];
    if (cell[axis] < 0 || cell[axis] >= static_cast<std::int64_t>(dims[axis])) return;
    t_entry = std::max(t_entry, next[axis]);
  }
}

}  // namespace

Ray::Ray(const Vec3& origin, const Vec3& direction, double t_max)
    : origin_(origin), direction_(direction), t_max_(t_max) {
  if (!origin.allFinite() || !direction.allFinite()) throw InputError("ray must be finite");
  if (std::abs(direction.norm() - 1.0) > 1e-9) throw InputError("ray direction must be unit length");
  if (!(t_max > 0)) throw InputError("ray t_max must be positive");
}

std::optional<double> ray_triangle(const Ray& ray, const Vec3& v0, const Vec3& v1, const Vec3& v2) {
  const Vec3 e1 = v1 - v0;
  const Vec3 e2 = v2 - v0;
  const Vec3 p = ray.direction().cross(e2);
  const double det = e1.dot(p);
  if (std::abs(det) <= 1e-12 * e1.norm() * e2.norm() || det == 0) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 s = ray.origin() - v0;
  const double u = s.dot(p) * inv;
  if (u < -kEdgeTolerance || u > 1 + kEdgeTolerance) return std::nullopt;
  const Vec3 q = s.cross(e1);
  const double v = ray.direction().dot(q) * inv;
  if (v < -kEdgeTolerance || u + v > 1 + kEdgeTolerance) return std::nullopt;
  const double t = e2.dot(q) * inv;
  if (t < 0 || t > ray.t_max()) return std::nullopt;
  return t;
}

std::optional<Hit> brute_force_raycast(const TriangleMesh& mesh, const Ray& ray) {
  std::vector<Hit> hits;
  for (std::size_t i = 0; i < mesh.triangle_count(); ++i) {
    if (auto t = ray_triangle(ray, mesh.corner(i, 0), mesh.corner(i, 1), mesh.corner(i, 2)))
      hits.push_back({static_cast<std::uint32_t>(i), *t});
  }
  return select_nearest(hits);
}

std::optional<Hit> dda_traverse(const CompactGrid& grid, const TriangleMesh& mesh, const Ray& ray,
                                std::vector<std::uint32_t>* visited) {
  std::vector<Hit> hits;
  double nearest = std::numeric_limits<double>::infinity();
  walk_cells(grid.spec, ray, [&](std::uint32_t cell, double, double t_exit) {
    if (visited) visited->push_back(cell);
    for (const auto id : cell_objects(grid, cell)) {
      if (auto t = ray_triangle(ray, mesh.corner(id, 0), mesh.corner(id, 1), mesh.corner(id, 2))) {
        hits.push_back({id, *t});
        nearest = std::min(nearest, *t);
      }
    }
    // Everything up to t_exit has been seen, including the tie band.
    return !(nearest + kTieTolerance < t_exit);
  });
  return select_nearest(hits);
}

std::vector<std::uint32_t> dda_cells(const GridSpec& spec, const Ray& ray) {
  std::vector<std::uint32_t> cells;
  walk_cells(spec, ray, [&](std::uint32_t cell, double, double) {
    cells.push_back(cell);
    return true;
  });
  return cells;
}

std::optional<std::pair<double, double>> clip_to_box(const Ray& ray, const Aabb& box) {
  double t0 = 0;
  double t1 = ray.t_max();
  for (int k = 0; k < 3; ++k) {
    const double o = ray.origin()[k];
    const double d = ray.direction()[k];
    if (d == 0) {
      if (o < box.lo[k] || o > box.hi[k]) return std::nullopt;
      continue;
    }
    double ta = (box.lo[k] - o) / d;
    double tb = (box.hi[k] - o) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::nullopt;
  }
  return std::make_pair(t0, t1);
}

}  // namespace ugrid
