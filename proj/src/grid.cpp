#include "ugrid/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ugrid/errors.hpp"

namespace ugrid {

std::uint32_t cell_count(const Index3& dims) {
  const std::uint64_t n = std::uint64_t{dims.x()} * dims.y() * dims.z();
  if (n > std::numeric_limits<std::uint32_t>::max())
    throw SizeError("grid " + format_dims(dims) + " has " + std::to_string(n) +
                    " cells, beyond the 32-bit cell id space");
  return static_cast<std::uint32_t>(n);
}

std::string format_dims(const Index3& dims) {
  return std::to_string(dims.x()) + "x" + std::to_string(dims.y()) + "x" + std::to_string(dims.z());
}

Index3 parse_dims(const std::string& text) {
  Index3 dims;
  std::istringstream in(text);
  for (int k = 0; k < 3; ++k) {
    long long v = 0;
    if (!(in >> v) || v <= 0 || v > std::numeric_limits<std::uint32_t>::max())
      throw UsageError("bad dims '" + text + "', expected AxBxC with positive integers");
    dims[k] = static_cast<std::uint32_t>(v);
    if (k < 2 && in.get() != 'x') throw UsageError("bad dims '" + text + "', expected AxBxC");
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw UsageError("bad dims '" + text + "', trailing characters");
  return dims;
}

GridSpec::GridSpec(const Aabb& bounds, const Index3& dims) : bounds_(bounds), dims_(dims) {
  if ((dims_ == 0u).any()) throw InputError("grid dims must be positive, got " + format_dims(dims));
  if (!bounds.lo.allFinite() || !bounds.hi.allFinite() ||
      !(bounds.extent().array() > 0).all())
    throw InputError("grid bounds must be finite with positive extent on every axis");
  ncells_ = cell_count(dims_);
  cell_size_ = bounds.extent().array() / dims_.cast<double>();
}

Aabb GridSpec::cell_bounds(const Index3& coords) const {
  const Vec3 lo = bounds_.lo.array() + coords.cast<double>() * cell_size_.array();
  return {lo, lo + cell_size_};
}

std::uint32_t linearize(const Index3& coords, const Index3& dims) {
  if ((coords >= dims).any())
    throw InvariantError("cell coords outside grid " + format_dims(dims));
  return coords.x() + dims.x() * (coords.y() + dims.y() * coords.z());
}

Index3 delinearize(std::uint32_t cell_id, const Index3& dims) {
  const std::uint32_t slab = dims.x() * dims.y();
  const std::uint32_t z = cell_id / slab;
  const std::uint32_t rem = cell_id - z * slab;
  return {rem % dims.x(), rem / dims.x(), z};
}

std::uint64_t box_cell_count(const CellBox& box) {
  const auto m = (box.hi - box.lo + 1u).cast<std::uint64_t>();
  return m.x() * m.y() * m.z();
}

Index3 global_coords(const CellBox& box, std::uint64_t rid) {
  if (rid >= box_cell_count(box))
    throw InvariantError("relative cell offset " + std::to_string(rid) + " outside the object box");
  const auto m = (box.hi - box.lo + 1u).cast<std::uint64_t>();
  const std::uint64_t z = rid / (m.x() * m.y());
  const std::uint64_t y = (rid - z * m.x() * m.y()) / m.x();
  const std::uint64_t x = rid - m.x() * (y + m.y() * z);
  return box.lo + Index3(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y),
                         static_cast<std::uint32_t>(z));
}

std::optional<CellBox> object_cell_box(const Aabb& aabb, const GridSpec& spec) {
  if (aabb.lo.hasNaN() || aabb.hi.hasNaN()) throw InputError("object bounds contain NaN");
  if (!spec.bounds().overlaps(aabb)) return std::nullopt;

  const auto& lo = spec.bounds().lo;
  const auto& size = spec.cell_size();
  auto to_cell = [&](const Vec3& p, int k) {
    const double f = std::floor((p[k] - lo[k]) / size[k]);
    const double clamped = std::clamp(f, 0.0, static_cast<double>(spec.dims()[k] - 1));
    return static_cast<std::uint32_t>(clamped);
  };
  CellBox box;
  for (int k = 0; k < 3; ++k) {
    box.lo[k] = to_cell(aabb.lo, k);
    box.hi[k] = to_cell(aabb.hi, k);
  }
  return box;
}

Index3 compute_dims(const Aabb& bounds, std::uint64_t ntriangles, double density) {
  if (ntriangles == 0) throw InputError("compute_dims: need at least one triangle");
  if (!(density > 0)) throw InputError("compute_dims: density must be positive");
  const Vec3 d = bounds.extent();
  if (!(d.array() > 0).all()) throw InputError("compute_dims: bounds must have positive volume");
  const double volume = d.prod();
  const double k = std::cbrt(density * static_cast<double>(ntriangles) / volume);
  Index3 dims;
  for (int a = 0; a < 3; ++a) {
    const double r = std::round(d[a] * k);
    dims[a] = static_cast<std::uint32_t>(
        std::clamp(r, 1.0, static_cast<double>(std::numeric_limits<std::uint32_t>::max())));
  }
  return dims;
}

Aabb padded_scene_bounds(const TriangleMesh& mesh) {
  Aabb b = mesh_bounds(mesh);
  const double max_extent = b.extent().maxCoeff();
  const double pad = max_extent > 0 ? 1e-6 * max_extent : 1e-6;
  b.lo.array() -= pad;
  b.hi.array() += pad;
  return b;
}

GridSpec grid_for_mesh(const TriangleMesh& mesh, double density) {
  const Aabb bounds = padded_scene_bounds(mesh);
  return GridSpec(bounds, compute_dims(bounds, mesh.triangle_count(), density));
}

GridSpec grid_for_mesh(const TriangleMesh& mesh, const Index3& dims) {
  return GridSpec(padded_scene_bounds(mesh), dims);
}

CompactGrid CompactGrid::empty(const GridSpec& spec) {
  return {spec, std::vector<std::uint32_t>(std::size_t{spec.ncells()} + 1, 0u), {}};
}

void CompactGrid::check_invariants() const {
  const std::size_t ncells = spec.ncells();
  if (offsets.size() != ncells + 1) throw InvariantError("offset array must have ncells + 1 entries");
  if (offsets.front() != 0) throw InvariantError("first offset must be 0");
  if (offsets.back() != object_ids.size())
    throw InvariantError("last offset must equal the number of stored pairs");
  for (std::size_t c = 0; c < ncells; ++c) {
    if (offsets[c + 1] < offsets[c])
      throw InvariantError("offsets decrease at cell " + std::to_string(c));
    for (auto i = offsets[c] + 1; i < offsets[c + 1]; ++i) {
      if (object_ids[i] <= object_ids[i - 1])
        throw InvariantError("object ids not strictly ascending in cell " + std::to_string(c));
    }
  }
}

std::span<const std::uint32_t> cell_objects(const CompactGrid& grid, std::uint32_t cell_id) {
  if (cell_id >= grid.spec.ncells())
    throw InvariantError("cell " + std::to_string(cell_id) + " outside grid of " +
                         std::to_string(grid.spec.ncells()) + " cells");
  const auto begin = grid.offsets[cell_id];
  const auto end = grid.offsets[cell_id + 1];
  return std::span<const std::uint32_t>(grid.object_ids).subspan(begin, end - begin);
}

}  // namespace ugrid
