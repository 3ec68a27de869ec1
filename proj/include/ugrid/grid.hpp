#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ugrid/geometry.hpp"

namespace ugrid {

using Index3 = Eigen::Array<std::uint32_t, 3, 1>;

/// Product of the three dims. Throws SizeError past the 32-bit id space.
std::uint32_t cell_count(const Index3& dims);

/// "AxBxC"
std::string format_dims(const Index3& dims);
/// Parses "AxBxC"; throws UsageError on malformed or zero entries.
Index3 parse_dims(const std::string& text);

class GridSpec {
 public:
  // Throws InputError for non-positive extents or zero dims, SizeError if
  // the cell count does not fit 32 bits.
  GridSpec(const Aabb& bounds, const Index3& dims);

  const Aabb& bounds() const noexcept { return bounds_; }
  const Index3& dims() const noexcept { return dims_; }
  const Vec3& cell_size() const noexcept { return cell_size_; }
  std::uint32_t ncells() const noexcept { return ncells_; }

  // World-space box of one cell.
  Aabb cell_bounds(const Index3& coords) const;

  bool operator==(const GridSpec& other) const {
    return bounds_.lo == other.bounds_.lo && bounds_.hi == other.bounds_.hi &&
           (dims_ == other.dims_).all();
  }

 private:
  Aabb bounds_;
  Index3 dims_;
  Vec3 cell_size_;
  std::uint32_t ncells_;
};

/// Inclusive integer cell-coordinate box.
struct CellBox {
  Index3 lo;
  Index3 hi;

  bool contains(const Index3& c) const { return (c >= lo).all() && (c <= hi).all(); }
  bool operator==(const CellBox& o) const { return (lo == o.lo).all() && (hi == o.hi).all(); }
};

/// x-fastest: x + dims.x * (y + dims.y * z).
std::uint32_t linearize(const Index3& coords, const Index3& dims);
Index3 delinearize(std::uint32_t cell_id, const Index3& dims);

std::uint64_t box_cell_count(const CellBox& box);

/// Absolute coordinates of the rid-th cell of `box`, enumerating the box
/// x-fastest.
Index3 global_coords(const CellBox& box, std::uint64_t rid);

/// Cells covered by an object's bounds: floor-then-clamp on both corners.
/// Returns nullopt when the aabb is disjoint from the grid bounds (touching
/// counts as overlapping). Throws InputError on NaN.
std::optional<CellBox> object_cell_box(const Aabb& aabb, const GridSpec& spec);

/// dims_k = max(1, round(extent_k * cbrt(density * ntriangles / volume))).
Index3 compute_dims(const Aabb& bounds, std::uint64_t ntriangles, double density);

/// Mesh bounds grown by 1e-6 * max extent on every side, so boundary vertices
/// land strictly inside and flat axes get a positive extent.
Aabb padded_scene_bounds(const TriangleMesh& mesh);

GridSpec grid_for_mesh(const TriangleMesh& mesh, double density);
GridSpec grid_for_mesh(const TriangleMesh& mesh, const Index3& dims);

// Offsets (ncells + 1 entries, last one = pair count) into a concatenated
// list of object ids. Objects of cell c are object_ids[offsets[c] ..
// offsets[c+1]), ascending.
struct CompactGrid {
  GridSpec spec;
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> object_ids;

  std::uint64_t pair_count() const noexcept { return object_ids.size(); }

  static CompactGrid empty(const GridSpec& spec);

  /// Throws InvariantError naming the first violated structural invariant.
  void check_invariants() const;

  bool operator==(const CompactGrid& other) const = default;
};

/// Object ids stored in one cell. Throws InvariantError for cell_id >= ncells.
std::span<const std::uint32_t> cell_objects(const CompactGrid& grid, std::uint32_t cell_id);

}  // namespace ugrid
