#pragma once

#include <cstdint>
#include <string>

#include "ugrid/geometry.hpp"
#include "ugrid/grid.hpp"

namespace ugrid {

struct GridStats {
  std::uint64_t ntriangles = 0;        // whole mesh
  std::uint64_t objects_in_grid = 0;   // triangles overlapping the grid
  Index3 dims = Index3::Zero();
  std::uint64_t ncells = 0;
  std::uint64_t nonempty_cells = 0;
  std::uint64_t pair_count = 0;        // NO
  double pct_empty = 0;
  double avg_items_per_nonempty_cell = 0;
  std::uint64_t max_cells_per_item = 0;
  double avg_cells_per_item = 0;
  std::uint64_t memory_bytes = 0;

  bool operator==(const GridStats& o) const;
};

/// 4-byte entries for the ncells + 1 offsets and the NO object ids.
constexpr std::uint64_t memory_bytes(std::uint64_t ncells, std::uint64_t pair_count) {
  return 4 * (ncells + 1) + 4 * pair_count;
}

inline constexpr double kBytesPerMiB = 1024.0 * 1024.0;

/// NO = nobjects * avgCellsPerObject, rounded to the nearest integer.
std::uint64_t estimate_pairs(std::uint64_t ntriangles, double avg_cells_per_item);

/// Per-object figures from the mesh geometry (object cell boxes).
GridStats compute_stats(const CompactGrid& grid, const TriangleMesh& mesh);

/// Same figures recovered from the stored grid alone: occurrences of each
/// object id stand in for its box cell count.
GridStats compute_stats_from_grid(const CompactGrid& grid, std::uint64_t ntriangles);

/// "735.60 K", "42.47 M", "512"
std::string format_count(std::uint64_t n);
/// "5.35 MB" with MB = 2^20 bytes.
std::string format_megabytes(std::uint64_t bytes);

}  // namespace ugrid
