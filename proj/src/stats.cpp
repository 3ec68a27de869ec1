#include "ugrid/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "ugrid/builders.hpp"

namespace ugrid {
namespace {

void fill_grid_figures(GridStats& s, const CompactGrid& grid) {
  s.dims = grid.spec.dims();
  s.ncells = grid.spec.ncells();
  s.pair_count = grid.pair_count();
  for (std::size_t c = 0; c < s.ncells; ++c) s.nonempty_cells += grid.offsets[c + 1] != grid.offsets[c];
  s.pct_empty = s.ncells ? 100.0 * static_cast<double>(s.ncells - s.nonempty_cells) / s.ncells : 0;
  s.avg_items_per_nonempty_cell =
      s.nonempty_cells ? static_cast<double>(s.pair_count) / s.nonempty_cells : 0;
  s.memory_bytes = memory_bytes(s.ncells, s.pair_count);
}

void fill_item_figures(GridStats& s, std::uint64_t items, std::uint64_t max_cells,
                       std::uint64_t cells_total) {
  s.objects_in_grid = items;
  s.max_cells_per_item = max_cells;
  s.avg_cells_per_item = items ? static_cast<double>(cells_total) / items : 0;
}

}  // namespace

bool GridStats::operator==(const GridStats& o) const {
  return ntriangles == o.ntriangles && objects_in_grid == o.objects_in_grid &&
         (dims == o.dims).all() && ncells == o.ncells && nonempty_cells == o.nonempty_cells &&
         pair_count == o.pair_count && pct_empty == o.pct_empty &&
         avg_items_per_nonempty_cell == o.avg_items_per_nonempty_cell &&
         max_cells_per_item == o.max_cells_per_item &&
         avg_cells_per_item == o.avg_cells_per_item && memory_bytes == o.memory_bytes;
}

std::uint64_t estimate_pairs(std::uint64_t ntriangles, double avg_cells_per_item) {
  return static_cast<std::uint64_t>(std::llround(static_cast<double>(ntriangles) * avg_cells_per_item));
}

GridStats compute_stats(const CompactGrid& grid, const TriangleMesh& mesh) {
  GridStats s;
  s.ntriangles = mesh.triangle_count();
  fill_grid_figures(s, grid);
  const ObjectBoxes objects = collect_object_boxes(mesh, grid.spec);
  std::uint64_t max_cells = 0;
  std::uint64_t total = 0;
  for (const auto& box : objects.boxes) {
    const auto n = box_cell_count(box);
    max_cells = std::max(max_cells, n);
    total += n;
  }
  fill_item_figures(s, objects.size(), max_cells, total);
  return s;
}

GridStats compute_stats_from_grid(const CompactGrid& grid, std::uint64_t ntriangles) {
  GridStats s;
  s.ntriangles = ntriangles;
  fill_grid_figures(s, grid);
  std::vector<std::uint64_t> occurrences(ntriangles, 0);
  for (const auto id : grid.object_ids) ++occurrences.at(id);
  std::uint64_t items = 0;
  std::uint64_t max_cells = 0;
  for (const auto n : occurrences) {
    items += n != 0;
    max_cells = std::max(max_cells, n);
  }
  fill_item_figures(s, items, max_cells, grid.pair_count());
  return s;
}

std::string format_count(std::uint64_t n) {
  char buf[32];
  if (n >= 1'000'000)
    std::snprintf(buf, sizeof buf, "%.2f M", static_cast<double>(n) / 1e6);
  else if (n >= 1'000)
    std::snprintf(buf, sizeof buf, "%.2f K", static_cast<double>(n) / 1e3);
  else
    std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(n));
  return buf;
}

std::string format_megabytes(std::uint64_t bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f MB", static_cast<double>(bytes) / kBytesPerMiB);
  return buf;
}

}  // namespace ugrid
