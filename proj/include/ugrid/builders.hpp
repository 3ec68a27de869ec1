#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ugrid/geometry.hpp"
#include "ugrid/grid.hpp"
#include "ugrid/parallel.hpp"

namespace ugrid {

enum class Phase : std::size_t { count, scan, pairgen, sort, rle, finalize };
inline constexpr std::size_t kPhaseCount = 6;
inline constexpr std::array<Phase, kPhaseCount> kAllPhases = {
    Phase::count, Phase::scan, Phase::pairgen, Phase::sort, Phase::rle, Phase::finalize};

std::string_view phase_name(Phase phase);

// Work is counted in elementary per-element steps: one pair written, one
// scan element, one atomic increment, one radix pass over an element.
struct PhaseStats {
  double ms = 0;
  std::uint64_t max_task_work = 0;
  std::uint64_t total_work = 0;
};

struct BuildReport {
  std::array<PhaseStats, kPhaseCount> phases{};
  std::uint64_t pair_count = 0;

  PhaseStats& operator[](Phase p) { return phases[static_cast<std::size_t>(p)]; }
  const PhaseStats& operator[](Phase p) const { return phases[static_cast<std::size_t>(p)]; }

  double total_ms() const;
  // Load-balance figures of the pair generation phase.
  std::uint64_t max_task_work() const { return (*this)[Phase::pairgen].max_task_work; }
  std::uint64_t total_work() const { return (*this)[Phase::pairgen].total_work; }
};

struct BuildOptions {
  unsigned workers = 0;  // 0 = hardware concurrency
  std::size_t min_grain = Executor::kDefaultGrain;

  Executor executor() const { return Executor(workers, min_grain); }
};

// Cell boxes of the objects that overlap the grid, in ascending object order.
// ids[i] is the mesh triangle index of boxes[i].
struct ObjectBoxes {
  std::vector<CellBox> boxes;
  std::vector<std::uint32_t> ids;

  std::size_t size() const noexcept { return boxes.size(); }
};

ObjectBoxes collect_object_boxes(const TriangleMesh& mesh, const GridSpec& spec,
                                 const Executor& ex = Executor{});

// Intermediate arrays of the parallel pipeline, in pipeline order.
struct ParallelTrace {
  std::vector<std::uint32_t> cell_counts;       // V before the scan
  std::vector<std::uint32_t> object_offsets;    // V after the scan
  std::uint64_t pair_count = 0;                 // NO
  std::vector<std::uint32_t> object_ids;        // O in object order
  std::vector<std::uint32_t> relative_cells;    // C after the segmented scan
  std::vector<std::uint32_t> global_cells;      // C after cell id conversion
  std::vector<std::uint32_t> sorted_cells;      // C after the radix sort
  std::vector<std::uint32_t> sorted_objects;    // O after the radix sort
  std::vector<std::uint32_t> run_cells;         // non-empty cells
  std::vector<std::uint32_t> run_counts;        // their object counts
  std::vector<std::uint32_t> offsets;           // G
};

struct BuildResult {
  CompactGrid grid;
  BuildReport report;
};

/// Load-balanced construction: every (cell, object) pair is produced by its
/// own constant-work task, built from scans, a segmented scan, a stable radix
/// sort and a run-length encode.
BuildResult build_parallel(const TriangleMesh& mesh, const GridSpec& spec,
                           const BuildOptions& options = {});
BuildResult build_parallel(const ObjectBoxes& objects, const GridSpec& spec,
                           const BuildOptions& options = {}, ParallelTrace* trace = nullptr);

/// Sort-based baseline: one task per object writes all of its pairs, then
/// radix sort and run-length encode as above.
BuildResult build_sorted(const TriangleMesh& mesh, const GridSpec& spec,
                         const BuildOptions& options = {});
BuildResult build_sorted(const ObjectBoxes& objects, const GridSpec& spec,
                         const BuildOptions& options = {});

/// Atomic-counter baseline: count pass, scan, fill pass claiming slots with
/// atomic increments, then per-cell sort into canonical order.
BuildResult build_compact(const TriangleMesh& mesh, const GridSpec& spec,
                          const BuildOptions& options = {});
BuildResult build_compact(const ObjectBoxes& objects, const GridSpec& spec,
                          const BuildOptions& options = {});

inline constexpr std::uint64_t kReferenceWorkGuard = 100'000'000;

/// Brute force over every (cell, object) combination. Throws SizeError when
/// ncells * objects exceeds kReferenceWorkGuard.
CompactGrid build_reference(const TriangleMesh& mesh, const GridSpec& spec);
CompactGrid build_reference(const ObjectBoxes& objects, const GridSpec& spec);

enum class Algorithm { parallel, sorted, compact, reference };

Algorithm parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm algo);

BuildResult build(Algorithm algo, const TriangleMesh& mesh, const GridSpec& spec,
                  const BuildOptions& options = {});

}  // namespace ugrid
