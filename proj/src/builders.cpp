#include "ugrid/builders.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "ugrid/errors.hpp"
#include "ugrid/primitives.hpp"

namespace ugrid {
namespace {

class Stopwatch {
 public:
  double lap_ms() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// A data-parallel stage that does O(1) work for each of `elements` items.
void add_uniform_stage(PhaseStats& phase, std::uint64_t elements, std::uint64_t per_element = 1) {
  if (elements == 0) return;
  phase.max_task_work += per_element;
  phase.total_work += elements * per_element;
}

void add_measured_stage(PhaseStats& phase, const TaskWork& work) {
  phase.max_task_work += work.max_task;
  phase.total_work += work.total;
}

void check_object_count(std::size_t n) {
  if (n > std::numeric_limits<std::uint32_t>::max())
    throw SizeError("more objects than the 32-bit object id space");
}

std::vector<std::uint32_t> count_cells(const ObjectBoxes& objects, const Executor& ex) {
  std::vector<std::uint32_t> counts(objects.size());
  ex.for_each_index(objects.size(), [&](std::size_t i) {
    counts[i] = static_cast<std::uint32_t>(box_cell_count(objects.boxes[i]));
  });
  return counts;
}

// Shared tail of the sort-based builders: sort pairs into cell order, run
// length encode the cell ids and turn the run lengths into offsets.
CompactGrid finish_from_pairs(std::vector<std::uint32_t> cells, std::vector<std::uint32_t> objs,
                              const GridSpec& spec, const Executor& ex, BuildReport& report,
                              Stopwatch& clock, ParallelTrace* trace) {
  const std::uint64_t pairs = cells.size();
  const unsigned key_bits = key_bits_for(spec.ncells());
  auto sorted = radix_sort_pairs(std::move(cells), std::move(objs), key_bits, ex);
  report[Phase::sort].ms += clock.lap_ms();
  add_uniform_stage(report[Phase::sort], pairs, radix_passes(key_bits));

  auto runs = run_length_encode(sorted.keys, ex);
  report[Phase::rle].ms += clock.lap_ms();
  add_uniform_stage(report[Phase::rle], pairs);

  const std::size_t ncells = spec.ncells();
  auto per_cell = scatter(runs.uniques, runs.counts, ncells + 1, ex);
  auto offsets = exclusive_sum(per_cell, ex);
  if (offsets.total != pairs) throw InvariantError("run lengths do not add up to the pair count");
  report[Phase::finalize].ms += clock.lap_ms();
  add_uniform_stage(report[Phase::finalize], runs.uniques.size());
  add_uniform_stage(report[Phase::finalize], ncells + 1);

  if (trace) {
    trace->sorted_cells = sorted.keys;
    trace->sorted_objects = sorted.values;
    trace->run_cells = runs.uniques;
    trace->run_counts = runs.counts;
    trace->offsets = offsets.sums;
  }
  return {spec, std::move(offsets.sums), std::move(sorted.values)};
}

template <class Builder>
BuildResult build_from_mesh(const TriangleMesh& mesh, const GridSpec& spec,
                            const BuildOptions& options, Builder&& builder) {
  Stopwatch clock;
  const Executor ex = options.executor();
  const ObjectBoxes objects = collect_object_boxes(mesh, spec, ex);
  const double collect_ms = clock.lap_ms();
  BuildResult result = builder(objects, spec, options);
  result.report[Phase::count].ms += collect_ms;
  add_uniform_stage(result.report[Phase::count], mesh.triangle_count());
  return result;
}

}  // namespace

std::string_view phase_name(Phase phase) {
  switch (phase) {
    case Phase::count: return "count";
    case Phase::scan: return "scan";
    case Phase::pairgen: return "pairgen";
    case Phase::sort: return "sort";
    case Phase::rle: return "rle";
    case Phase::finalize: return "finalize";
  }
  return "?";
}

double BuildReport::total_ms() const {
  double total = 0;
  for (const auto& p : phases) total += p.ms;
  return total;
}

ObjectBoxes collect_object_boxes(const TriangleMesh& mesh, const GridSpec& spec,
                                 const Executor& ex) {
  const std::size_t n = mesh.triangle_count();
  check_object_count(n);
  std::vector<CellBox> all(n);
  std::vector<std::uint32_t> keep(n);
  ex.for_each_index(n, [&](std::size_t t) {
    const auto box = object_cell_box(triangle_aabb(mesh, t), spec);
    keep[t] = box.has_value();
    if (box) all[t] = *box;
  });
  const auto slots = exclusive_sum(keep, ex);
  ObjectBoxes out;
  out.boxes.resize(slots.total);
  out.ids.resize(slots.total);
  ex.for_each_index(n, [&](std::size_t t) {
    if (!keep[t]) return;
    out.boxes[slots.sums[t]] = all[t];
    out.ids[slots.sums[t]] = static_cast<std::uint32_t>(t);
  });
  return out;
}

BuildResult build_parallel(const TriangleMesh& mesh, const GridSpec& spec,
                           const BuildOptions& options) {
  return build_from_mesh(mesh, spec, options, [](const ObjectBoxes& o, const GridSpec& s,
                                                 const BuildOptions& opt) {
    return build_parallel(o, s, opt, nullptr);
  });
}

BuildResult build_parallel(const ObjectBoxes& objects, const GridSpec& spec,
                           const BuildOptions& options, ParallelTrace* trace) {
  const Executor ex = options.executor();
  const std::size_t nobjs = objects.size();
  check_object_count(nobjs);
  BuildReport report;
  Stopwatch clock;

  auto counts = count_cells(objects, ex);
  report[Phase::count].ms += clock.lap_ms();
  add_uniform_stage(report[Phase::count], nobjs);

  auto offsets = exclusive_sum(counts, ex);
  const std::uint64_t pairs = offsets.total;
  report.pair_count = pairs;
  report[Phase::scan].ms += clock.lap_ms();
  add_uniform_stage(report[Phase::scan], nobjs);

  // Object ids in object order: boundary marks, then an inclusive scan.
  auto local_ids = inclusive_sum(mark_boundaries(offsets.sums, nobjs, pairs, ex), ex);
  // Offset of each pair inside its object's box.
  const std::vector<std::uint32_t> ones(pairs, 1u);
  auto cells = segmented_exclusive_sum(ones, local_ids, ex);
  if (trace) trace->relative_cells = cells;

  std::vector<std::uint32_t> objs(pairs);
  std::vector<TaskWork> work(ex.chunk_count(pairs));
  const Index3& dims = spec.dims();
  ex.for_chunks(pairs, [&](std::size_t k, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint32_t local = local_ids[i];
      cells[i] = linearize(global_coords(objects.boxes[local], cells[i]), dims);
      objs[i] = objects.ids[local];
      work[k].record(1);
    }
  });
  report[Phase::pairgen].ms += clock.lap_ms();
  add_uniform_stage(report[Phase::pairgen], nobjs > 1 ? nobjs - 1 : 0);  // boundary marks
  add_uniform_stage(report[Phase::pairgen], pairs);                      // inclusive scan
  add_uniform_stage(report[Phase::pairgen], pairs);                      // segmented scan
  add_measured_stage(report[Phase::pairgen], merge_all(work));           // cell ids

  if (trace) {
    trace->cell_counts = std::move(counts);
    trace->object_offsets = offsets.sums;
    trace->pair_count = pairs;
    trace->object_ids = objs;
    trace->global_cells = cells;
  }

  CompactGrid grid = finish_from_pairs(std::move(cells), std::move(objs), spec, ex, report, clock, trace);
  return {std::move(grid), report};
}

BuildResult build_sorted(const TriangleMesh& mesh, const GridSpec& spec,
                         const BuildOptions& options) {
  return build_from_mesh(mesh, spec, options,
                         [](const ObjectBoxes& o, const GridSpec& s, const BuildOptions& opt) {
                           return build_sorted(o, s, opt);
                         });
}

BuildResult build_sorted(const ObjectBoxes& objects, const GridSpec& spec,
                         const BuildOptions& options) {
  const Executor ex = options.executor();
  const std::size_t nobjs = objects.size();
  check_object_count(nobjs);
  BuildReport report;
  Stopwatch clock;

  const auto counts = count_cells(objects, ex);
  report[Phase::count].ms += clock.lap_ms();
  add_uniform_stage(report[Phase::count], nobjs);

  const auto offsets = exclusive_sum(counts, ex);
  const std::uint64_t pairs = offsets.total;
  report.pair_count = pairs;
  report[Phase::scan].ms += clock.lap_ms();
  add_uniform_stage(report[Phase::scan], nobjs);

  // One task per object walks its whole box.
  std::vector<std::uint32_t> cells(pairs);
  std::vector<std::uint32_t> objs(pairs);
  std::vector<TaskWork> work(ex.chunk_count(nobjs));
  const Index3& dims = spec.dims();
  ex.for_chunks(nobjs, [&](std::size_t k, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const CellBox& box = objects.boxes[i];
      std::size_t slot = offsets.sums[i];
      for (std::uint32_t z = box.lo.z(); z <= box.hi.z(); ++z)
        for (std::uint32_t y = box.lo.y(); y <= box.hi.y(); ++y)
          for (std::uint32_t x = box.lo.x(); x <= box.hi.x(); ++x) {
            cells[slot] = x + dims.x() * (y + dims.y() * z);
            objs[slot] = objects.ids[i];
            ++slot;
          }
      work[k].record(counts[i]);
    }
  });
  report[Phase::pairgen].ms += clock.lap_ms();
  add_measured_stage(report[Phase::pairgen], merge_all(work));

  CompactGrid grid = finish_from_pairs(std::move(cells), std::move(objs), spec, ex, report, clock, nullptr);
  return {std::move(grid), report};
}

BuildResult build_compact(const TriangleMesh& mesh, const GridSpec& spec,
                          const BuildOptions& options) {
  return build_from_mesh(mesh, spec, options,
                         [](const ObjectBoxes& o, const GridSpec& s, const BuildOptions& opt) {
                           return build_compact(o, s, opt);
                         });
}

BuildResult build_compact(const ObjectBoxes& objects, const GridSpec& spec,
                          const BuildOptions& options) {
  const Executor ex = options.executor();
  const std::size_t nobjs = objects.size();
  check_object_count(nobjs);
  const std::size_t ncells = spec.ncells();
  const Index3& dims = spec.dims();
  BuildReport report;
  Stopwatch clock;

  auto for_each_cell = [&](const CellBox& box, auto&& fn) {
    for (std::uint32_t z = box.lo.z(); z <= box.hi.z(); ++z)
      for (std::uint32_t y = box.lo.y(); y <= box.hi.y(); ++y)
        for (std::uint32_t x = box.lo.x(); x <= box.hi.x(); ++x) fn(x + dims.x() * (y + dims.y() * z));
  };

  // Pass 1: per-cell counters, one trailing zero so the scan yields ncells + 1 offsets.
  std::vector<std::uint32_t> cell_counts(ncells + 1, 0u);
  std::vector<TaskWork> count_work(ex.chunk_count(nobjs));
  ex.for_chunks(nobjs, [&](std::size_t k, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for_each_cell(objects.boxes[i], [&](std::uint32_t c) {
        std::atomic_ref<std::uint32_t>(cell_counts[c]).fetch_add(1, std::memory_order_relaxed);
      });
      count_work[k].record(box_cell_count(objects.boxes[i]));
    }
  });
  report[Phase::count].ms += clock.lap_ms();
  add_measured_stage(report[Phase::count], merge_all(count_work));

  auto offsets = exclusive_sum(cell_counts, ex);
  const std::uint64_t pairs = offsets.total;
  report.pair_count = pairs;
  report[Phase::scan].ms += clock.lap_ms();
  add_uniform_stage(report[Phase::scan], ncells + 1);

  // Pass 2: claim slots with atomic increments on a copy of the offsets.
  std::vector<std::uint32_t> cursor = offsets.sums;
  std::vector<std::uint32_t> objs(pairs);
  std::vector<TaskWork> fill_work(ex.chunk_count(nobjs));
  ex.for_chunks(nobjs, [&](std::size_t k, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint32_t id = objects.ids[i];
      for_each_cell(objects.boxes[i], [&](std::uint32_t c) {
        const auto slot =
            std::atomic_ref<std::uint32_t>(cursor[c]).fetch_add(1, std::memory_order_relaxed);
        objs[slot] = id;
      });
      fill_work[k].record(box_cell_count(objects.boxes[i]));
    }
  });
  report[Phase::pairgen].ms += clock.lap_ms();
  add_measured_stage(report[Phase::pairgen], merge_all(fill_work));

  // Slot order inside a cell depends on thread timing; sort it away.
  const auto& g = offsets.sums;
  std::vector<TaskWork> sort_work(ex.chunk_count(ncells));
  ex.for_chunks(ncells, [&](std::size_t k, std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      std::sort(objs.begin() + g[c], objs.begin() + g[c + 1]);
      sort_work[k].record(g[c + 1] - g[c]);
    }
  });
  report[Phase::sort].ms += clock.lap_ms();
  add_measured_stage(report[Phase::sort], merge_all(sort_work));

  return {CompactGrid{spec, std::move(offsets.sums), std::move(objs)}, report};
}

CompactGrid build_reference(const TriangleMesh& mesh, const GridSpec& spec) {
  const std::uint64_t tests = std::uint64_t{spec.ncells()} * mesh.triangle_count();
  if (tests > kReferenceWorkGuard)
    throw SizeError("reference build needs " + std::to_string(tests) +
                    " cell-object tests, above the guard of " + std::to_string(kReferenceWorkGuard));
  return build_reference(collect_object_boxes(mesh, spec, Executor::serial()), spec);
}

CompactGrid build_reference(const ObjectBoxes& objects, const GridSpec& spec) {
  const std::uint64_t tests = std::uint64_t{spec.ncells()} * objects.size();
  if (tests > kReferenceWorkGuard)
    throw SizeError("reference build needs " + std::to_string(tests) +
                    " cell-object tests, above the guard of " + std::to_string(kReferenceWorkGuard));
  CompactGrid grid = CompactGrid::empty(spec);
  const Index3& dims = spec.dims();
  for (std::uint32_t c = 0; c < spec.ncells(); ++c) {
    const Index3 coords = delinearize(c, dims);
    for (std::size_t i = 0; i < objects.size(); ++i) {
      if (objects.boxes[i].contains(coords)) grid.object_ids.push_back(objects.ids[i]);
    }
    if (grid.object_ids.size() > std::numeric_limits<std::uint32_t>::max())
      throw SizeError("reference build exceeds the 32-bit pair space");
    grid.offsets[c + 1] = static_cast<std::uint32_t>(grid.object_ids.size());
  }
  return grid;
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "parallel") return Algorithm::parallel;
  if (name == "sorted") return Algorithm::sorted;
  if (name == "compact") return Algorithm::compact;
  if (name == "reference") return Algorithm::reference;
  throw UsageError("unknown algorithm '" + std::string(name) + "'");
}

std::string_view algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::parallel: return "parallel";
    case Algorithm::sorted: return "sorted";
    case Algorithm::compact: return "compact";
    case Algorithm::reference: return "reference";
  }
  return "?";
}

BuildResult build(Algorithm algo, const TriangleMesh& mesh, const GridSpec& spec,
                  const BuildOptions& options) {
  switch (algo) {
    case Algorithm::parallel: return build_parallel(mesh, spec, options);
    case Algorithm::sorted: return build_sorted(mesh, spec, options);
    case Algorithm::compact: return build_compact(mesh, spec, options);
    case Algorithm::reference: {
      Stopwatch clock;
      BuildResult result{build_reference(mesh, spec), {}};
      result.report[Phase::count].ms = clock.lap_ms();
      result.report.pair_count = result.grid.pair_count();
      return result;
    }
  }
  throw UsageError("unknown algorithm");
}

}  // namespace ugrid
