#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ugrid/builders.hpp"
#include "ugrid/scene_gen.hpp"
#include "ugrid/stats.hpp"

namespace ugrid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailure = 1;
inline constexpr int kExitUsage = 2;

struct GenSpec {
  SceneKind kind;
  std::uint64_t n;
  std::uint64_t seed;
};

/// "kind:n:seed"
GenSpec parse_gen_spec(const std::string& text);
/// "max" or a positive integer; "max" maps to 0 (hardware concurrency).
unsigned parse_workers(const std::string& text);
std::vector<Algorithm> parse_algorithms(const std::string& csv);

enum class Format { csv, md };

// One row of the benchmark table.
struct ReportRow {
  std::string scene;
  std::string algo;
  GridStats stats;
  std::array<double, kPhaseCount> phase_ms_median{};
  double total_ms_median = 0;
  double total_ms_min = 0;
  std::uint64_t max_task_work = 0;
};

extern const std::vector<std::string> kCsvColumns;

std::vector<std::string> row_cells(const ReportRow& row);
void write_rows(std::ostream& out, const std::vector<ReportRow>& rows, Format format);

double median(std::vector<double> values);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ugrid::cli
