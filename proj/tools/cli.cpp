#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ugrid/errors.hpp"
#include "ugrid/grid.hpp"
#include "ugrid/obj_io.hpp"
#include "ugrid/traverse.hpp"
#include "ugrid/validate.hpp"

namespace ugrid::cli {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-')
    throw UsageError("bad " + what + " '" + text + "'");
  return v;
}

struct SceneOptions {
  std::string mesh_path;
  std::string gen;
  std::string dims;
  double density = 5.0;
  std::string workers = "max";
  std::string out_path;
  std::string format = "csv";
};

struct Scene {
  std::string label;
  TriangleMesh mesh;
};

Scene load_scene(const SceneOptions& opts) {
  if (opts.mesh_path.empty() == opts.gen.empty())
    throw UsageError("exactly one of --mesh or --gen is required");
  if (!opts.mesh_path.empty()) {
    Scene s{std::filesystem::path(opts.mesh_path).filename().string(), load_obj(opts.mesh_path)};
    s.mesh.validate();
    return s;
  }
  const GenSpec g = parse_gen_spec(opts.gen);
  return {opts.gen, gen_scene(g.kind, g.n, g.seed)};
}

GridSpec scene_grid(const SceneOptions& opts, const TriangleMesh& mesh) {
  if (mesh.vertices.empty()) throw InputError("scene has no vertices; cannot derive grid bounds");
  if (!opts.dims.empty()) return grid_for_mesh(mesh, parse_dims(opts.dims));
  return grid_for_mesh(mesh, opts.density);
}

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::csv;
  if (text == "md") return Format::md;
  throw UsageError("unknown format '" + text + "'");
}

// Writes to --out when given, else to the command's stdout stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw std::runtime_error("cannot write " + path);
    stream_ = file_.get();
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

void add_scene_options(CLI::App* cmd, SceneOptions& opts) {
  cmd->add_option("--mesh", opts.mesh_path, "OBJ scene file");
  cmd->add_option("--gen", opts.gen, "synthetic scene kind:n:seed (uniform, skewed, walls)");
  cmd->add_option("--dims", opts.dims, "grid resolution AxBxC (overrides --density)");
  cmd->add_option("--density", opts.density, "cells per triangle for the resolution heuristic")
      ->capture_default_str();
  cmd->add_option("--workers", opts.workers, "worker threads, integer or 'max'")->capture_default_str();
  cmd->add_option("--out", opts.out_path, "output path (default stdout)");
  cmd->add_option("--format", opts.format, "csv or md")->capture_default_str();
}

ReportRow timed_row(const std::string& scene, Algorithm algo, const TriangleMesh& mesh,
                    const GridSpec& spec, const BuildOptions& options, std::uint64_t repeat) {
  std::array<std::vector<double>, kPhaseCount> phase_ms;
  std::vector<double> totals;
  std::optional<BuildResult> last;
  for (std::uint64_t r = 0; r < repeat; ++r) {
    const auto start = std::chrono::steady_clock::now();
    BuildResult result = build(algo, mesh, spec, options);
    totals.push_back(
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
    for (std::size_t p = 0; p < kPhaseCount; ++p) phase_ms[p].push_back(result.report.phases[p].ms);
    last = std::move(result);
  }
  ReportRow row;
  row.scene = scene;
  row.algo = std::string(algorithm_name(algo));
  row.stats = compute_stats(last->grid, mesh);
  for (std::size_t p = 0; p < kPhaseCount; ++p) row.phase_ms_median[p] = median(phase_ms[p]);
  row.total_ms_median = median(totals);
  row.total_ms_min = *std::min_element(totals.begin(), totals.end());
  row.max_task_work = last->report.max_task_work();
  return row;
}

int cmd_build(const SceneOptions& opts, const std::string& algos, std::uint64_t repeat,
              std::ostream& out) {
  if (repeat < 1) throw UsageError("--repeat must be at least 1");
  const auto algorithms = parse_algorithms(algos);
  const Format format = parse_format(opts.format);
  const Scene scene = load_scene(opts);
  const GridSpec spec = scene_grid(opts, scene.mesh);
  BuildOptions options;
  options.workers = parse_workers(opts.workers);
  std::vector<ReportRow> rows;
  for (const auto algo : algorithms)
    rows.push_back(timed_row(scene.label, algo, scene.mesh, spec, options, repeat));
  Output sink(opts.out_path, out);
  write_rows(sink.stream(), rows, format);
  return kExitOk;
}

int cmd_stats(const SceneOptions& opts, std::ostream& out) {
  const Format format = parse_format(opts.format);
  const Scene scene = load_scene(opts);
  const GridSpec spec = scene_grid(opts, scene.mesh);
  BuildOptions options;
  options.workers = parse_workers(opts.workers);
  ReportRow row = timed_row(scene.label, Algorithm::parallel, scene.mesh, spec, options, 1);
  Output sink(opts.out_path, out);
  write_rows(sink.stream(), {row}, format);
  return kExitOk;
}

int cmd_validate(const ValidateConfig& config, const std::string& out_path, std::ostream& out) {
  const ValidationSummary s = validate(config);
  Output sink(out_path, out);
  auto& o = sink.stream();
  o << "scenes: " << s.scenes_checked << " (builder mismatches: " << s.builder_mismatches << ")\n";
  o << "rays: " << s.rays_cast << " (raycast mismatches: " << s.ray_mismatches << ")\n";
  if (s.first) {
    o << "first counterexample: check=" << s.first->check << " seed=" << config.seed
      << " scene=" << s.first->scene << " " << s.first->detail << "\n";
  }
  o << s.mismatches() << " mismatches\n";
  return s.ok() ? kExitOk : kExitValidationFailure;
}

int cmd_raycast(const SceneOptions& opts, std::uint64_t nrays, std::uint64_t seed, bool check,
                std::ostream& out) {
  const Format format = parse_format(opts.format);
  const Scene scene = load_scene(opts);
  const GridSpec spec = scene_grid(opts, scene.mesh);
  BuildOptions options;
  options.workers = parse_workers(opts.workers);
  const CompactGrid grid = build_parallel(scene.mesh, spec, options).grid;

  Xoshiro256StarStar rng(seed);
  std::vector<Ray> rays;
  rays.reserve(nrays);
  for (std::uint64_t i = 0; i < nrays; ++i) rays.push_back(random_ray(rng, spec.bounds()));

  std::uint64_t hits = 0;
  std::vector<std::optional<Hit>> grid_hits;
  grid_hits.reserve(nrays);
  auto start = std::chrono::steady_clock::now();
  for (const auto& ray : rays) {
    grid_hits.push_back(dda_traverse(grid, scene.mesh, ray));
    hits += grid_hits.back().has_value();
  }
  const double grid_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  std::uint64_t mismatches = 0;
  double brute_ms = 0;
  if (check) {
    start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < rays.size(); ++i)
      mismatches += !same_hit(brute_force_raycast(scene.mesh, rays[i]), grid_hits[i]);
    brute_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }

  const std::vector<std::string> header = {"scene", "ntris", "dims", "rays", "hits", "mismatches",
                                           "grid_ms", "brute_ms"};
  const std::vector<std::string> cells = {scene.label,
                                          std::to_string(scene.mesh.triangle_count()),
                                          format_dims(spec.dims()),
                                          std::to_string(nrays),
                                          std::to_string(hits),
                                          check ? std::to_string(mismatches) : "",
                                          fixed(grid_ms, 3),
                                          check ? fixed(brute_ms, 3) : ""};
  Output sink(opts.out_path, out);
  auto& o = sink.stream();
  auto line = [&](const std::vector<std::string>& v, const char* sep, const char* edge) {
    o << edge;
    for (std::size_t i = 0; i < v.size(); ++i) o << (i ? sep : "") << v[i];
    o << (*edge ? " |" : "") << "\n";
  };
  if (format == Format::csv) {
    line(header, ",", "");
    line(cells, ",", "");
  } else {
    line(header, " | ", "| ");
    line(std::vector<std::string>(header.size(), "---"), " | ", "| ");
    line(cells, " | ", "| ");
  }
  return mismatches == 0 ? kExitOk : kExitValidationFailure;
}

int cmd_gen(const std::string& gen, const std::string& out_path, std::ostream& out) {
  const GenSpec g = parse_gen_spec(gen);
  const TriangleMesh mesh = gen_scene(g.kind, g.n, g.seed);
  Output sink(out_path, out);
  write_obj(mesh, sink.stream());
  return kExitOk;
}

}  // namespace

const std::vector<std::string> kCsvColumns = {
    "scene",     "algo",         "ntris",          "dims",           "ncells",
    "NO",        "pct_empty",    "avg_items_nonempty", "max_cells_item", "avg_cells_item",
    "memory_bytes", "count_ms",  "scan_ms",        "pairgen_ms",     "sort_ms",
    "rle_ms",    "finalize_ms",  "total_ms_median", "total_ms_min",   "max_task_work"};

GenSpec parse_gen_spec(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) throw UsageError("bad generator spec '" + text + "', expected kind:n:seed");
  GenSpec g{parse_scene_kind(text.substr(0, a)), parse_u64(text.substr(a + 1, b - a - 1), "triangle count"),
            parse_u64(text.substr(b + 1), "seed")};
  if (g.n == 0) throw UsageError("generator needs at least one triangle");
  return g;
}

unsigned parse_workers(const std::string& text) {
  if (text == "max") return 0;
  const auto n = parse_u64(text, "worker count");
  if (n == 0 || n > 4096) throw UsageError("--workers must be 'max' or in 1..4096");
  return static_cast<unsigned>(n);
}

std::vector<Algorithm> parse_algorithms(const std::string& csv) {
  std::vector<Algorithm> out;
  std::stringstream in(csv);
  for (std::string name; std::getline(in, name, ',');) {
    if (name.empty()) continue;
    out.push_back(parse_algorithm(name));
  }
  if (out.empty()) throw UsageError("at least one algorithm is required");
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<std::string> row_cells(const ReportRow& row) {
  const GridStats& s = row.stats;
  std::vector<std::string> cells = {row.scene,
                                    row.algo,
                                    std::to_string(s.ntriangles),
                                    format_dims(s.dims),
                                    std::to_string(s.ncells),
                                    std::to_string(s.pair_count),
                                    fixed(s.pct_empty, 4),
                                    fixed(s.avg_items_per_nonempty_cell, 4),
                                    std::to_string(s.max_cells_per_item),
                                    fixed(s.avg_cells_per_item, 4),
                                    std::to_string(s.memory_bytes)};
  for (const double ms : row.phase_ms_median) cells.push_back(fixed(ms, 3));
  cells.push_back(fixed(row.total_ms_median, 3));
  cells.push_back(fixed(row.total_ms_min, 3));
  cells.push_back(std::to_string(row.max_task_work));
  return cells;
}

void write_rows(std::ostream& out, const std::vector<ReportRow>& rows, Format format) {
  auto line = [&](const std::vector<std::string>& v) {
    if (format == Format::csv) {
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
    } else {
      out << "|";
      for (const auto& c : v) out << " " << c << " |";
    }
    out << "\n";
  };
  line(kCsvColumns);
  if (format == Format::md) line(std::vector<std::string>(kCsvColumns.size(), "---"));
  for (const auto& row : rows) line(row_cells(row));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uniform grid construction benchmark and validation harness", "ugrid"};
  app.require_subcommand(1);

  SceneOptions build_opts;
  std::string algos = "parallel,sorted,compact";
  std::uint64_t repeat = 3;
  auto* build_cmd = app.add_subcommand("build", "build grids and report per-phase timings");
  add_scene_options(build_cmd, build_opts);
  build_cmd->add_option("--algo", algos, "comma-separated: parallel,sorted,compact,reference")
      ->capture_default_str();
  build_cmd->add_option("--repeat", repeat, "builds per algorithm")->capture_default_str();

  SceneOptions stats_opts;
  auto* stats_cmd = app.add_subcommand("stats", "grid statistics of a parallel build");
  add_scene_options(stats_cmd, stats_opts);

  ValidateConfig vconfig;
  std::string vworkers = "max";
  std::string vout;
  auto* validate_cmd = app.add_subcommand("validate", "builder equivalence and ray cast checks");
  validate_cmd->add_option("--scenes", vconfig.scenes, "random scenes for builder equivalence")
      ->capture_default_str();
  validate_cmd->add_option("--rays", vconfig.rays, "random rays")->capture_default_str();
  validate_cmd->add_option("--ray-scenes", vconfig.ray_scenes, "scenes the rays are spread over")
      ->capture_default_str();
  validate_cmd->add_option("--max-tris", vconfig.max_triangles, "max triangles per scene")
      ->capture_default_str();
  validate_cmd->add_option("--max-dim", vconfig.max_dim, "max grid resolution per axis")
      ->capture_default_str();
  validate_cmd->add_option("--seed", vconfig.seed, "base seed")->capture_default_str();
  validate_cmd->add_option("--workers", vworkers, "worker threads, integer or 'max'")
      ->capture_default_str();
  validate_cmd->add_option("--out", vout, "output path (default stdout)");
  validate_cmd->add_flag("--inject-fault", vconfig.inject_fault,
                         "corrupt one parallel-builder entry (detector self-test)");

  SceneOptions ray_opts;
  std::uint64_t nrays = 10000;
  std::uint64_t ray_seed = 1;
  bool no_check = false;
  auto* raycast_cmd = app.add_subcommand("raycast", "cast random rays through a parallel-built grid");
  add_scene_options(raycast_cmd, ray_opts);
  raycast_cmd->add_option("--rays", nrays, "number of rays")->capture_default_str();
  raycast_cmd->add_option("--seed", ray_seed, "ray seed")->capture_default_str();
  raycast_cmd->add_flag("--no-check", no_check, "skip the brute force comparison");

  std::string gen_spec;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "write a synthetic scene as OBJ");
  gen_cmd->add_option("--gen", gen_spec, "kind:n:seed")->required();
  gen_cmd->add_option("--out", gen_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*build_cmd) return cmd_build(build_opts, algos, repeat, out);
    if (*stats_cmd) return cmd_stats(stats_opts, out);
    if (*validate_cmd) {
      vconfig.workers = parse_workers(vworkers);
      return cmd_validate(vconfig, vout, out);
    }
    if (*raycast_cmd) return cmd_raycast(ray_opts, nrays, ray_seed, !no_check, out);
    if (*gen_cmd) return cmd_gen(gen_spec, gen_out, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace ugrid::cli
