#include "ugrid/validate.hpp"

#include <algorithm>
#include <cmath>

namespace ugrid {

std::string RandomScene::label() const {
  return std::string(scene_kind_name(kind)) + ":" + std::to_string(triangles) + ":" +
         std::to_string(seed) + "@" + format_dims(spec.dims());
}

RandomScene random_scene(std::uint64_t index, std::uint64_t base_seed,
                         std::uint64_t max_triangles, std::uint32_t max_dim) {
  Xoshiro256StarStar rng(base_seed + 0x9E3779B97F4A7C15ull * (index + 1));
  const auto kind = static_cast<SceneKind>(index % 3);
  const std::uint64_t n = 1 + rng.below(std::max<std::uint64_t>(1, max_triangles));
  Index3 dims;
  for (int k = 0; k < 3; ++k) dims[k] = 1 + static_cast<std::uint32_t>(rng.below(std::max(1u, max_dim)));
  const std::uint64_t seed = rng.next();
  TriangleMesh mesh = gen_scene(kind, n, seed);
  GridSpec spec = grid_for_mesh(mesh, dims);
  return {kind, n, seed, std::move(mesh), spec};
}

Ray random_ray(Xoshiro256StarStar& rng, const Aabb& bounds) {
  const Vec3 extent = bounds.extent();
  auto point_in = [&](const Vec3& lo, const Vec3& size) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    const double z = rng.uniform();
    return Vec3(lo + size.cwiseProduct(Vec3(x, y, z)));
  };
  const Vec3 origin = point_in(bounds.lo - 0.5 * extent, 2.0 * extent);
  Vec3 dir;
  if (rng.below(2) == 0) {
    dir = point_in(bounds.lo, extent) - origin;
  } else {
    do {
      dir = point_in(Vec3::Constant(-1), Vec3::Constant(2));
    } while (dir.squaredNorm() > 1 || dir.squaredNorm() < 1e-6);
  }
  if (dir.squaredNorm() == 0) dir = Vec3::UnitX();
  return Ray(origin, dir.normalized());
}

bool same_hit(const std::optional<Hit>& a, const std::optional<Hit>& b) {
  if (!a || !b) return !a && !b;
  if (a->triangle_id != b->triangle_id) return false;
  const double scale = std::max({std::abs(a->t), std::abs(b->t), 1e-12});
  return std::abs(a->t - b->t) <= 1e-6 * scale;
}

std::string describe_grid_difference(const CompactGrid& expected, const CompactGrid& actual) {
  if (expected == actual) return {};
  if (!(expected.spec == actual.spec)) return "grid specs differ";
  if (expected.offsets.size() != actual.offsets.size()) return "offset arrays differ in length";
  for (std::uint32_t c = 0; c < expected.spec.ncells(); ++c) {
    const auto want = cell_objects(expected, c);
    const auto got = cell_objects(actual, c);
    if (std::equal(want.begin(), want.end(), got.begin(), got.end())) continue;
    std::string detail = "cell " + std::to_string(c) + ": expected [";
    for (auto id : want) detail += " " + std::to_string(id);
    detail += " ] got [";
    for (auto id : got) detail += " " + std::to_string(id);
    return detail + " ]";
  }
  return "object arrays differ";
}

ValidationSummary validate(const ValidateConfig& config) {
  ValidationSummary summary;
  BuildOptions options;
  options.workers = config.workers;
  bool fault_pending = config.inject_fault;

  auto record = [&](std::string check, std::string scene, std::string detail) {
    if (!summary.first) summary.first = Mismatch{std::move(check), std::move(scene), std::move(detail)};
  };

  for (std::uint64_t i = 0; i < config.scenes; ++i) {
    const RandomScene scene = random_scene(i, config.seed, config.max_triangles, config.max_dim);
    const CompactGrid expected = build_reference(scene.mesh, scene.spec);
    for (const auto algo : {Algorithm::parallel, Algorithm::sorted, Algorithm::compact}) {
      CompactGrid grid = build(algo, scene.mesh, scene.spec, options).grid;
      if (fault_pending && algo == Algorithm::parallel && !grid.object_ids.empty()) {
        grid.object_ids[grid.object_ids.size() / 2] ^= 1u;
        fault_pending = false;
      }
      const std::string diff = describe_grid_difference(expected, grid);
      if (!diff.empty()) {
        ++summary.builder_mismatches;
        record("builders", scene.label(), std::string(algorithm_name(algo)) + " " + diff);
      }
    }
    ++summary.scenes_checked;
  }

  if (config.ray_scenes > 0) {
    for (std::uint64_t s = 0; s < config.ray_scenes; ++s) {
      const RandomScene scene =
          random_scene(1'000'000 + s, config.seed, config.max_triangles, config.max_dim);
      const CompactGrid grid = build_parallel(scene.mesh, scene.spec, options).grid;
      Xoshiro256StarStar rng(config.seed ^ (0xD1B54A32D192ED03ull * (s + 1)));
      const std::uint64_t rays =
          config.rays / config.ray_scenes + (s + 1 == config.ray_scenes ? config.rays % config.ray_scenes : 0);
      for (std::uint64_t r = 0; r < rays; ++r) {
        const Ray ray = random_ray(rng, scene.spec.bounds());
        const auto want = brute_force_raycast(scene.mesh, ray);
        const auto got = dda_traverse(grid, scene.mesh, ray);
        ++summary.rays_cast;
        if (same_hit(want, got)) continue;
        ++summary.ray_mismatches;
        auto show = [](const std::optional<Hit>& h) {
          return h ? "triangle " + std::to_string(h->triangle_id) + " t=" + std::to_string(h->t)
                   : std::string("miss");
        };
        record("raycast", scene.label(),
               "ray " + std::to_string(r) + ": brute force " + show(want) + ", grid " + show(got));
      }
    }
  }
  return summary;
}

}  // namespace ugrid
