#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ugrid/builders.hpp"
#include "ugrid/geometry.hpp"
#include "ugrid/grid.hpp"
#include "ugrid/scene_gen.hpp"
#include "ugrid/traverse.hpp"

namespace ugrid {

struct RandomScene {
  SceneKind kind;
  std::uint64_t triangles;
  std::uint64_t seed;
  TriangleMesh mesh;
  GridSpec spec;

  std::string label() const;  // "kind:n:seed@AxBxC"
};

/// Scene `index` of the seeded validation sequence: kinds cycle uniform,
/// skewed, walls; 1..max_triangles triangles; each dim in 1..max_dim.
RandomScene random_scene(std::uint64_t index, std::uint64_t base_seed,
                         std::uint64_t max_triangles = 2000, std::uint32_t max_dim = 32);

/// Half the rays aim at a point inside `bounds`, half point anywhere; origins
/// lie in `bounds` grown by 50% per side.
Ray random_ray(Xoshiro256StarStar& rng, const Aabb& bounds);

/// Same triangle and t within 1e-6 relative (or both misses).
bool same_hit(const std::optional<Hit>& a, const std::optional<Hit>& b);

/// Empty when equal, otherwise a description of the first differing cell.
std::string describe_grid_difference(const CompactGrid& expected, const CompactGrid& actual);

struct ValidateConfig {
  std::uint64_t scenes = 100;
  std::uint64_t max_triangles = 2000;
  std::uint32_t max_dim = 32;
  std::uint64_t rays = 10000;
  std::uint64_t ray_scenes = 10;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  bool inject_fault = false;  // corrupts one parallel-builder output entry
};

struct Mismatch {
  std::string check;  // "builders" or "raycast"
  std::string scene;
  std::string detail;
};

struct ValidationSummary {
  std::uint64_t scenes_checked = 0;
  std::uint64_t rays_cast = 0;
  std::uint64_t builder_mismatches = 0;
  std::uint64_t ray_mismatches = 0;
  std::optional<Mismatch> first;

  std::uint64_t mismatches() const { return builder_mismatches + ray_mismatches; }
  bool ok() const { return mismatches() == 0; }
};

/// Builder equivalence (parallel, sorted, compact against reference) over
/// `scenes` random scenes, then DDA against brute force ray casting.
ValidationSummary validate(const ValidateConfig& config);

}  // namespace ugrid
