#pragma once

#include <cstdint>
#include <string_view>

#include "ugrid/geometry.hpp"

namespace ugrid {

// xoshiro256** (Blackman & Vigna), state seeded by SplitMix64. Only integer
// and IEEE add/multiply are used downstream, so generated scenes are
// bit-identical on every conforming platform.
class Xoshiro256StarStar {
 public:
  explicit Xoshiro256StarStar(std::uint64_t seed);

  std::uint64_t next();
  // [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t s_[4];
};

enum class SceneKind { uniform, skewed, walls };

/// Throws UsageError for anything other than uniform / skewed / walls.
SceneKind parse_scene_kind(std::string_view name);
std::string_view scene_kind_name(SceneKind kind);

// All scenes live in (roughly) the unit cube.
//   uniform: n similar small triangles, uniformly placed.
//   skewed:  k = max(1, n / 10000) large triangles whose boxes span 70-95%
//            of the unit cube per axis, the rest tiny.
//   walls:   max(1, n / 20) axis-aligned quads (two triangles each) plus
//            small clutter.
TriangleMesh gen_scene(SceneKind kind, std::uint64_t n, std::uint64_t seed);

/// Number of large triangles placed by the skewed generator.
std::uint64_t skewed_large_count(std::uint64_t n);

}  // namespace ugrid
