#include "ugrid/scene_gen.hpp"

#include <algorithm>
#include <string>

#include "ugrid/errors.hpp"

namespace ugrid {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// Newton iteration on IEEE arithmetic only; std::cbrt is not guaranteed to
// round identically everywhere.
double portable_cbrt(double v) {
  if (v <= 0) return 0;
  double x = v > 1 ? v / 3 : 1;
  for (int i = 0; i < 200; ++i) {
    const double next = (2 * x + v / (x * x)) / 3;
    if (next == x) break;
    x = next;
  }
  return x;
}

class MeshWriter {
 public:
  explicit MeshWriter(TriangleMesh& mesh) : mesh_(mesh) {}

  void triangle(const Vec3& a, const Vec3& b, const Vec3& c) {
    const auto base = static_cast<std::uint32_t>(mesh_.vertices.size());
    mesh_.vertices.push_back(a);
    mesh_.vertices.push_back(b);
    mesh_.vertices.push_back(c);
    mesh_.triangles.push_back({base, base + 1, base + 2});
  }

  void quad(const Vec3& p00, const Vec3& p10, const Vec3& p11, const Vec3& p01) {
    const auto base = static_cast<std::uint32_t>(mesh_.vertices.size());
    mesh_.vertices.insert(mesh_.vertices.end(), {p00, p10, p11, p01});
    mesh_.triangles.push_back({base, base + 1, base + 2});
    mesh_.triangles.push_back({base, base + 2, base + 3});
  }

 private:
  TriangleMesh& mesh_;
};

Vec3 random_point(Xoshiro256StarStar& rng, double lo, double hi) {
  const double x = rng.uniform(lo, hi);
  const double y = rng.uniform(lo, hi);
  const double z = rng.uniform(lo, hi);
  return {x, y, z};
}

// Small triangle with vertices jittered around a center inside the unit cube.
void small_triangle(MeshWriter& out, Xoshiro256StarStar& rng, double scale) {
  const Vec3 center = random_point(rng, scale, 1 - scale);
  const Vec3 a = center + scale * random_point(rng, -0.5, 0.5);
  const Vec3 b = center + scale * random_point(rng, -0.5, 0.5);
  const Vec3 c = center + scale * random_point(rng, -0.5, 0.5);
  out.triangle(a, b, c);
}

void large_triangle(MeshWriter& out, Xoshiro256StarStar& rng) {
  const double span = rng.uniform(0.7, 0.95);
  const Vec3 o = random_point(rng, 0, 1 - span);
  out.triangle(o, o + Vec3(span, span / 2, 0), o + Vec3(span / 2, span, span));
}

}  // namespace

Xoshiro256StarStar::Xoshiro256StarStar(std::uint64_t seed) {
  for (auto& s : s_) s = splitmix64(seed);
}

std::uint64_t Xoshiro256StarStar::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Xoshiro256StarStar::below(std::uint64_t bound) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
}

SceneKind parse_scene_kind(std::string_view name) {
  if (name == "uniform") return SceneKind::uniform;
  if (name == "skewed") return SceneKind::skewed;
  if (name == "walls") return SceneKind::walls;
  throw UsageError("unknown scene kind '" + std::string(name) + "'");
}

std::string_view scene_kind_name(SceneKind kind) {
  switch (kind) {
    case SceneKind::uniform: return "uniform";
    case SceneKind::skewed: return "skewed";
    case SceneKind::walls: return "walls";
  }
  return "?";
}

std::uint64_t skewed_large_count(std::uint64_t n) { return std::max<std::uint64_t>(1, n / 10000); }

TriangleMesh gen_scene(SceneKind kind, std::uint64_t n, std::uint64_t seed) {
  if (n == 0) throw UsageError("gen_scene: n must be at least 1");
  Xoshiro256StarStar rng(seed);
  TriangleMesh mesh;
  mesh.triangles.reserve(n);
  MeshWriter out(mesh);
  const double spacing = 1.0 / portable_cbrt(static_cast<double>(n));

  switch (kind) {
    case SceneKind::uniform: {
      mesh.vertices.reserve(3 * n);
      for (std::uint64_t i = 0; i < n; ++i) small_triangle(out, rng, 0.5 * spacing);
      break;
    }
    case SceneKind::skewed: {
      mesh.vertices.reserve(3 * n);
      const std::uint64_t large = std::min(n, skewed_large_count(n));
      const std::uint64_t stride = n / large;
      for (std::uint64_t i = 0; i < n; ++i) {
        if (i % stride == 0 && i / stride < large)
          large_triangle(out, rng);
        else
          small_triangle(out, rng, 0.1 * spacing);
      }
      break;
    }
    case SceneKind::walls: {
      const std::uint64_t quads = std::min(n / 2, std::max<std::uint64_t>(1, n / 20));
      for (std::uint64_t q = 0; q < quads; ++q) {
        const int axis = static_cast<int>(rng.below(3));
        const int u = (axis + 1) % 3;
        const int v = (axis + 2) % 3;
        const double plane = rng.uniform();
        const double u0 = rng.uniform(0, 0.5);
        const double v0 = rng.uniform(0, 0.5);
        const double du = rng.uniform(0.3, 0.5);
        const double dv = rng.uniform(0.3, 0.5);
        auto corner = [&](double a, double b) {
          Vec3 p;
          p[axis] = plane;
          p[u] = a;
          p[v] = b;
          return p;
        };
        out.quad(corner(u0, v0), corner(u0 + du, v0), corner(u0 + du, v0 + dv),
                 corner(u0, v0 + dv));
      }
      for (std::uint64_t i = 2 * quads; i < n; ++i) small_triangle(out, rng, 0.3 * spacing);
      break;
    }
  }
  return mesh;
}

}  // namespace ugrid
