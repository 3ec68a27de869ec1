#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "ugrid/errors.hpp"
#include "ugrid/grid.hpp"

using namespace ugrid;

namespace {

GridSpec cube_grid(double size, std::uint32_t n) {
  return GridSpec(Aabb{Vec3::Zero(), Vec3::Constant(size)}, Index3(n, n, n));
}

// Cells of `box` listed x-fastest by plain nested loops.
std::vector<Index3> enumerate_box(const CellBox& box) {
  std::vector<Index3> cells;
  for (auto z = box.lo.z(); z <= box.hi.z(); ++z)
    for (auto y = box.lo.y(); y <= box.hi.y(); ++y)
      for (auto x = box.lo.x(); x <= box.hi.x(); ++x) cells.emplace_back(x, y, z);
  return cells;
}

CellBox random_box(Xoshiro256StarStar& rng, const Index3& dims) {
  CellBox b;
  for (int k = 0; k < 3; ++k) {
    auto a = static_cast<std::uint32_t>(rng.below(dims[k]));
    auto c = static_cast<std::uint32_t>(rng.below(dims[k]));
    b.lo[k] = std::min(a, c);
    b.hi[k] = std::max(a, c);
  }
  return b;
}

}  // namespace

TEST(CellCount, TableRows) {
  EXPECT_EQ(cell_count(Index3(141, 37, 141)), 735'597u);
  EXPECT_EQ(cell_count(Index3(565, 116, 648)), 42'469'920u);
  EXPECT_EQ(cell_count(Index3(1, 1, 1)), 1u);
  EXPECT_THROW(cell_count(Index3(2048, 2048, 1025)), SizeError);
}

TEST(Dims, ParseAndFormat) {
  EXPECT_TRUE((parse_dims("141x37x141") == Index3(141, 37, 141)).all());
  EXPECT_EQ(format_dims(Index3(4, 5, 6)), "4x5x6");
  for (const char* bad : {"", "4x5", "4x5x", "0x1x1", "4x5x6x7", "ax1x1", "4,5,6", "-1x2x3"})
    EXPECT_THROW(parse_dims(bad), UsageError) << bad;
}

TEST(GridSpec, Validation) {
  const Aabb unit{Vec3::Zero(), Vec3::Ones()};
  EXPECT_THROW(GridSpec(unit, Index3(0, 1, 1)), InputError);
  EXPECT_THROW(GridSpec(Aabb{Vec3::Zero(), Vec3(1, 0, 1)}, Index3(1, 1, 1)), InputError);
  EXPECT_THROW(GridSpec(unit, Index3(4096, 4096, 4096)), SizeError);
  const GridSpec spec(Aabb{Vec3::Zero(), Vec3(4, 2, 1)}, Index3(4, 4, 1));
  EXPECT_EQ(spec.cell_size(), Vec3(1, 0.5, 1));
  EXPECT_EQ(spec.ncells(), 16u);
}

TEST(Linearize, Examples) {
  EXPECT_EQ(linearize(Index3(0, 0, 0), Index3(7, 3, 2)), 0u);
  EXPECT_EQ(linearize(Index3(2, 3, 0), Index3(4, 4, 1)), 14u);
  EXPECT_EQ(linearize(Index3(6, 2, 1), Index3(7, 3, 2)), 41u);
  EXPECT_THROW(linearize(Index3(4, 0, 0), Index3(4, 4, 1)), InvariantError);
}

TEST(Linearize, BijectionWithDelinearize) {
  const Index3 dims(5, 3, 4);
  std::set<std::uint32_t> seen;
  for (std::uint32_t z = 0; z < dims.z(); ++z)
    for (std::uint32_t y = 0; y < dims.y(); ++y)
      for (std::uint32_t x = 0; x < dims.x(); ++x) {
        const auto id = linearize(Index3(x, y, z), dims);
        EXPECT_TRUE((delinearize(id, dims) == Index3(x, y, z)).all());
        seen.insert(id);
      }
  EXPECT_EQ(seen.size(), 60u);
  EXPECT_EQ(*seen.rbegin(), 59u);
}

TEST(BoxCellCount, Examples) {
  EXPECT_EQ(box_cell_count({Index3(2, 1, 3), Index3(2, 1, 3)}), 1u);
  EXPECT_EQ(box_cell_count({Index3(0, 0, 0), Index3(3, 2, 0)}), 12u);
  EXPECT_EQ(box_cell_count({Index3(0, 0, 0), Index3(1, 1, 1)}), 8u);
}

TEST(GlobalCoords, Examples) {
  const CellBox box{Index3(1, 2, 0), Index3(3, 4, 1)};
  EXPECT_TRUE((global_coords(box, 0) == box.lo).all());
  // Oracle: the 5th cell of the x-fastest enumeration.
  const auto cells = enumerate_box(box);
  ASSERT_EQ(cells.size(), 18u);
  EXPECT_TRUE((cells[4] == Index3(2, 3, 0)).all());
  EXPECT_TRUE((global_coords(box, 4) == Index3(2, 3, 0)).all());
  EXPECT_TRUE((global_coords(box, 17) == box.hi).all());
  EXPECT_THROW(global_coords(box, 18), InvariantError);
}

TEST(GlobalCoords, MatchesEnumerationOnRandomBoxes) {
  Xoshiro256StarStar rng(3);
  const Index3 dims(9, 6, 7);
  for (int trial = 0; trial < 200; ++trial) {
    const CellBox box = random_box(rng, dims);
    const auto cells = enumerate_box(box);
    ASSERT_EQ(cells.size(), box_cell_count(box));
    std::set<std::uint32_t> ids;
    for (std::uint64_t rid = 0; rid < cells.size(); ++rid) {
      const Index3 c = global_coords(box, rid);
      ASSERT_TRUE((c == cells[rid]).all());
      ASSERT_TRUE(box.contains(c));
      ids.insert(linearize(c, dims));
    }
    ASSERT_EQ(ids.size(), cells.size());
  }
}

TEST(ObjectCellBox, Examples) {
  const GridSpec spec = cube_grid(4, 4);
  auto box = object_cell_box({Vec3::Constant(0.2), Vec3::Constant(0.8)}, spec);
  ASSERT_TRUE(box);
  EXPECT_TRUE((box->lo == Index3(0, 0, 0)).all() && (box->hi == Index3(0, 0, 0)).all());
  EXPECT_EQ(box_cell_count(*box), 1u);

  box = object_cell_box({Vec3::Constant(0.1), Vec3(3.9, 2.9, 0.9)}, spec);
  ASSERT_TRUE(box);
  EXPECT_TRUE((box->hi == Index3(3, 2, 0)).all());
  EXPECT_EQ(box_cell_count(*box), 12u);

  box = object_cell_box({Vec3(2.5, 0.5, 0.5), Vec3(4.0, 0.5, 0.5)}, spec);
  ASSERT_TRUE(box);
  EXPECT_EQ(box->hi.x(), 3u);
}

TEST(ObjectCellBox, ClampsAndRejects) {
  const GridSpec spec = cube_grid(4, 4);
  auto box = object_cell_box({Vec3::Constant(-5), Vec3::Constant(9)}, spec);
  ASSERT_TRUE(box);
  EXPECT_EQ(box_cell_count(*box), 64u);
  EXPECT_FALSE(object_cell_box({Vec3::Constant(5), Vec3::Constant(6)}, spec));
  EXPECT_FALSE(object_cell_box({Vec3(-2, 1, 1), Vec3(-1, 2, 2)}, spec));
  // Touching the max face counts as overlapping.
  box = object_cell_box({Vec3(4, 1, 1), Vec3(5, 2, 2)}, spec);
  ASSERT_TRUE(box);
  EXPECT_EQ(box->lo.x(), 3u);
  const double nan = std::nan("");
  EXPECT_THROW(object_cell_box({Vec3(nan, 0, 0), Vec3::Ones()}, spec), InputError);
}

TEST(ObjectCellBox, EveryCellOfTheBoxTouchesTheAabb) {
  Xoshiro256StarStar rng(21);
  const GridSpec spec(Aabb{Vec3(-1, 0, 2), Vec3(3, 1, 5)}, Index3(7, 5, 6));
  for (int trial = 0; trial < 300; ++trial) {
    Vec3 a(rng.uniform(-2, 4), rng.uniform(-0.5, 1.5), rng.uniform(1.5, 5.5));
    Vec3 b(rng.uniform(-2, 4), rng.uniform(-0.5, 1.5), rng.uniform(1.5, 5.5));
    const Aabb aabb{a.cwiseMin(b), a.cwiseMax(b)};
    const auto box = object_cell_box(aabb, spec);
    ASSERT_EQ(box.has_value(), spec.bounds().overlaps(aabb));
    if (!box) continue;
    for (const auto& c : enumerate_box(*box)) ASSERT_TRUE(spec.cell_bounds(c).overlaps(aabb));
    // And the corners of the clamped aabb fall in the box.
    const Vec3 lo = aabb.lo.cwiseMax(spec.bounds().lo);
    const Vec3 hi = aabb.hi.cwiseMin(spec.bounds().hi);
    auto grown = [](Aabb b) {
      b.lo.array() -= 1e-12;
      b.hi.array() += 1e-12;
      return b;
    };
    ASSERT_TRUE(grown(spec.cell_bounds(box->lo)).contains(lo));
    ASSERT_TRUE(grown(spec.cell_bounds(box->hi)).contains(hi));
  }
}

TEST(ComputeDims, Examples) {
  const Aabb unit{Vec3::Zero(), Vec3::Ones()};
  EXPECT_TRUE((compute_dims(unit, 1000, 1) == Index3(10, 10, 10)).all());
  EXPECT_TRUE((compute_dims(unit, 200, 5) == Index3(10, 10, 10)).all());
  const Aabb slab{Vec3::Zero(), Vec3(2, 1, 1)};
  // Oracle: direct evaluation with pow instead of cbrt.
  const double k = std::pow(500.0 / 2.0, 1.0 / 3.0);
  EXPECT_NEAR(k, 6.2996, 1e-4);
  const Index3 expected(static_cast<std::uint32_t>(std::lround(2 * k)),
                        static_cast<std::uint32_t>(std::lround(k)),
                        static_cast<std::uint32_t>(std::lround(k)));
  EXPECT_TRUE((expected == Index3(13, 6, 6)).all());
  EXPECT_TRUE((compute_dims(slab, 500, 1) == expected).all());
  // A thin axis never drops below one cell.
  EXPECT_TRUE((compute_dims(Aabb{Vec3::Zero(), Vec3(1, 1, 1e-6)}, 10, 1) >= 1u).all());
  EXPECT_THROW(compute_dims(unit, 0, 1), InputError);
  EXPECT_THROW(compute_dims(Aabb{Vec3::Zero(), Vec3(1, 0, 1)}, 10, 1), InputError);
}

TEST(PaddedBounds, BoundaryVerticesLandInside) {
  TriangleMesh mesh;
  mesh.vertices = {Vec3(0, 0, 0), Vec3(2, 1, 0), Vec3(0, 1, 0)};
  mesh.triangles = {{0, 1, 2}};
  const Aabb b = padded_scene_bounds(mesh);
  EXPECT_NEAR(b.lo.x(), -2e-6, 1e-15);
  EXPECT_NEAR(b.hi.x(), 2 + 2e-6, 1e-15);
  EXPECT_GT(b.extent().z(), 0);  // flat axis gets a positive extent
  const GridSpec spec = grid_for_mesh(mesh, 5.0);
  EXPECT_EQ(spec.dims().z(), 1u);
}

TEST(CompactGrid, CellObjects) {
  const GridSpec spec(Aabb{Vec3::Zero(), Vec3(2, 2, 1)}, Index3(2, 2, 1));
  const CompactGrid grid{spec, {0, 1, 3, 3, 4}, {0, 0, 1, 1}};
  EXPECT_NO_THROW(grid.check_invariants());
  EXPECT_TRUE(cell_objects(grid, 2).empty());
  const auto cell1 = cell_objects(grid, 1);
  EXPECT_EQ(std::vector<std::uint32_t>(cell1.begin(), cell1.end()), (std::vector<std::uint32_t>{0, 1}));
  const auto last = cell_objects(grid, 3);
  EXPECT_EQ(last.data() + last.size(), grid.object_ids.data() + grid.offsets.back());
  EXPECT_THROW(cell_objects(grid, 4), InvariantError);
}

TEST(CompactGrid, InvariantChecks) {
  const GridSpec spec(Aabb{Vec3::Zero(), Vec3(2, 2, 1)}, Index3(2, 2, 1));
  EXPECT_NO_THROW(CompactGrid::empty(spec).check_invariants());
  EXPECT_THROW((CompactGrid{spec, {0, 1, 3, 3}, {0, 0, 1}}).check_invariants(), InvariantError);
  EXPECT_THROW((CompactGrid{spec, {0, 2, 1, 3, 4}, {0, 0, 1, 1}}).check_invariants(), InvariantError);
  EXPECT_THROW((CompactGrid{spec, {0, 1, 3, 3, 4}, {0, 1, 0, 1}}).check_invariants(), InvariantError);
  EXPECT_THROW((CompactGrid{spec, {0, 1, 3, 3, 3}, {0, 0, 1, 1}}).check_invariants(), InvariantError);
}
