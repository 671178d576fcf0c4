#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "oracles.hpp"
#include "trigrow/errors.hpp"
#include "trigrow/kdpartition.hpp"

using namespace trigrow;

namespace {
using Points = std::vector<std::pair<std::int64_t, Vec2>>;
}

TEST_CASE("single leaf is the bounding box") {
  const Points pts{{0, {1, 2}}, {1, {5, 4}}, {2, {3, 9}}};
  const KdPartition part = kd_partition(pts, 1);
  REQUIRE(part.leaves.size() == 1);
  const KdLeaf& leaf = part.leaves[0];
  CHECK(leaf.x0 == 1);
  CHECK(leaf.x1 == 5);
  CHECK(leaf.y0 == 2);
  CHECK(leaf.y1 == 9);
  CHECK(leaf.point_ids == std::vector<std::int64_t>{0, 1, 2});
}

TEST_CASE("even split cuts between the straddling coordinates") {
  const Points pts{{0, {0, 0}}, {1, {1, 0}}, {2, {2, 1}}, {3, {3, 1}}};
  const KdPartition part = kd_partition(pts, 2);
  REQUIRE(part.leaves.size() == 2);
  CHECK(part.leaves[0].point_ids == std::vector<std::int64_t>{0, 1});
  CHECK(part.leaves[1].point_ids == std::vector<std::int64_t>{2, 3});
  CHECK(part.leaves[0].x1 == doctest::Approx(1.5));
  CHECK(part.leaves[1].x0 == doctest::Approx(1.5));
  CHECK(part.leaves[0].y0 == 0);
  CHECK(part.leaves[0].y1 == 1);  // full height: the split only cuts x
}

TEST_CASE("odd split gives the left half the extra point") {
  const Points pts{{0, {0, 0}}, {1, {1, 0}}, {2, {2, 1}}, {3, {3, 1}}, {4, {4, 0}}};
  const KdPartition part = kd_partition(pts, 2);
  REQUIRE(part.leaves.size() == 2);
  CHECK(part.leaves[0].point_ids == std::vector<std::int64_t>{0, 1, 2});
  CHECK(part.leaves[1].point_ids == std::vector<std::int64_t>{3, 4});
  CHECK(part.leaves[0].x1 == doctest::Approx(2.5));
}

TEST_CASE("taller boxes split along y") {
  const Points pts{{0, {0, 0}}, {1, {0, 3}}, {2, {1, 7}}, {3, {1, 10}}};
  const KdPartition part = kd_partition(pts, 2);
  REQUIRE(part.leaves.size() == 2);
  CHECK(part.leaves[0].point_ids == std::vector<std::int64_t>{0, 1});
  CHECK(part.leaves[1].point_ids == std::vector<std::int64_t>{2, 3});
  CHECK(part.leaves[0].y1 == doctest::Approx(5.0));
  CHECK(part.leaves[1].y0 == doctest::Approx(5.0));
  CHECK(part.leaves[0].x0 == 0);
  CHECK(part.leaves[0].x1 == 1);
}

TEST_CASE("the most populated leaf is split first") {
  Points pts;
  for (int i = 0; i < 7; ++i) {
    pts.emplace_back(i, Vec2{static_cast<double>(i), 0.0});
  }
  const KdPartition part = kd_partition(pts, 3);
  REQUIRE(part.leaves.size() == 3);
  // First cut 4 | 3 at x = 3.5; the four-point left leaf is the most
  // populated, so it splits again (in place) rather than the right one.
  CHECK(part.leaves[0].point_ids == std::vector<std::int64_t>{0, 1});
  CHECK(part.leaves[1].point_ids == std::vector<std::int64_t>{4, 5, 6});
  CHECK(part.leaves[2].point_ids == std::vector<std::int64_t>{2, 3});
}

TEST_CASE("leaves tile the bounding box and own every point once") {
  const Points pts = oracle::random_points(200, 42, 500.0);
  for (std::size_t leaves : {1u, 2u, 5u, 9u, 16u}) {
    const KdPartition part = kd_partition(pts, leaves);
    REQUIRE(part.leaves.size() == leaves);

    double area = 0.0;
    std::size_t total = 0;
    for (const KdLeaf& leaf : part.leaves) {
      CHECK(!leaf.point_ids.empty());
      CHECK(std::is_sorted(leaf.point_ids.begin(), leaf.point_ids.end()));
      CHECK(leaf.x1 >= leaf.x0);
      CHECK(leaf.y1 >= leaf.y0);
      area += (leaf.x1 - leaf.x0) * (leaf.y1 - leaf.y0);
      total += leaf.point_ids.size();
      for (std::int64_t id : leaf.point_ids) {
        const Vec2& p = pts[static_cast<std::size_t>(id)].second;
        CHECK(p.x >= leaf.x0 - 1e-9);
        CHECK(p.x <= leaf.x1 + 1e-9);
        CHECK(p.y >= leaf.y0 - 1e-9);
        CHECK(p.y <= leaf.y1 + 1e-9);
      }
    }
    CHECK(total == pts.size());

    double bx0 = pts[0].second.x, bx1 = bx0, by0 = pts[0].second.y, by1 = by0;
    for (const auto& [id, p] : pts) {
      bx0 = std::min(bx0, p.x);
      bx1 = std::max(bx1, p.x);
      by0 = std::min(by0, p.y);
      by1 = std::max(by1, p.y);
    }
    CHECK(area == doctest::Approx((bx1 - bx0) * (by1 - by0)).epsilon(1e-9));
  }
}

TEST_CASE("leaf_of finds the owning leaf") {
  const Points pts{{7, {0, 0}}, {8, {1, 0}}, {9, {2, 1}}, {10, {3, 1}}};
  const KdPartition part = kd_partition(pts, 2);
  CHECK(part.leaf_of(7) == 0);
  CHECK(part.leaf_of(8) == 0);
  CHECK(part.leaf_of(9) == 1);
  CHECK(part.leaf_of(10) == 1);
  CHECK(part.leaf_of(99) == -1);
}

TEST_CASE("infeasible partitions are rejected") {
  const Points pts{{0, {0, 0}}, {1, {1, 0}}, {2, {2, 1}}};
  CHECK_THROWS_AS(kd_partition(pts, 0), ValidationError);
  CHECK_THROWS_AS(kd_partition(pts, 4), ValidationError);
  CHECK_THROWS_AS(kd_partition({}, 1), ValidationError);
}
