#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "trigrow/errors.hpp"
#include "trigrow/geometry.hpp"

using namespace trigrow;

TEST_CASE("orient2d sign convention") {
  const Vec2 a{0, 0}, b{1, 0};
  CHECK(orient2d(a, b, {0, 1}) > 0);   // left of a->b
  CHECK(orient2d(a, b, {0, -1}) < 0);  // right of a->b
  CHECK(orient2d(a, b, {2, 0}) == 0);  // on the line
  CHECK(orient2d(a, b, {0.5, 0.5}) == doctest::Approx(0.5));  // twice the area
}

TEST_CASE("incircle against explicit circumcircle") {
  // CCW unit triangle; circumcircle is centered at (0.5, 0.5), r^2 = 0.5.
  const Vec2 a{0, 0}, b{1, 0}, c{0, 1};
  CHECK(incircle(a, b, c, {0.5, 0.5}) > 0);
  CHECK(incircle(a, b, c, {2, 2}) < 0);
  CHECK(incircle(a, b, c, {1, 1}) == doctest::Approx(0.0));  // cocircular
}

TEST_CASE("segments_properly_cross counts only interior crossings") {
  CHECK(segments_properly_cross({0, 0}, {2, 2}, {0, 2}, {2, 0}));
  CHECK(!segments_properly_cross({0, 0}, {1, 1}, {2, 2}, {3, 3}));  // disjoint
  CHECK(!segments_properly_cross({0, 0}, {1, 1}, {1, 1}, {2, 0}));  // shared endpoint
  CHECK(!segments_properly_cross({0, 0}, {2, 0}, {1, 0}, {3, 0}));  // collinear overlap
  CHECK(!segments_properly_cross({0, 0}, {2, 0}, {1, 0}, {1, 2}));  // T-junction
}

TEST_CASE("point_on_segment includes endpoints") {
  const Vec2 a{0, 0}, b{4, 2};
  CHECK(point_on_segment(a, b, {2, 1}));
  CHECK(point_on_segment(a, b, a));
  CHECK(point_on_segment(a, b, b));
  CHECK(!point_on_segment(a, b, {6, 3}));   // collinear but beyond
  CHECK(!point_on_segment(a, b, {2, 1.5}));
}

TEST_CASE("convex_hull order and start vertex") {
  const std::vector<Vec2> pts{{1, 1}, {0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 0.5}};
  const Polygon hull = convex_hull(pts);
  REQUIRE(hull.size() == 4);
  CHECK(hull[0].x == 0);
  CHECK(hull[0].y == 0);  // lexicographically smallest first
  // CCW: positive signed area.
  CHECK(polygon_area(hull) == doctest::Approx(4.0));
  CHECK(hull[1].x == 2);  // next CCW vertex from (0,0) is (2,0)
  CHECK(hull[1].y == 0);
}

TEST_CASE("convex_hull drops collinear boundary points") {
  const std::vector<Vec2> pts{{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}};
  const Polygon hull = convex_hull(pts);
  CHECK(hull.size() == 4);  // (1,0) is interior to a side
}

TEST_CASE("convex_hull rejects degenerate input") {
  CHECK_THROWS_AS(convex_hull({{0, 0}, {1, 1}}), GeometryError);
  CHECK_THROWS_AS(convex_hull({{0, 0}, {1, 1}, {2, 2}, {3, 3}}), GeometryError);
  CHECK_THROWS_AS(convex_hull({{1, 1}, {1, 1}, {1, 1}}), GeometryError);
}

TEST_CASE("polygon area and centroid") {
  const Polygon square{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  CHECK(polygon_area(square) == doctest::Approx(4.0));
  const Vec2 c = polygon_centroid(square);
  CHECK(c.x == doctest::Approx(1.0));
  CHECK(c.y == doctest::Approx(1.0));

  const Polygon tri{{0, 0}, {3, 0}, {0, 3}};
  CHECK(polygon_area(tri) == doctest::Approx(4.5));
  const Vec2 tc = polygon_centroid(tri);
  CHECK(tc.x == doctest::Approx(1.0));
  CHECK(tc.y == doctest::Approx(1.0));
}

TEST_CASE("point containment boundary semantics") {
  const Polygon square{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  CHECK(point_in_polygon(square, {1, 1}));
  CHECK(point_in_polygon(square, {0, 1}));    // boundary counts
  CHECK(point_in_polygon(square, {0, 0}));    // vertex counts
  CHECK(!point_in_polygon(square, {3, 1}));
  CHECK(point_strictly_inside(square, {1, 1}));
  CHECK(!point_strictly_inside(square, {0, 1}));  // boundary excluded
  CHECK(!point_strictly_inside(square, {0, 0}));
  CHECK(!point_strictly_inside(square, {3, 1}));
}

TEST_CASE("polygons_intersect is interior-only") {
  const Polygon a{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  const Polygon b{{1, 1}, {3, 1}, {3, 3}, {1, 3}};   // overlaps
  const Polygon c{{2, 0}, {4, 0}, {4, 2}, {2, 2}};   // shares an edge only
  const Polygon d{{5, 5}, {6, 5}, {6, 6}, {5, 6}};   // disjoint
  const Polygon e{{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}, {0.5, 1.5}};  // contained

  CHECK(polygons_intersect(a, b));
  CHECK(polygons_intersect(b, a));
  CHECK(!polygons_intersect(a, c));
  CHECK(!polygons_intersect(a, d));
  CHECK(polygons_intersect(a, e));
  CHECK(polygons_intersect(e, a));
}

TEST_CASE("hull side classification") {
  const Polygon square{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  // Side 0 runs (0,0) -> (2,0); interior is above it.
  CHECK(classify_vertex_vs_hull_side(square, 0, {1, 1}) == HullSide::kInnerHalfplane);
  CHECK(classify_vertex_vs_hull_side(square, 0, {1, -1}) == HullSide::kOuterHalfplane);
  CHECK(classify_vertex_vs_hull_side(square, 0, {1, 0}) == HullSide::kOnLine);
  CHECK(classify_vertex_vs_hull_side(square, 0, {5, 0}) == HullSide::kOnLine);

  // Endpoint-form variant with an interior reference point.
  const Vec2 interior{1, 1};
  CHECK(classify_vertex_vs_side({0, 0}, {2, 0}, interior, {1, 3}) ==
        HullSide::kInnerHalfplane);
  CHECK(classify_vertex_vs_side({0, 0}, {2, 0}, interior, {1, -3}) ==
        HullSide::kOuterHalfplane);
  CHECK(classify_vertex_vs_side({0, 0}, {2, 0}, interior, {1, 0}) ==
        HullSide::kOnLine);
}

TEST_CASE("affine map application and inverse") {
  AffineMap m;
  m.a = {2.0, 1.0, 0.0, 3.0};
  m.t = {5.0, -1.0};
  const Vec2 p{1.0, 2.0};
  const Vec2 q = m.apply(p);
  CHECK(q.x == doctest::Approx(9.0));
  CHECK(q.y == doctest::Approx(5.0));
  CHECK(m.det() == doctest::Approx(6.0));

  const AffineMap inv = m.inverse();
  const Vec2 back = inv.apply(q);
  CHECK(back.x == doctest::Approx(p.x));
  CHECK(back.y == doctest::Approx(p.y));

  AffineMap singular;
  singular.a = {1.0, 2.0, 2.0, 4.0};
  CHECK_THROWS_AS(singular.inverse(), GeometryError);
}

TEST_CASE("affine_from_triangles interpolates its anchors") {
  const std::array<Vec2, 3> src{{{0, 0}, {1, 0}, {0, 1}}};
  const std::array<Vec2, 3> dst{{{3, 4}, {5, 4}, {3, 7}}};
  const AffineMap m = affine_from_triangles(src, dst);
  for (int i = 0; i < 3; ++i) {
    const Vec2 got = m.apply(src[static_cast<std::size_t>(i)]);
    CHECK(got.x == doctest::Approx(dst[static_cast<std::size_t>(i)].x));
    CHECK(got.y == doctest::Approx(dst[static_cast<std::size_t>(i)].y));
  }
  // Affine interpolation extends linearly beyond the anchors.
  const Vec2 mid = m.apply({0.5, 0.5});
  CHECK(mid.x == doctest::Approx(4.0));
  CHECK(mid.y == doctest::Approx(5.5));

  const std::array<Vec2, 3> degenerate{{{0, 0}, {1, 1}, {2, 2}}};
  CHECK_THROWS_AS(affine_from_triangles(degenerate, dst), GeometryError);
}

TEST_CASE("homography application and inverse") {
  Homography h;
  h.h = {2, 0, 1, 0, 2, -1, 0.001, 0.002, 1};
  const Vec2 p{10, 20};
  const Vec2 q = h.apply(p);
  const double w = 0.001 * 10 + 0.002 * 20 + 1;
  CHECK(q.x == doctest::Approx((2 * 10 + 1) / w));
  CHECK(q.y == doctest::Approx((2 * 20 - 1) / w));

  const Homography inv = h.inverse();
  const Vec2 back = inv.apply(q);
  CHECK(back.x == doctest::Approx(p.x));
  CHECK(back.y == doctest::Approx(p.y));
}

TEST_CASE("clip_polygon_to_rect") {
  const Polygon square{{-1, -1}, {3, -1}, {3, 3}, {-1, 3}};
  const Polygon clipped = clip_polygon_to_rect(square, 0, 0, 2, 2);
  REQUIRE(clipped.size() == 4);
  CHECK(polygon_area(clipped) == doctest::Approx(4.0));

  const Polygon inside{{0.5, 0.5}, {1, 0.5}, {1, 1}};
  CHECK(clip_polygon_to_rect(inside, 0, 0, 2, 2).size() == 3);

  const Polygon outside{{5, 5}, {6, 5}, {6, 6}};
  CHECK(clip_polygon_to_rect(outside, 0, 0, 2, 2).empty());
}
