#pragma once

#include <array>
#include <optional>

#include "trigrow/types.hpp"

namespace trigrow {

// Tolerance for orientation / incircle determinants, in squared-pixel units.
inline constexpr double kGeomEps = 1e-9;

// Twice the signed area of triangle (a, b, c). Positive when c is to the
// left of the directed line a -> b.
double orient2d(const Vec2& a, const Vec2& b, const Vec2& c);

// > 0 when d lies strictly inside the circumcircle of CCW triangle (a, b, c).
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

// Proper crossing: the open segments intersect in a single interior point.
// Shared endpoints and collinear touching do not count.
bool segments_properly_cross(const Vec2& p1, const Vec2& p2, const Vec2& q1,
                             const Vec2& q2);

// True if p lies on segment [a, b] within tolerance (endpoints included).
bool point_on_segment(const Vec2& a, const Vec2& b, const Vec2& p);

// Convex hull in CCW order, first vertex = lexicographically smallest point.
// Throws GeometryError when fewer than 3 distinct points or all collinear.
Polygon convex_hull(const std::vector<Vec2>& points);

double polygon_area(const Polygon& poly);
Vec2 polygon_centroid(const Polygon& poly);

// Even-odd point containment; boundary points count as inside.
bool point_in_polygon(const Polygon& poly, const Vec2& p);
// Strict interior containment: boundary points are outside.
bool point_strictly_inside(const Polygon& poly, const Vec2& p);

// True iff the interiors of the two convex polygons intersect.
// Pure boundary contact (shared vertex or edge) returns false.
bool polygons_intersect(const Polygon& a, const Polygon& b);

enum class HullSide { kOnLine, kInnerHalfplane, kOuterHalfplane };

// Classifies c against the infinite line through one side of a convex hull,
// oriented by the hull's interior. side = index of the hull vertex starting
// the edge (hull[side] -> hull[(side+1) % n]).
HullSide classify_vertex_vs_hull_side(const Polygon& hull, std::size_t side,
                                      const Vec2& c);

// Variant taking the side endpoints directly plus a reference point that is
// known to be on the interior side (typically a hull centroid). Used when the
// side is defined by keypoint correspondences rather than hull indices.
HullSide classify_vertex_vs_side(const Vec2& p, const Vec2& q,
                                 const Vec2& interior_ref, const Vec2& c);

// Row-major 2x3 affine map: y = A * x + t.
struct AffineMap {
  std::array<double, 4> a{1.0, 0.0, 0.0, 1.0};  // a00 a01 a10 a11
  Vec2 t;

  Vec2 apply(const Vec2& p) const {
    return {a[0] * p.x + a[1] * p.y + t.x, a[2] * p.x + a[3] * p.y + t.y};
  }
  double det() const { return a[0] * a[3] - a[1] * a[2]; }
  // Throws GeometryError when the linear part is singular.
  AffineMap inverse() const;
};

// Exact affine map sending src[i] -> dst[i]. Throws GeometryError when the
// source triangle is degenerate.
AffineMap affine_from_triangles(const std::array<Vec2, 3>& src,
                                const std::array<Vec2, 3>& dst);

// Row-major 3x3 homography; h[8] normalized to 1 when representable.
struct Homography {
  std::array<double, 9> h{1, 0, 0, 0, 1, 0, 0, 0, 1};

  // Throws GeometryError when the point maps to the line at infinity.
  Vec2 apply(const Vec2& p) const;
  Homography inverse() const;
};

// Clips a convex polygon against an axis-aligned rectangle
// (Sutherland-Hodgman). May return an empty polygon.
Polygon clip_polygon_to_rect(const Polygon& poly, double x0, double y0, double x1,
                             double y1);

}  // namespace trigrow
