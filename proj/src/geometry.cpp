#include "trigrow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace trigrow {

double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double ad = adx * adx + ady * ady;
  const double bd = bdx * bdx + bdy * bdy;
  const double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
         ad * (bdx * cdy - bdy * cdx);
}

bool segments_properly_cross(const Vec2& p1, const Vec2& p2, const Vec2& q1,
                             const Vec2& q2) {
  const double d1 = orient2d(q1, q2, p1);
  const double d2 = orient2d(q1, q2, p2);
  const double d3 = orient2d(p1, p2, q1);
  const double d4 = orient2d(p1, p2, q2);
  return ((d1 > kGeomEps && d2 < -kGeomEps) || (d1 < -kGeomEps && d2 > kGeomEps)) &&
         ((d3 > kGeomEps && d4 < -kGeomEps) || (d3 < -kGeomEps && d4 > kGeomEps));
}

bool point_on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  if (std::abs(orient2d(a, b, p)) > kGeomEps) return false;
  const double lo_x = std::min(a.x, b.x) - kGeomEps;
  const double hi_x = std::max(a.x, b.x) + kGeomEps;
  const double lo_y = std::min(a.y, b.y) - kGeomEps;
  const double hi_y = std::max(a.y, b.y) + kGeomEps;
  return p.x >= lo_x && p.x <= hi_x && p.y >= lo_y && p.y <= hi_y;
}

Polygon convex_hull(const std::vector<Vec2>& points) {
  std::vector<Vec2> pts = points;
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  if (pts.size() < 3) {
    throw GeometryError("convex hull needs at least 3 distinct points");
  }

  // Monotone chain. Collinear points on the hull boundary are dropped.
  const auto build = [&](bool lower) {
    std::vector<Vec2> chain;
    const auto scan = [&](const Vec2& p) {
      while (chain.size() >= 2 &&
             orient2d(chain[chain.size() - 2], chain.back(), p) <= kGeomEps) {
        chain.pop_back();
      }
      chain.push_back(p);
    };
    if (lower) {
      for (const Vec2& p : pts) scan(p);
    } else {
      for (auto it = pts.rbegin(); it != pts.rend(); ++it) scan(*it);
    }
    return chain;
  };

  std::vector<Vec2> lower = build(true);
  std::vector<Vec2> upper = build(false);
  Polygon hull(lower.begin(), lower.end() - 1);
  hull.insert(hull.end(), upper.begin(), upper.end() - 1);
  if (hull.size() < 3) {
    throw GeometryError("convex hull is degenerate: points are collinear");
  }
  return hull;
}

double polygon_area(const Polygon& poly) {
  double twice = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    twice += p.cross(q);
  }
  return std::abs(twice) * 0.5;
}

Vec2 polygon_centroid(const Polygon& poly) {
  double twice = 0.0;
  double cx = 0.0, cy = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double w = p.cross(q);
    twice += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  if (std::abs(twice) < kGeomEps) {
    // Degenerate polygon; fall back to the vertex mean.
    Vec2 mean;
    for (const Vec2& p : poly) mean = mean + p;
    return mean * (1.0 / static_cast<double>(poly.size()));
  }
  return {cx / (3.0 * twice), cy / (3.0 * twice)};
}

bool point_in_polygon(const Polygon& poly, const Vec2& p) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (point_on_segment(poly[i], poly[(i + 1) % n], p)) return true;
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

bool point_strictly_inside(const Polygon& poly, const Vec2& p) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (point_on_segment(poly[i], poly[(i + 1) % n], p)) return false;
  }
  return point_in_polygon(poly, p);
}

namespace {

// Projects a polygon onto an axis and returns [min, max].
std::pair<double, double> project(const Polygon& poly, const Vec2& axis) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Vec2& p : poly) {
    const double v = p.dot(axis);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

}  // namespace

bool polygons_intersect(const Polygon& a, const Polygon& b) {
  if (a.size() < 3 || b.size() < 3) return false;
  // Separating axis test over both polygons' edge normals. Interiors are
  // open sets, so a zero-width gap (boundary contact) still separates.
  const auto separated_on_edges = [&](const Polygon& poly) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 e = poly[(i + 1) % n] - poly[i];
      const Vec2 axis{-e.y, e.x};
      const double len = axis.norm();
      if (len < 1e-15) continue;
      const Vec2 unit{axis.x / len, axis.y / len};
      const auto [a_lo, a_hi] = project(a, unit);
      const auto [b_lo, b_hi] = project(b, unit);
      if (a_hi <= b_lo + kGeomEps || b_hi <= a_lo + kGeomEps) return true;
    }
    return false;
  };
  return !separated_on_edges(a) && !separated_on_edges(b);
}

HullSide classify_vertex_vs_hull_side(const Polygon& hull, std::size_t side,
                                      const Vec2& c) {
  if (hull.size() < 3) throw GeometryError("hull must have at least 3 vertices");
  if (side >= hull.size()) throw ValidationError("hull side index out of range");
  const Vec2& p = hull[side];
  const Vec2& q = hull[(side + 1) % hull.size()];
  return classify_vertex_vs_side(p, q, polygon_centroid(hull), c);
}

HullSide classify_vertex_vs_side(const Vec2& p, const Vec2& q,
                                 const Vec2& interior_ref, const Vec2& c) {
  const double ref = orient2d(p, q, interior_ref);
  const double val = orient2d(p, q, c);
  if (std::abs(val) <= kGeomEps) return HullSide::kOnLine;
  if (std::abs(ref) <= kGeomEps) {
    throw GeometryError("interior reference point lies on the side line");
  }
  return (val > 0.0) == (ref > 0.0) ? HullSide::kInnerHalfplane
                                    : HullSide::kOuterHalfplane;
}

AffineMap AffineMap::inverse() const {
  const double d = det();
  if (std::abs(d) < 1e-15) throw GeometryError("affine map is singular");
  AffineMap inv;
  inv.a = {a[3] / d, -a[1] / d, -a[2] / d, a[0] / d};
  inv.t = {-(inv.a[0] * t.x + inv.a[1] * t.y), -(inv.a[2] * t.x + inv.a[3] * t.y)};
  return inv;
}

AffineMap affine_from_triangles(const std::array<Vec2, 3>& src,
                                const std::array<Vec2, 3>& dst) {
  const double d = orient2d(src[0], src[1], src[2]);
  if (std::abs(d) <= kGeomEps) {
    throw GeometryError("source triangle is degenerate");
  }
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i) m.row(i) << src[i].x, src[i].y, 1.0;
  Eigen::Matrix<double, 3, 2> rhs;
  for (int i = 0; i < 3; ++i) rhs.row(i) << dst[i].x, dst[i].y;
  const Eigen::Matrix<double, 3, 2> sol = m.partialPivLu().solve(rhs);
  AffineMap map;
  map.a = {sol(0, 0), sol(1, 0), sol(0, 1), sol(1, 1)};
  map.t = {sol(2, 0), sol(2, 1)};
  return map;
}

Vec2 Homography::apply(const Vec2& p) const {
  const double w = h[6] * p.x + h[7] * p.y + h[8];
  if (std::abs(w) < 1e-15) {
    throw GeometryError("homography maps point to infinity");
  }
  return {(h[0] * p.x + h[1] * p.y + h[2]) / w,
          (h[3] * p.x + h[4] * p.y + h[5]) / w};
}

Homography Homography::inverse() const {
  Eigen::Matrix3d m;
  m << h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], h[8];
  if (std::abs(m.determinant()) < 1e-15) {
    throw GeometryError("homography is singular");
  }
  const Eigen::Matrix3d inv = m.inverse();
  Homography out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out.h[r * 3 + c] = inv(r, c);
  }
  if (std::abs(out.h[8]) > 1e-12) {
    for (double& v : out.h) v /= out.h[8];
    out.h[8] = 1.0;
  }
  return out;
}

Polygon clip_polygon_to_rect(const Polygon& poly, double x0, double y0, double x1,
                             double y1) {
  // Sutherland-Hodgman against each rectangle half-plane in turn.
  const auto clip = [](const Polygon& in, auto inside, auto intersect) {
    Polygon out;
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& cur = in[i];
      const Vec2& prev = in[(i + n - 1) % n];
      const bool cur_in = inside(cur);
      const bool prev_in = inside(prev);
      if (cur_in) {
        if (!prev_in) out.push_back(intersect(prev, cur));
        out.push_back(cur);
      } else if (prev_in) {
        out.push_back(intersect(prev, cur));
      }
    }
    return out;
  };
  const auto lerp_x = [](const Vec2& a, const Vec2& b, double x) {
    const double t = (x - a.x) / (b.x - a.x);
    return Vec2{x, a.y + t * (b.y - a.y)};
  };
  const auto lerp_y = [](const Vec2& a, const Vec2& b, double y) {
    const double t = (y - a.y) / (b.y - a.y);
    return Vec2{a.x + t * (b.x - a.x), y};
  };

  Polygon out = poly;
  out = clip(out, [&](const Vec2& p) { return p.x >= x0; },
             [&](const Vec2& a, const Vec2& b) { return lerp_x(a, b, x0); });
  if (out.empty()) return out;
  out = clip(out, [&](const Vec2& p) { return p.x <= x1; },
             [&](const Vec2& a, const Vec2& b) { return lerp_x(a, b, x1); });
  if (out.empty()) return out;
  out = clip(out, [&](const Vec2& p) { return p.y >= y0; },
             [&](const Vec2& a, const Vec2& b) { return lerp_y(a, b, y0); });
  if (out.empty()) return out;
  out = clip(out, [&](const Vec2& p) { return p.y <= y1; },
             [&](const Vec2& a, const Vec2& b) { return lerp_y(a, b, y1); });
  return out;
}

}  // namespace trigrow
