#include "trigrow/checks.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "trigrow/errors.hpp"

namespace trigrow {

namespace {

// Index of the hull side carrying both a and b, or -1. The pair may be a
// sub-segment of the side: collinear template points subdivide hull sides,
// so expansion hands us sub-side endpoints rather than hull vertices.
int find_hull_side(const Polygon& hull, const Vec2& a, const Vec2& b) {
  if (a.x == b.x && a.y == b.y) return -1;
  const std::size_t n = hull.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = hull[i];
    const Vec2& q = hull[(i + 1) % n];
    if (point_on_segment(p, q, a) && point_on_segment(p, q, b)) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

}  // namespace

bool non_intersection_check(const Polygon& seed_hull_t,
                            const Polygon& seed_hull_s,
                            const TriangleProjection& cand) {
  const Vec2& ta = cand.tpl[0]->pos;
  const Vec2& tb = cand.tpl[1]->pos;
  if (find_hull_side(seed_hull_t, ta, tb) < 0) {
    throw ValidationError(
        "candidate triangle does not share a hull side with the seed");
  }

  const Vec2 ref_t = polygon_centroid(seed_hull_t);
  const HullSide side_t =
      classify_vertex_vs_side(ta, tb, ref_t, cand.tpl[2]->pos);
  if (side_t != HullSide::kOuterHalfplane) return false;

  // The corresponding side in the scene is the segment between the pinned
  // scene correspondents of the shared template endpoints; it need not be a
  // hull edge there, so only the interior reference comes from the hull.
  const Vec2 ref_s = polygon_centroid(seed_hull_s);
  const HullSide side_s = classify_vertex_vs_side(
      cand.scn[0]->pos, cand.scn[1]->pos, ref_s, cand.scn[2]->pos);
  return side_s == HullSide::kOuterHalfplane;
}

CoherenceReport local_coherence_check(const Seed& seed,
                                      const TriangleProjection& cand,
                                      const TriangulationGraph& tri_t,
                                      const KeyPointSet& scene,
                                      double threshold) {
  const std::int64_t side_a = cand.tpl[0]->id;
  const std::int64_t side_b = cand.tpl[1]->id;

  std::set<std::int64_t> neighborhood;
  for (const KeyPoint* v : cand.tpl) {
    for (std::int64_t nb : tri_t.neighbors(v->id)) {
      if (nb == side_a || nb == side_b) continue;
      if (nb == cand.tpl[0]->id || nb == cand.tpl[1]->id ||
          nb == cand.tpl[2]->id) {
        continue;
      }
      if (seed.match_for_template(nb) != nullptr) neighborhood.insert(nb);
    }
  }

  CoherenceReport report;
  if (neighborhood.empty()) {
    report.accepted = report.e_hat >= threshold;
    return report;
  }

  const AffineMap map = affine_from_triangles(
      {cand.tpl[0]->pos, cand.tpl[1]->pos, cand.tpl[2]->pos},
      {cand.scn[0]->pos, cand.scn[1]->pos, cand.scn[2]->pos});

  report.errors.reserve(neighborhood.size());
  for (std::int64_t id : neighborhood) {
    const Match* m = seed.match_for_template(id);
    const Vec2 projected = map.apply(tri_t.position(id));
    report.errors.push_back((scene.at(m->scene_id).pos - projected).norm());
  }

  std::vector<double> sorted = report.errors;
  std::sort(sorted.begin(), sorted.end());
  report.median = sorted[(sorted.size() - 1) / 2];
  report.e_hat = 1.0 / (1.0 + std::exp((report.median - 10.0) * 0.5));
  report.accepted = report.e_hat >= threshold;
  return report;
}

}  // namespace trigrow
