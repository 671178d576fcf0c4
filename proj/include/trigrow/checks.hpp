#pragma once

#include <vector>

#include "trigrow/geometry.hpp"
#include "trigrow/scores.hpp"
#include "trigrow/triangulation.hpp"
#include "trigrow/types.hpp"

namespace trigrow {

// Result of the affine back-projection test around a candidate triangle.
struct CoherenceReport {
  std::vector<double> errors;  // per-neighbor back-projection error, pixels
  double median = 0.0;         // lower median of errors (0 when empty)
  double e_hat = 1.0;          // 1 / (1 + e^{(median - 10) * 0.5})
  bool accepted = true;
};

// Both hulls are convex and the candidate shares one hull side in the
// template image (growth contract); vertices 0 and 1 of the candidate are
// the shared-side endpoints. Accepts only when the third vertex lies
// strictly outside the shared side's half-plane in BOTH images. A third
// vertex on the line (degenerate triangle) or on the hull side rejects.
bool non_intersection_check(const Polygon& seed_hull_t,
                            const Polygon& seed_hull_s,
                            const TriangleProjection& cand);

// Back-projects the seed keypoints adjacent (in tri_t) to the candidate's
// template vertices through the candidate's affine map and reports the
// lower-median pixel error. Shared-side endpoints (cand vertices 0 and 1)
// are excluded from the neighborhood. An empty neighborhood accepts
// vacuously with e_hat = 1.
CoherenceReport local_coherence_check(const Seed& seed,
                                      const TriangleProjection& cand,
                                      const TriangulationGraph& tri_t,
                                      const KeyPointSet& scene,
                                      double threshold = 0.7);

}  // namespace trigrow
