#include "trigrow/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trigrow {

namespace {

double squared_distance(const Descriptor& a, const Descriptor& b) {
  double sum = 0.0;
  for (int i = 0; i < kDescriptorSize; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

}  // namespace

std::vector<Match> match_sets(const KeyPointSet& templ, const KeyPointSet& scene,
                              double ratio_threshold) {
  if (!(ratio_threshold > 0.0) || ratio_threshold > 1.0) {
    throw ValidationError("ratio threshold must be in (0, 1]");
  }
  if (templ.empty()) {
    throw ValidationError("template keypoint set is empty");
  }

  // Template points sorted by id so that a strict '<' comparison leaves the
  // smallest id as the winner on exact distance ties.
  std::vector<const KeyPoint*> by_id;
  by_id.reserve(templ.size());
  for (const KeyPoint& kp : templ.points()) by_id.push_back(&kp);
  std::sort(by_id.begin(), by_id.end(),
            [](const KeyPoint* a, const KeyPoint* b) { return a->id < b->id; });

  std::vector<const KeyPoint*> scene_by_id;
  scene_by_id.reserve(scene.size());
  for (const KeyPoint& kp : scene.points()) scene_by_id.push_back(&kp);
  std::sort(scene_by_id.begin(), scene_by_id.end(),
            [](const KeyPoint* a, const KeyPoint* b) { return a->id < b->id; });

  std::vector<Match> matches;
  for (const KeyPoint* skp : scene_by_id) {
    const KeyPoint* best = nullptr;
    double best_sq = std::numeric_limits<double>::infinity();
    double second_sq = std::numeric_limits<double>::infinity();
    for (const KeyPoint* tkp : by_id) {
      const double d = squared_distance(skp->descriptor, tkp->descriptor);
      if (d < best_sq) {
        second_sq = best_sq;
        best_sq = d;
        best = tkp;
      } else if (d < second_sq) {
        second_sq = d;
      }
    }
    if (best == nullptr) continue;
    if (by_id.size() > 1) {
      // d1/d2 < ratio, compared on squared distances to avoid two sqrts.
      // A zero second-best means two identical template descriptors; the
      // match is ambiguous by construction, so the ratio test rejects it.
      if (second_sq <= 0.0) continue;
      if (!(best_sq < ratio_threshold * ratio_threshold * second_sq)) continue;
    }
    matches.push_back({best->id, skp->id, std::sqrt(best_sq)});
  }
  return matches;
}

}  // namespace trigrow
