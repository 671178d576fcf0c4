#pragma once

#include <vector>

#include "trigrow/types.hpp"

namespace trigrow {

// Exact nearest-neighbor matching from scene keypoints into the template set.
// For each scene keypoint the nearest template descriptor is found (ties go to
// the smaller template id) and kept iff d1/d2 < ratio_threshold, where d2 is
// the second-nearest distance. With a single template keypoint the ratio test
// is skipped. Several scene keypoints may share one template keypoint; that is
// what makes multiple object instances visible to the grouping stage.
// Output is ordered by scene id.
std::vector<Match> match_sets(const KeyPointSet& templ, const KeyPointSet& scene,
                              double ratio_threshold);

}  // namespace trigrow
