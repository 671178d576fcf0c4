#pragma once

#include <vector>

#include "trigrow/raster.hpp"
#include "trigrow/types.hpp"

namespace trigrow {

// Final seed filtering: each seed becomes a detection with its template and
// scene hulls; seeds whose scene-hull interiors intersect form a group and
// only one survives per group. With both images present the survivor is the
// seed with the lowest photometric difference median j (scene warped into
// the template frame through the seed's TPS, histogram-matched, compared
// inside the template hull); without images the survivor is the seed with
// the most matches. Ties keep the earlier seed. Seeds whose hulls are
// degenerate are dropped.
std::vector<Detection> photometric_filtering(const std::vector<Seed>& seeds,
                                             const KeyPointSet& templ,
                                             const KeyPointSet& scene,
                                             const Raster* template_image = nullptr,
                                             const Raster* scene_image = nullptr,
                                             double tps_lambda = 0.0);

}  // namespace trigrow
