#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "trigrow/geometry.hpp"
#include "trigrow/raster.hpp"
#include "trigrow/types.hpp"

namespace trigrow {

struct RansacConfig {
  int iterations = 2000;
  double inlier_threshold = 3.0;  // px reprojection
  std::size_t min_inliers = 10;
  std::uint32_t seed = 12345;

  // Throws ValidationError when a field is out of range.
  void validate() const;
};

struct RansacResult {
  Homography homography;
  std::vector<Match> inliers;
};

// Normalized DLT homography through >= 4 point pairs; exact for 4 pairs in
// general position. Throws ValidationError for fewer than 4 pairs,
// GeometryError for degenerate configurations.
Homography homography_dlt(const std::vector<std::pair<Vec2, Vec2>>& pairs);

// Fixed-iteration RANSAC over 4-match samples, refit on the best consensus
// set; deterministic for a given cfg.seed. Returns std::nullopt when the
// consensus stays below cfg.min_inliers.
std::optional<RansacResult> ransac_homography(const std::vector<Match>& matches,
                                              const KeyPointSet& templ,
                                              const KeyPointSet& scene,
                                              const RansacConfig& cfg);

// Greedy multi-instance baseline: repeatedly fit a homography, record a
// detection whose scene hull is the projected template bounding rectangle
// (clipped to the scene image when one is given), remove the inliers, and
// repeat until no model reaches min_inliers.
std::vector<Detection> baseline_detect(const KeyPointSet& templ,
                                       const KeyPointSet& scene,
                                       const RansacConfig& cfg,
                                       double ratio_threshold = 0.8,
                                       const Raster* scene_image = nullptr);

}  // namespace trigrow
