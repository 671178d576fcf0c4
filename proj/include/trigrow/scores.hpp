#pragma once

#include <array>
#include <optional>

#include "trigrow/types.hpp"

namespace trigrow {

// A candidate matching triangle: three template keypoints and the three scene
// keypoints matched to them, index-aligned. Non-owning views; the keypoint
// sets must outlive the projection.
struct TriangleProjection {
  std::array<const KeyPoint*, 3> tpl{};
  std::array<const KeyPoint*, 3> scn{};
};

// Per-triangle consistency scores. Components are optional because the
// reduced score evaluated during expansion only uses dv and scale_ratio.
struct ScoreVector {
  std::optional<double> dv;
  std::optional<double> position;
  std::optional<double> orientation;
  std::optional<double> scale_ratio;
};

enum class RcsMu { kPaper, kCorrected };

// Sigmoid similarity of one descriptor pair, 0.5 at distance 400.
double dv_pair(const Descriptor& a, const Descriptor& b);
double dv_pair_from_distance(double distance);

// Mean of the three diagonal descriptor-pair similarities.
double dv_score(const TriangleProjection& t);

// Gaussian on the summed difference of perimeter-normalized side lengths.
// Throws GeometryError on a zero-perimeter triangle.
double position_score(const TriangleProjection& t);

// Gaussian on the mean summed difference of the three per-pair angle terms:
// keypoint-vs-keypoint and each keypoint against the inter-point direction.
// Throws GeometryError when two keypoints of a pair coincide.
double orientation_score(const TriangleProjection& t);

// Gaussian on the mean summed difference of pairwise scale ratios.
double scale_ratio_score(const TriangleProjection& t);

// Combined score: Gaussian in the Euclidean norm of (dv, position,
// orientation, scale_ratio) centered at 2. Throws ValidationError when a
// component is missing.
double ccs(const ScoreVector& s);

// Reduced score over (dv, scale_ratio). The corrected center is sqrt(2), the
// norm of a perfect component pair; RcsMu::kPaper keeps the literal center 2
// for comparison runs. Throws ValidationError when a component is missing.
double rcs(const ScoreVector& s, RcsMu mu = RcsMu::kCorrected);

// Convenience: evaluates all four components for a candidate.
ScoreVector score_components(const TriangleProjection& t);

}  // namespace trigrow
