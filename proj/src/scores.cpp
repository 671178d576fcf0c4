#include "trigrow/scores.hpp"

#include <cmath>

#include "trigrow/geometry.hpp"

namespace trigrow {

namespace {

// Descriptor sigmoid parameters.
constexpr double kDvMu = 400.0;
constexpr double kDvSigma = 0.015;
// Gaussian widths.
constexpr double kPositionSigma = 0.2;
constexpr double kOrientationSigma = 1.75;
constexpr double kScaleRatioSigma = 10.0;
constexpr double kTotalSigma = 0.2;

double gaussian(double x, double sigma) {
  const double z = x / sigma;
  return std::exp(-0.5 * z * z);
}

// The three vertex pairs of a triangle, in side order.
constexpr int kPairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};

}  // namespace

double dv_pair_from_distance(double distance) {
  return 1.0 / (1.0 + std::exp((distance - kDvMu) * kDvSigma));
}

double dv_pair(const Descriptor& a, const Descriptor& b) {
  double sum = 0.0;
  for (int i = 0; i < kDescriptorSize; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return dv_pair_from_distance(std::sqrt(sum));
}

double dv_score(const TriangleProjection& t) {
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    total += dv_pair(t.tpl[i]->descriptor, t.scn[i]->descriptor);
  }
  return total / 3.0;
}

double position_score(const TriangleProjection& t) {
  double side_t[3];
  double side_s[3];
  double perim_t = 0.0;
  double perim_s = 0.0;
  for (int k = 0; k < 3; ++k) {
    const auto [i, j] = kPairs[k];
    side_t[k] = (t.tpl[i]->pos - t.tpl[j]->pos).norm();
    side_s[k] = (t.scn[i]->pos - t.scn[j]->pos).norm();
    perim_t += side_t[k];
    perim_s += side_s[k];
  }
  if (perim_t <= 0.0 || perim_s <= 0.0) {
    throw GeometryError("position score: triangle has zero perimeter");
  }
  double x = 0.0;
  for (int k = 0; k < 3; ++k) {
    x += std::abs(side_t[k] / perim_t - side_s[k] / perim_s);
  }
  return gaussian(x, kPositionSigma);
}

double orientation_score(const TriangleProjection& t) {
  double x_sum = 0.0;
  for (const auto& [i, j] : kPairs) {
    const Vec2 v_t = t.tpl[j]->pos - t.tpl[i]->pos;
    const Vec2 v_s = t.scn[j]->pos - t.scn[i]->pos;
    if (v_t.norm() <= 1e-12 || v_s.norm() <= 1e-12) {
      throw GeometryError("orientation score: coincident keypoints in a pair");
    }
    // Three rotation-invariant angle terms per pair: the two keypoint
    // orientations against each other, and each against the inter-point
    // direction seen from its end.
    const double a1_t = wrap_angle_diff(t.tpl[i]->orientation - t.tpl[j]->orientation);
    const double a1_s = wrap_angle_diff(t.scn[i]->orientation - t.scn[j]->orientation);
    // dir(p_i - p_j) evaluated at vertex i, dir(p_j - p_i) at vertex j.
    const double dir_t_ij = std::atan2(-v_t.y, -v_t.x);
    const double dir_s_ij = std::atan2(-v_s.y, -v_s.x);
    const double dir_t_ji = std::atan2(v_t.y, v_t.x);
    const double dir_s_ji = std::atan2(v_s.y, v_s.x);
    const double a2_t = wrap_angle_diff(t.tpl[i]->orientation - dir_t_ij);
    const double a2_s = wrap_angle_diff(t.scn[i]->orientation - dir_s_ij);
    const double a3_t = wrap_angle_diff(t.tpl[j]->orientation - dir_t_ji);
    const double a3_s = wrap_angle_diff(t.scn[j]->orientation - dir_s_ji);
    x_sum += std::abs(wrap_angle_diff(a1_t - a1_s)) +
             std::abs(wrap_angle_diff(a2_t - a2_s)) +
             std::abs(wrap_angle_diff(a3_t - a3_s));
  }
  return gaussian(x_sum / 3.0, kOrientationSigma);
}

double scale_ratio_score(const TriangleProjection& t) {
  double x_sum = 0.0;
  for (const auto& [i, j] : kPairs) {
    const double r1_t = t.tpl[i]->scale / t.tpl[j]->scale;
    const double r2_t = t.tpl[j]->scale / t.tpl[i]->scale;
    const double r1_s = t.scn[i]->scale / t.scn[j]->scale;
    const double r2_s = t.scn[j]->scale / t.scn[i]->scale;
    x_sum += std::abs(r1_t - r1_s) + std::abs(r2_t - r2_s);
  }
  return gaussian(x_sum / 3.0, kScaleRatioSigma);
}

double ccs(const ScoreVector& s) {
  if (!s.dv || !s.position || !s.orientation || !s.scale_ratio) {
    throw ValidationError("ccs needs all four score components");
  }
  const double n = std::sqrt(*s.dv * *s.dv + *s.position * *s.position +
                             *s.orientation * *s.orientation +
                             *s.scale_ratio * *s.scale_ratio);
  return gaussian(n - 2.0, kTotalSigma);
}

double rcs(const ScoreVector& s, RcsMu mu) {
  if (!s.dv || !s.scale_ratio) {
    throw ValidationError("rcs needs the dv and scale_ratio components");
  }
  const double n = std::sqrt(*s.dv * *s.dv + *s.scale_ratio * *s.scale_ratio);
  const double center = (mu == RcsMu::kCorrected) ? std::sqrt(2.0) : 2.0;
  return gaussian(n - center, kTotalSigma);
}

ScoreVector score_components(const TriangleProjection& t) {
  ScoreVector s;
  s.dv = dv_score(t);
  s.position = position_score(t);
  s.orientation = orientation_score(t);
  s.scale_ratio = scale_ratio_score(t);
  return s;
}

}  // namespace trigrow
