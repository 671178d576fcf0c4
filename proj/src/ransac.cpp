#include "trigrow/ransac.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "trigrow/errors.hpp"
#include "trigrow/matching.hpp"

namespace trigrow {

void RansacConfig::validate() const {
  if (iterations < 1) throw ValidationError("ransac iterations must be >= 1");
  if (inlier_threshold <= 0.0) {
    throw ValidationError("ransac inlier threshold must be > 0");
  }
  if (min_inliers < 4) throw ValidationError("ransac min_inliers must be >= 4");
}

namespace {

struct Normalization {
  // x' = (x - cx) * s, y' = (y - cy) * s
  Vec2 center;
  double scale = 1.0;

  Vec2 apply(const Vec2& p) const { return (p - center) * scale; }
};

Normalization normalize(const std::vector<Vec2>& pts) {
  Vec2 c;
  for (const Vec2& p : pts) c = c + p;
  c = c * (1.0 / static_cast<double>(pts.size()));
  double mean_dist = 0.0;
  for (const Vec2& p : pts) mean_dist += (p - c).norm();
  mean_dist /= static_cast<double>(pts.size());
  const double s = mean_dist > 0.0 ? std::sqrt(2.0) / mean_dist : 1.0;
  return {c, s};
}

}  // namespace

Homography homography_dlt(const std::vector<std::pair<Vec2, Vec2>>& pairs) {
  if (pairs.size() < 4) throw ValidationError("homography needs >= 4 point pairs");

  std::vector<Vec2> src, dst;
  src.reserve(pairs.size());
  dst.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    src.push_back(a);
    dst.push_back(b);
  }
  const Normalization ns = normalize(src);
  const Normalization nd = normalize(dst);

  const auto n = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec2 p = ns.apply(src[static_cast<std::size_t>(i)]);
    const Vec2 q = nd.apply(dst[static_cast<std::size_t>(i)]);
    a.row(2 * i) << -p.x, -p.y, -1, 0, 0, 0, q.x * p.x, q.x * p.y, q.x;
    a.row(2 * i + 1) << 0, 0, 0, -p.x, -p.y, -1, q.y * p.x, q.y * p.y, q.y;
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv(7) <= 1e-12 * sv(0)) {
    throw GeometryError("homography_dlt: degenerate point configuration");
  }
  const Eigen::VectorXd h = svd.matrixV().col(8);

  // Denormalize: H = T_dst^{-1} * H_hat * T_src.
  Eigen::Matrix3d hh;
  hh << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  Eigen::Matrix3d ts, td_inv;
  ts << ns.scale, 0, -ns.scale * ns.center.x, 0, ns.scale, -ns.scale * ns.center.y,
      0, 0, 1;
  td_inv << 1.0 / nd.scale, 0, nd.center.x, 0, 1.0 / nd.scale, nd.center.y, 0, 0, 1;
  Eigen::Matrix3d full = td_inv * hh * ts;

  if (std::abs(full(2, 2)) > 1e-12) {
    full /= full(2, 2);
  } else {
    full /= full.norm();
  }

  Homography out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out.h[static_cast<std::size_t>(r * 3 + c)] = full(r, c);
  }
  return out;
}

namespace {

double reprojection_error(const Homography& h, const Vec2& t, const Vec2& s) {
  const double w = h.h[6] * t.x + h.h[7] * t.y + h.h[8];
  if (std::abs(w) < 1e-15) return std::numeric_limits<double>::infinity();
  const double x = (h.h[0] * t.x + h.h[1] * t.y + h.h[2]) / w;
  const double y = (h.h[3] * t.x + h.h[4] * t.y + h.h[5]) / w;
  return std::hypot(x - s.x, y - s.y);
}

std::vector<Match> inliers_of(const Homography& h, const std::vector<Match>& matches,
                              const std::vector<Vec2>& tpos,
                              const std::vector<Vec2>& spos, double threshold) {
  std::vector<Match> in;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    if (reprojection_error(h, tpos[i], spos[i]) < threshold) in.push_back(matches[i]);
  }
  return in;
}

bool any_three_collinear(const std::array<Vec2, 4>& p) {
  for (int skip = 0; skip < 4; ++skip) {
    std::array<Vec2, 3> q;
    int k = 0;
    for (int i = 0; i < 4; ++i) {
      if (i != skip) q[static_cast<std::size_t>(k++)] = p[static_cast<std::size_t>(i)];
    }
    if (std::abs(orient2d(q[0], q[1], q[2])) <= kGeomEps) return true;
  }
  return false;
}

}  // namespace

std::optional<RansacResult> ransac_homography(const std::vector<Match>& matches,
                                              const KeyPointSet& templ,
                                              const KeyPointSet& scene,
                                              const RansacConfig& cfg) {
  cfg.validate();
  const std::size_t n = matches.size();
  if (n < 4) return std::nullopt;

  std::vector<Vec2> tpos(n), spos(n);
  for (std::size_t i = 0; i < n; ++i) {
    tpos[i] = templ.at(matches[i].template_id).pos;
    spos[i] = scene.at(matches[i].scene_id).pos;
  }

  std::mt19937 rng(cfg.seed);
  std::size_t best_count = 0;
  Homography best_h;

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    std::array<std::size_t, 4> idx{};
    for (int k = 0; k < 4;) {
      const std::size_t cand = rng() % n;
      bool dup = false;
      for (int j = 0; j < k; ++j) dup = dup || idx[static_cast<std::size_t>(j)] == cand;
      if (!dup) idx[static_cast<std::size_t>(k++)] = cand;
    }
    const std::array<Vec2, 4> sample_t{tpos[idx[0]], tpos[idx[1]], tpos[idx[2]],
                                       tpos[idx[3]]};
    if (any_three_collinear(sample_t)) continue;

    Homography h;
    try {
      h = homography_dlt({{tpos[idx[0]], spos[idx[0]]},
                          {tpos[idx[1]], spos[idx[1]]},
                          {tpos[idx[2]], spos[idx[2]]},
                          {tpos[idx[3]], spos[idx[3]]}});
    } catch (const GeometryError&) {
      continue;
    }

    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (reprojection_error(h, tpos[i], spos[i]) < cfg.inlier_threshold) ++count;
    }
    if (count > best_count) {
      best_count = count;
      best_h = h;
    }
  }

  if (best_count < cfg.min_inliers) return std::nullopt;

  std::vector<Match> consensus =
      inliers_of(best_h, matches, tpos, spos, cfg.inlier_threshold);
  Homography refit = best_h;
  try {
    std::vector<std::pair<Vec2, Vec2>> pairs;
    pairs.reserve(consensus.size());
    for (const Match& m : consensus) {
      pairs.emplace_back(templ.at(m.template_id).pos, scene.at(m.scene_id).pos);
    }
    refit = homography_dlt(pairs);
  } catch (const GeometryError&) {
    // keep the sample model when the consensus set is itself degenerate
  }
  std::vector<Match> final_inliers =
      inliers_of(refit, matches, tpos, spos, cfg.inlier_threshold);
  if (final_inliers.size() < cfg.min_inliers) {
    refit = best_h;
    final_inliers = consensus;
  }
  if (final_inliers.size() < cfg.min_inliers) return std::nullopt;
  return RansacResult{refit, std::move(final_inliers)};
}

std::vector<Detection> baseline_detect(const KeyPointSet& templ,
                                       const KeyPointSet& scene,
                                       const RansacConfig& cfg,
                                       double ratio_threshold,
                                       const Raster* scene_image) {
  cfg.validate();
  if (templ.empty() || scene.empty()) return {};

  std::vector<Match> remaining = match_sets(templ, scene, ratio_threshold);

  double x0 = templ.points().front().pos.x, x1 = x0;
  double y0 = templ.points().front().pos.y, y1 = y0;
  for (const KeyPoint& kp : templ.points()) {
    x0 = std::min(x0, kp.pos.x);
    x1 = std::max(x1, kp.pos.x);
    y0 = std::min(y0, kp.pos.y);
    y1 = std::max(y1, kp.pos.y);
  }
  const Polygon template_rect{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};

  std::vector<Detection> detections;
  while (remaining.size() >= 4) {
    const std::optional<RansacResult> fit =
        ransac_homography(remaining, templ, scene, cfg);
    if (!fit) break;

    // Inlier sets are not necessarily injective on template ids (two scene
    // points can both sit on the model); the seed keeps the first of each.
    Seed seed({}, "h" + std::to_string(detections.size() + 1));
    for (const Match& m : fit->inliers) {
      if (!seed.contains_template(m.template_id) && !seed.contains_scene(m.scene_id)) {
        seed.add(m);
      }
    }
    Detection det;
    det.seed = std::move(seed);
    det.template_hull = template_rect;
    Polygon projected;
    projected.reserve(4);
    for (const Vec2& corner : template_rect) {
      projected.push_back(fit->homography.apply(corner));
    }
    if (scene_image != nullptr) {
      projected = clip_polygon_to_rect(projected, 0.0, 0.0,
                                       scene_image->width() - 1.0,
                                       scene_image->height() - 1.0);
    }
    det.scene_hull = std::move(projected);
    detections.push_back(std::move(det));

    std::vector<Match> next;
    next.reserve(remaining.size());
    for (const Match& m : remaining) {
      bool used = false;
      for (const Match& inl : fit->inliers) used = used || inl == m;
      if (!used) next.push_back(m);
    }
    remaining = std::move(next);
  }
  return detections;
}

}  // namespace trigrow
