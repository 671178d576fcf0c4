#include "trigrow/filtering.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "trigrow/errors.hpp"
#include "trigrow/geometry.hpp"
#include "trigrow/tps.hpp"

namespace trigrow {

namespace {

// Control pairs for the seed's rectifying spline, template -> scene (the
// warper maps output template coordinates back into the scene image).
// Duplicate template positions would make the spline singular; first wins.
void control_points(const Seed& seed, const KeyPointSet& templ,
                    const KeyPointSet& scene, std::vector<Vec2>* src,
                    std::vector<Vec2>* dst) {
  std::map<std::pair<double, double>, bool> used;
  for (const Match& m : seed.matches()) {
    const Vec2& t = templ.at(m.template_id).pos;
    if (!used.emplace(std::make_pair(t.x, t.y), true).second) continue;
    src->push_back(t);
    dst->push_back(scene.at(m.scene_id).pos);
  }
}

double seed_j(const Detection& det, const KeyPointSet& templ,
              const KeyPointSet& scene, const Raster& template_image,
              const Raster& scene_image, double lambda) {
  std::vector<Vec2> src, dst;
  control_points(det.seed, templ, scene, &src, &dst);
  ThinPlateSpline tps;
  try {
    tps = tps_fit(src, dst, lambda);
  } catch (const Error&) {
    return 255.0;  // unrectifiable seed scores as the worst difference
  }
  const Raster warped =
      tps_warp(scene_image, tps, template_image.width(), template_image.height());
  const Raster matched = histogram_match(warped, template_image);
  return photometric_difference(template_image, matched, det.template_hull).second;
}

}  // namespace

std::vector<Detection> photometric_filtering(const std::vector<Seed>& seeds,
                                             const KeyPointSet& templ,
                                             const KeyPointSet& scene,
                                             const Raster* template_image,
                                             const Raster* scene_image,
                                             double tps_lambda) {
  const bool image_mode = template_image != nullptr && scene_image != nullptr;
  if ((template_image == nullptr) != (scene_image == nullptr)) {
    throw ValidationError("photometric filtering needs both images or neither");
  }

  std::vector<Detection> dets;
  for (const Seed& s : seeds) {
    Detection d;
    d.seed = s;
    std::vector<Vec2> tpts, spts;
    for (const Match& m : s.matches()) {
      tpts.push_back(templ.at(m.template_id).pos);
      spts.push_back(scene.at(m.scene_id).pos);
    }
    try {
      d.template_hull = convex_hull(tpts);
      d.scene_hull = convex_hull(spts);
    } catch (const GeometryError&) {
      continue;  // degenerate hull: the seed cannot delimit a region
    }
    if (image_mode) {
      d.score_j = seed_j(d, templ, scene, *template_image, *scene_image, tps_lambda);
    }
    dets.push_back(std::move(d));
  }

  // Seeds whose scene hulls overlap compete for the same object occurrence;
  // candidates are visited strongest first (lowest difference median when
  // images are supplied, otherwise most matches; ties keep the earlier seed)
  // and accepted unless their hull overlaps an already accepted detection.
  // Suppression is pairwise against winners only: a weak seed whose hull
  // happens to span two separate strong detections loses to both instead of
  // chaining them into a single group and knocking one of them out.
  const std::size_t n = dets.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (image_mode) return *dets[a].score_j < *dets[b].score_j;
    return dets[a].seed.size() > dets[b].seed.size();
  });

  std::vector<std::size_t> accepted;
  for (const std::size_t i : order) {
    const bool overlaps_winner =
        std::any_of(accepted.begin(), accepted.end(), [&](std::size_t w) {
          return polygons_intersect(dets[w].scene_hull, dets[i].scene_hull);
        });
    if (!overlaps_winner) accepted.push_back(i);
  }
  std::sort(accepted.begin(), accepted.end());

  std::vector<Detection> out;
  out.reserve(accepted.size());
  for (const std::size_t i : accepted) out.push_back(std::move(dets[i]));
  return out;
}

}  // namespace trigrow
