#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "trigrow/errors.hpp"
#include "trigrow/ransac.hpp"
#include "trigrow/synth.hpp"

using namespace trigrow;

namespace {

const Homography kReference{{1.1, 0.02, 5.0, -0.03, 0.95, -7.0, 1e-4, -2e-4, 1.0}};

std::vector<std::pair<Vec2, Vec2>> map_pairs(const std::vector<Vec2>& pts,
                                             const Homography& h) {
  std::vector<std::pair<Vec2, Vec2>> pairs;
  for (const Vec2& p : pts) pairs.emplace_back(p, h.apply(p));
  return pairs;
}

// Grid template whose keypoints carry well-separated random descriptors.
KeyPointSet grid_template() { return make_grid_template(6, 6, 20.0, 31); }

// Scene keypoints copying the template through a transform; descriptors are
// nudged so the ratio test survives multiple copies of a template point.
void add_instance(KeyPointSet& scene, const KeyPointSet& templ,
                  std::int64_t id_offset, const Homography& h,
                  double descriptor_nudge) {
  for (const KeyPoint& kp : templ.points()) {
    KeyPoint copy = kp;
    copy.id = id_offset + kp.id;
    copy.pos = h.apply(kp.pos);
    copy.descriptor[0] += descriptor_nudge;
    scene.add(copy);
  }
}

}  // namespace

TEST_CASE("dlt reproduces an exact homography from 4 points") {
  const std::vector<Vec2> corners{{0, 0}, {100, 0}, {100, 100}, {0, 100}};
  const Homography h = homography_dlt(map_pairs(corners, kReference));
  for (const Vec2& p : std::vector<Vec2>{{0, 0}, {50, 50}, {83, 12}, {100, 100}}) {
    const Vec2 expect = kReference.apply(p);
    const Vec2 got = h.apply(p);
    CHECK(std::abs(got.x - expect.x) < 1e-6);
    CHECK(std::abs(got.y - expect.y) < 1e-6);
  }
}

TEST_CASE("dlt fits an overdetermined noiseless system") {
  const std::vector<Vec2> pts{{0, 0},  {100, 0}, {100, 100}, {0, 100},
                              {37, 8}, {55, 91}, {12, 63},   {88, 42}};
  const Homography h = homography_dlt(map_pairs(pts, kReference));
  for (const Vec2& p : pts) {
    const Vec2 expect = kReference.apply(p);
    const Vec2 got = h.apply(p);
    CHECK(std::abs(got.x - expect.x) < 1e-6);
    CHECK(std::abs(got.y - expect.y) < 1e-6);
  }
}

TEST_CASE("dlt rejects degenerate inputs") {
  CHECK_THROWS_AS(homography_dlt({{{0, 0}, {0, 0}},
                                  {{1, 0}, {1, 0}},
                                  {{2, 2}, {2, 2}}}),
                  ValidationError);  // fewer than 4 pairs
  // Three source points collinear: no unique homography.
  CHECK_THROWS_AS(homography_dlt({{{0, 0}, {0, 0}},
                                  {{1, 0}, {1, 0}},
                                  {{2, 0}, {2, 0}},
                                  {{3, 5}, {3, 5}}}),
                  GeometryError);
  // All four pairs identical.
  CHECK_THROWS_AS(homography_dlt({{{1, 1}, {1, 1}},
                                  {{1, 1}, {1, 1}},
                                  {{1, 1}, {1, 1}},
                                  {{1, 1}, {1, 1}}}),
                  GeometryError);
}

TEST_CASE("ransac recovers a planted homography among outliers") {
  const KeyPointSet templ = grid_template();
  KeyPointSet scene("scene");
  add_instance(scene, templ, 1000, kReference, 0.0);

  // Outliers: scene points at shuffled grid positions matched at random.
  SynthRng rng(5);
  std::vector<Match> matches;
  for (const KeyPoint& kp : templ.points()) {
    matches.push_back({kp.id, 1000 + kp.id, 0.0});
  }
  const std::size_t planted = matches.size();
  for (int i = 0; i < 36; ++i) {
    KeyPoint junk;
    junk.id = 5000 + i;
    junk.pos = {rng.uniform(0.0, 400.0), rng.uniform(0.0, 400.0)};
    junk.scale = 1.0;
    scene.add(junk);
    matches.push_back({rng.uniform_int(36), junk.id, 1.0});
  }

  RansacConfig cfg;
  const auto result = ransac_homography(matches, templ, scene, cfg);
  REQUIRE(result.has_value());

  std::size_t recovered = 0;
  for (const Match& m : result->inliers) {
    if (m.scene_id >= 1000 && m.scene_id < 5000) ++recovered;
  }
  CHECK(recovered >= (planted * 95) / 100);

  // The refit model reprojects the template within the inlier threshold.
  for (const KeyPoint& kp : templ.points()) {
    const Vec2 expect = kReference.apply(kp.pos);
    const Vec2 got = result->homography.apply(kp.pos);
    CHECK((got - expect).norm() < cfg.inlier_threshold);
  }
}

TEST_CASE("ransac is deterministic for a fixed seed") {
  const KeyPointSet templ = grid_template();
  KeyPointSet scene("scene");
  add_instance(scene, templ, 1000, kReference, 0.0);
  std::vector<Match> matches;
  for (const KeyPoint& kp : templ.points()) {
    matches.push_back({kp.id, 1000 + kp.id, 0.0});
  }

  RansacConfig cfg;
  const auto a = ransac_homography(matches, templ, scene, cfg);
  const auto b = ransac_homography(matches, templ, scene, cfg);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  REQUIRE(a->inliers.size() == b->inliers.size());
  for (std::size_t i = 0; i < a->inliers.size(); ++i) {
    CHECK(a->inliers[i].scene_id == b->inliers[i].scene_id);
  }
  for (int k = 0; k < 9; ++k) {
    CHECK(a->homography.h[static_cast<std::size_t>(k)] ==
          b->homography.h[static_cast<std::size_t>(k)]);
  }
}

TEST_CASE("ransac gives up below min_inliers") {
  const KeyPointSet templ = grid_template();
  KeyPointSet scene("scene");
  // Five consistent matches only; the floor demands ten.
  SynthRng rng(9);
  std::vector<Match> matches;
  for (std::int64_t i = 0; i < 5; ++i) {
    KeyPoint copy = templ.points()[static_cast<std::size_t>(i)];
    copy.id = 1000 + copy.id;
    scene.add(copy);
    matches.push_back({i, 1000 + i, 0.0});
  }
  for (int i = 0; i < 30; ++i) {
    KeyPoint junk;
    junk.id = 5000 + i;
    junk.pos = {rng.uniform(0.0, 2000.0), rng.uniform(0.0, 2000.0)};
    junk.scale = 1.0;
    scene.add(junk);
    matches.push_back({rng.uniform_int(36), junk.id, 1.0});
  }

  RansacConfig cfg;
  CHECK(!ransac_homography(matches, templ, scene, cfg).has_value());
}

TEST_CASE("ransac config validation") {
  RansacConfig cfg;
  cfg.iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = RansacConfig{};
  cfg.inlier_threshold = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = RansacConfig{};
  cfg.min_inliers = 3;  // below the 4-point sample size
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("baseline detects one exact instance") {
  const KeyPointSet templ = grid_template();
  KeyPointSet scene("scene");
  add_instance(scene, templ, 1000, Homography{}, 0.0);

  const std::vector<Detection> dets = baseline_detect(templ, scene, RansacConfig{});
  REQUIRE(dets.size() == 1);
  CHECK(dets[0].seed.label() == "h1");
  CHECK(dets[0].seed.size() == templ.size());
  CHECK(!dets[0].score_j.has_value());
  // Identity homography: the scene hull is the template bounding rectangle.
  REQUIRE(dets[0].scene_hull.size() == 4);
  CHECK(polygon_area(dets[0].scene_hull) == doctest::Approx(100.0 * 100.0));
}

TEST_CASE("baseline peels instances greedily") {
  const KeyPointSet templ = grid_template();
  KeyPointSet scene("scene");
  Homography shift;  // identity plus a long translation
  shift.h[2] = 400.0;
  add_instance(scene, templ, 1000, Homography{}, 0.0);
  add_instance(scene, templ, 2000, shift, 0.5);

  const std::vector<Detection> dets = baseline_detect(templ, scene, RansacConfig{});
  REQUIRE(dets.size() == 2);
  CHECK(dets[0].seed.label() == "h1");
  CHECK(dets[1].seed.label() == "h2");

  // Each detection's matches stay within one instance.
  for (const Detection& det : dets) {
    std::set<std::int64_t> buckets;
    for (const Match& m : det.seed.matches()) buckets.insert(m.scene_id / 1000);
    CHECK(buckets.size() == 1);
  }
}
