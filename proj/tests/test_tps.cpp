#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "trigrow/errors.hpp"
#include "trigrow/tps.hpp"

using namespace trigrow;

namespace {

// Deterministic scattered control points, never collinear.
std::pair<std::vector<Vec2>, std::vector<Vec2>> bent_controls(std::size_t n,
                                                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  std::uniform_real_distribution<double> bend(-8.0, 8.0);
  std::vector<Vec2> src, dst;
  src.push_back({0, 0});
  src.push_back({100, 0});
  src.push_back({0, 100});
  for (std::size_t i = 3; i < n; ++i) src.push_back({coord(rng), coord(rng)});
  for (const Vec2& p : src) dst.push_back({p.x + bend(rng), p.y + bend(rng)});
  return {src, dst};
}

Raster gradient_image(int w, int h) {
  Raster img(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.set(x, y, 0, static_cast<std::uint8_t>((x * 7 + y * 3) % 256));
    }
  }
  return img;
}

}  // namespace

TEST_CASE("interpolates every control pair at lambda 0") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const auto [src, dst] = bent_controls(12, seed);
    const ThinPlateSpline tps = tps_fit(src, dst);
    for (std::size_t i = 0; i < src.size(); ++i) {
      const Vec2 got = tps.apply(src[i]);
      CHECK(std::abs(got.x - dst[i].x) < 1e-6);
      CHECK(std::abs(got.y - dst[i].y) < 1e-6);
    }
    CHECK(tps.lambda() == 0.0);
    CHECK(tps.sources().size() == 12);
    CHECK(tps.targets().size() == 12);
  }
}

TEST_CASE("kernel weights satisfy the side conditions") {
  const auto [src, dst] = bent_controls(10, 7);
  const ThinPlateSpline tps = tps_fit(src, dst);
  Vec2 sum{0, 0}, sum_x{0, 0}, sum_y{0, 0};
  for (std::size_t i = 0; i < src.size(); ++i) {
    sum = sum + tps.weights()[i];
    sum_x = sum_x + tps.weights()[i] * src[i].x;
    sum_y = sum_y + tps.weights()[i] * src[i].y;
  }
  for (double v : {sum.x, sum.y, sum_x.x, sum_x.y, sum_y.x, sum_y.y}) {
    CHECK(std::abs(v) < 1e-8);
  }
}

TEST_CASE("an affine target field produces zero kernel weights") {
  std::vector<Vec2> src{{0, 0}, {80, 5}, {10, 90}, {70, 60}, {35, 20}};
  std::vector<Vec2> dst;
  // x' = 3 + 1.2x - 0.3y, y' = -2 + 0.4x + 0.9y
  for (const Vec2& p : src) {
    dst.push_back({3.0 + 1.2 * p.x - 0.3 * p.y, -2.0 + 0.4 * p.x + 0.9 * p.y});
  }
  const ThinPlateSpline tps = tps_fit(src, dst);
  for (const Vec2& w : tps.weights()) {
    CHECK(std::abs(w.x) < 1e-8);
    CHECK(std::abs(w.y) < 1e-8);
  }
  const auto& a = tps.affine();
  CHECK(a[0] == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(a[1] == doctest::Approx(1.2).epsilon(1e-8));
  CHECK(a[2] == doctest::Approx(-0.3).epsilon(1e-8));
  CHECK(a[3] == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(a[4] == doctest::Approx(0.4).epsilon(1e-8));
  CHECK(a[5] == doctest::Approx(0.9).epsilon(1e-8));

  // And the map reproduces the affine away from the controls.
  const Vec2 probe{55.5, 42.25};
  const Vec2 got = tps.apply(probe);
  CHECK(got.x == doctest::Approx(3.0 + 1.2 * probe.x - 0.3 * probe.y).epsilon(1e-9));
  CHECK(got.y == doctest::Approx(-2.0 + 0.4 * probe.x + 0.9 * probe.y).epsilon(1e-9));
}

TEST_CASE("regularization trades interpolation for smoothness") {
  const auto [src, dst] = bent_controls(10, 11);
  const ThinPlateSpline tight = tps_fit(src, dst, 0.0);
  const ThinPlateSpline loose = tps_fit(src, dst, 1000.0);

  double tight_res = 0.0, loose_res = 0.0, tight_w = 0.0, loose_w = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    tight_res += (tight.apply(src[i]) - dst[i]).norm();
    loose_res += (loose.apply(src[i]) - dst[i]).norm();
    tight_w += tight.weights()[i].norm();
    loose_w += loose.weights()[i].norm();
  }
  CHECK(tight_res < 1e-6);
  CHECK(loose_res > tight_res);   // no longer interpolating
  CHECK(loose_w < tight_w);       // flatter kernel under regularization
  CHECK(loose.lambda() == 1000.0);
}

TEST_CASE("degenerate fits are rejected") {
  const std::vector<Vec2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK_THROWS_AS(tps_fit({{0, 0}, {1, 0}}, {{0, 0}, {1, 0}}), ValidationError);
  CHECK_THROWS_AS(tps_fit(square, {{0, 0}, {1, 0}}), ValidationError);
  CHECK_THROWS_AS(tps_fit({{0, 0}, {1, 1}, {2, 2}}, {{0, 0}, {1, 1}, {2, 2}}),
                  GeometryError);
  CHECK_THROWS_AS(
      tps_fit({{0, 0}, {0, 0}, {1, 1}}, {{0, 0}, {0, 0}, {1, 1}}),
      GeometryError);
}

TEST_CASE("identity warp reproduces the image") {
  const Raster img = gradient_image(40, 30);
  const std::vector<Vec2> anchors{{0, 0}, {39, 0}, {0, 29}, {39, 29}, {20, 15}};
  const ThinPlateSpline tps = tps_fit(anchors, anchors);
  const Raster out = tps_warp(img, tps, 40, 30);
  REQUIRE(out.width() == 40);
  REQUIRE(out.height() == 30);
  int differing = 0;
  for (int y = 0; y < 30; ++y) {
    for (int x = 0; x < 40; ++x) {
      if (out.at(x, y, 0) != img.at(x, y, 0)) ++differing;
    }
  }
  CHECK(differing == 0);
}

TEST_CASE("translation warp shifts and blanks the uncovered band") {
  const Raster img = gradient_image(30, 20);
  // Output pixel (x, y) samples the source at (x + 5, y + 2).
  std::vector<Vec2> src{{0, 0}, {29, 0}, {0, 19}, {29, 19}};
  std::vector<Vec2> dst;
  for (const Vec2& p : src) dst.push_back({p.x + 5.0, p.y + 2.0});
  const ThinPlateSpline tps = tps_fit(src, dst);
  const Raster out = tps_warp(img, tps, 30, 20);

  for (int y = 0; y < 18; ++y) {
    for (int x = 0; x < 25; ++x) {
      CHECK(out.at(x, y, 0) == img.at(x + 5, y + 2, 0));
    }
  }
  // The band that falls outside the source image stays black.
  CHECK(out.at(29, 10, 0) == 0);
  CHECK(out.at(10, 19, 0) == 0);
}

TEST_CASE("fractional sampling is bilinear") {
  Raster img(3, 1, 1);
  img.set(0, 0, 0, 10);
  img.set(1, 0, 0, 20);
  img.set(2, 0, 0, 30);
  // Map x -> x + 0.5 in a 1-pixel-high strip.
  std::vector<Vec2> src{{0, 0}, {2, 0}, {0, 50}, {2, 50}};
  std::vector<Vec2> dst{{0.5, 0}, {2.5, 0}, {0.5, 50}, {2.5, 50}};
  const ThinPlateSpline tps = tps_fit(src, dst);
  const Raster out = tps_warp(img, tps, 3, 1);
  CHECK(out.at(0, 0, 0) == 15);  // halfway between 10 and 20
  CHECK(out.at(1, 0, 0) == 25);
}
