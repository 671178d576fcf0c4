#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <filesystem>

#include "trigrow/errors.hpp"
#include "trigrow/io.hpp"
#include "trigrow/raster.hpp"

using namespace trigrow;

namespace {

namespace fs = std::filesystem;

const fs::path& scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "trigrow_raster_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string scratch(const std::string& name) {
  return (scratch_dir() / name).string();
}

Raster gradient(int w, int h, int ch) {
  Raster img(w, h, ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        img.set(x, y, c, static_cast<std::uint8_t>((x * 7 + y * 3 + c * 11) % 256));
      }
    }
  }
  return img;
}

bool same_pixels(const Raster& a, const Raster& b) {
  return a.width() == b.width() && a.height() == b.height() &&
         a.channels() == b.channels() && a.samples() == b.samples();
}

}  // namespace

TEST_CASE("raster construction") {
  const Raster img(4, 3, 1, 17);
  CHECK(img.width() == 4);
  CHECK(img.height() == 3);
  CHECK(img.channels() == 1);
  CHECK(img.samples().size() == 12);
  CHECK(img.at(2, 1, 0) == 17);
  CHECK(img.in_bounds(3, 2));
  CHECK(!img.in_bounds(4, 0));
  CHECK(!img.in_bounds(-1, 0));

  CHECK_THROWS_AS(Raster(0, 3, 1), ValidationError);
  CHECK_THROWS_AS(Raster(3, -1, 1), ValidationError);
  CHECK_THROWS_AS(Raster(3, 3, 2), ValidationError);
}

TEST_CASE("binary pgm round-trips") {
  const Raster img = gradient(13, 7, 1);
  const std::string path = scratch("gray.pgm");
  save_raster(img, path);
  CHECK(same_pixels(load_raster(path), img));
}

TEST_CASE("binary ppm round-trips") {
  const Raster img = gradient(9, 11, 3);
  const std::string path = scratch("color.ppm");
  save_raster(img, path);
  CHECK(same_pixels(load_raster(path), img));
}

TEST_CASE("ascii pgm and ppm parse") {
  const std::string gray = scratch("ascii.pgm");
  write_text_file(gray, "P2\n# comment\n3 2\n255\n0 10 20\n30 40 50\n");
  const Raster g = load_raster(gray);
  REQUIRE(g.width() == 3);
  REQUIRE(g.height() == 2);
  REQUIRE(g.channels() == 1);
  CHECK(g.at(0, 0, 0) == 0);
  CHECK(g.at(2, 0, 0) == 20);
  CHECK(g.at(1, 1, 0) == 40);

  const std::string color = scratch("ascii.ppm");
  write_text_file(color, "P3\n2 1\n255\n1 2 3  4 5 6\n");
  const Raster c = load_raster(color);
  REQUIRE(c.channels() == 3);
  CHECK(c.at(0, 0, 2) == 3);
  CHECK(c.at(1, 0, 0) == 4);
}

TEST_CASE("malformed image files are rejected") {
  const std::string path = scratch("bad.pgm");
  write_text_file(path, "P9\n2 2\n255\n0 0 0 0\n");
  CHECK_THROWS_AS(load_raster(path), ParseError);

  write_text_file(path, "P2\n2 2\n70000\n0 0 0 0\n");
  CHECK_THROWS_AS(load_raster(path), ParseError);  // maxval above 255

  write_text_file(path, "P2\n2 2\n255\n0 0\n");
  CHECK_THROWS_AS(load_raster(path), ParseError);  // truncated samples

  CHECK_THROWS_AS(load_raster(scratch("missing.pgm")), IoError);
}

TEST_CASE("histogram self-match is the identity") {
  const Raster img = gradient(20, 20, 1);
  const Raster out = histogram_match(img, img);
  CHECK(same_pixels(out, img));

  const Raster rgb = gradient(14, 9, 3);
  CHECK(same_pixels(histogram_match(rgb, rgb), rgb));
}

TEST_CASE("histogram match follows the reference distribution") {
  // Source: half 10s, half 200s. Reference: half 60s, half 90s.
  Raster src(4, 2, 1);
  Raster ref(4, 2, 1);
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 2; ++y) {
      src.set(x, y, 0, x < 2 ? 10 : 200);
      ref.set(x, y, 0, x < 2 ? 60 : 90);
    }
  }
  const Raster out = histogram_match(src, ref);
  CHECK(out.at(0, 0, 0) == 60);
  CHECK(out.at(1, 1, 0) == 60);
  CHECK(out.at(2, 0, 0) == 90);
  CHECK(out.at(3, 1, 0) == 90);
}

TEST_CASE("histogram match agrees with a direct cdf oracle") {
  const Raster src = gradient(17, 13, 1);
  Raster ref(10, 10, 1);
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 10; ++x) {
      ref.set(x, y, 0, static_cast<std::uint8_t>((x * x * 3 + y * 31) % 251));
    }
  }
  const Raster out = histogram_match(src, ref);

  // Oracle: per level, the smallest reference level whose CDF reaches the
  // source level's CDF.
  std::array<double, 256> src_cdf{}, ref_cdf{};
  for (const std::uint8_t v : src.samples()) src_cdf[v] += 1.0;
  for (const std::uint8_t v : ref.samples()) ref_cdf[v] += 1.0;
  double s = 0.0, r = 0.0;
  for (int v = 0; v < 256; ++v) {
    s += src_cdf[v] / (17.0 * 13.0);
    r += ref_cdf[v] / 100.0;
    src_cdf[v] = s;
    ref_cdf[v] = r;
  }
  std::array<std::uint8_t, 256> lut{};
  for (int v = 0; v < 256; ++v) {
    int u = 0;
    while (u < 255 && ref_cdf[u] < src_cdf[v] - 1e-12) ++u;
    lut[v] = static_cast<std::uint8_t>(u);
  }
  for (int i = 0; i < 255; ++i) CHECK(lut[i] <= lut[i + 1]);  // monotone

  for (std::size_t i = 0; i < src.samples().size(); ++i) {
    CHECK(out.samples()[i] == lut[src.samples()[i]]);
  }
}

TEST_CASE("histogram match demands matching channel counts") {
  CHECK_THROWS_AS(histogram_match(gradient(4, 4, 1), gradient(4, 4, 3)),
                  ValidationError);
}

TEST_CASE("photometric difference of an image with itself is zero") {
  const Raster img = gradient(16, 12, 3);
  const Polygon mask{{2, 2}, {13, 2}, {13, 9}, {2, 9}};
  const auto [diff, j] = photometric_difference(img, img, mask);
  CHECK(j == 0.0);
  for (const std::uint8_t v : diff.samples()) CHECK(v == 0);
}

TEST_CASE("photometric difference levels are channel norms") {
  Raster a(2, 1, 3);
  Raster b(2, 1, 3);
  // Pixel 0: diff (3, 4, 0) -> norm 5. Pixel 1: (200, 200, 200) -> clamp 255.
  a.set(0, 0, 0, 13);
  b.set(0, 0, 0, 10);
  a.set(0, 0, 1, 4);
  a.set(1, 0, 0, 200);
  a.set(1, 0, 1, 200);
  a.set(1, 0, 2, 200);
  const auto [diff, j] = photometric_difference(a, b, {});
  CHECK(diff.channels() == 1);
  CHECK(diff.at(0, 0, 0) == 5);
  CHECK(diff.at(1, 0, 0) == 255);
  CHECK(j == 255.0);  // empty mask
}

TEST_CASE("integer differences map to their exact level") {
  Raster a(3, 1, 1);
  Raster b(3, 1, 1);
  a.set(0, 0, 0, 30);   // norm 30   -> 30
  a.set(1, 0, 0, 100);  // norm 100  -> 100
  b.set(2, 0, 0, 1);    // norm 1    -> 1
  const auto result = photometric_difference(a, b, {});
  CHECK(result.first.at(0, 0, 0) == 30);
  CHECK(result.first.at(1, 0, 0) == 100);
  CHECK(result.first.at(2, 0, 0) == 1);
}

TEST_CASE("the difference median walks the mask only") {
  Raster a(5, 1, 1);
  Raster b(5, 1, 1);
  // Levels 0, 10, 20, 30, 40 across the row.
  for (int x = 0; x < 5; ++x) a.set(x, 0, 0, static_cast<std::uint8_t>(10 * x));

  // Mask covering pixels x = 1..3 (boundary included): odd count, median 20.
  const Polygon three{{1, -1}, {3, -1}, {3, 1}, {1, 1}};
  CHECK(photometric_difference(a, b, three).second == 20.0);

  // Mask covering x = 2..3: even count, lower median 20.
  const Polygon two{{2, -1}, {3, -1}, {3, 1}, {2, 1}};
  CHECK(photometric_difference(a, b, two).second == 20.0);

  // Mask entirely outside the image: no samples, j = 255.
  const Polygon outside{{50, 50}, {60, 50}, {60, 60}, {50, 60}};
  CHECK(photometric_difference(a, b, outside).second == 255.0);
}

TEST_CASE("photometric difference validates shapes") {
  CHECK_THROWS_AS(photometric_difference(gradient(4, 4, 1), gradient(5, 4, 1), {}),
                  ValidationError);
  CHECK_THROWS_AS(photometric_difference(gradient(4, 4, 1), gradient(4, 4, 3), {}),
                  ValidationError);
}
