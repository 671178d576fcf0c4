#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "trigrow/types.hpp"

namespace trigrow {

// 8-bit image, 1 (gray) or 3 (RGB) interleaved channels, row-major.
class Raster {
 public:
  Raster() = default;
  // Throws ValidationError on non-positive dimensions or channels not in {1,3}.
  Raster(int width, int height, int channels, std::uint8_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }

  std::uint8_t at(int x, int y, int c) const {
    return samples_[static_cast<std::size_t>((y * width_ + x) * channels_ + c)];
  }
  void set(int x, int y, int c, std::uint8_t v) {
    samples_[static_cast<std::size_t>((y * width_ + x) * channels_ + c)] = v;
  }
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  const std::vector<std::uint8_t>& samples() const { return samples_; }
  std::vector<std::uint8_t>& samples() { return samples_; }

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> samples_;
};

// Reads PGM (P2/P5) or PPM (P3/P6), maxval <= 255. Throws IoError when the
// file cannot be opened, ParseError on malformed content.
Raster load_raster(const std::string& path);

// Writes binary PGM (1 channel) or PPM (3 channels).
void save_raster(const Raster& img, const std::string& path);

// Per-channel monotone CDF matching of src's histogram onto ref's.
// Throws ValidationError on channel mismatch.
Raster histogram_match(const Raster& src, const Raster& ref);

// Per-pixel Euclidean norm over channels of |a - b|, clamped to 255 and
// rounded half-down to an 8-bit level. j is the lower median of the norm
// values over pixels whose integer coordinates fall inside the mask
// (boundary included); an empty mask yields j = 255.
// Throws ValidationError on dimension or channel mismatch.
std::pair<Raster, double> photometric_difference(const Raster& a, const Raster& b,
                                                 const Polygon& mask);

}  // namespace trigrow
