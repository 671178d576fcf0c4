#include "trigrow/raster.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "trigrow/errors.hpp"
#include "trigrow/geometry.hpp"

namespace trigrow {

Raster::Raster(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  if (width <= 0 || height <= 0) {
    throw ValidationError("raster dimensions must be positive");
  }
  if (channels != 1 && channels != 3) {
    throw ValidationError("raster must have 1 or 3 channels");
  }
  samples_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

namespace {

// Next whitespace-separated token, skipping '#' comment lines.
std::string next_token(std::istream& in, const std::string& path) {
  std::string tok;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  if (tok.empty()) throw ParseError(path, 0, "unexpected end of file");
  return tok;
}

int next_int(std::istream& in, const std::string& path) {
  const std::string tok = next_token(in, path);
  try {
    return std::stoi(tok);
  } catch (const std::exception&) {
    throw ParseError(path, 0, "expected integer, got '" + tok + "'");
  }
}

}  // namespace

Raster load_raster(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open raster file " + path);

  const std::string magic = next_token(in, path);
  int channels = 0;
  bool binary = false;
  if (magic == "P2") {
    channels = 1;
  } else if (magic == "P3") {
    channels = 3;
  } else if (magic == "P5") {
    channels = 1;
    binary = true;
  } else if (magic == "P6") {
    channels = 3;
    binary = true;
  } else {
    throw ParseError(path, 0, "unsupported magic '" + magic + "'");
  }

  const int w = next_int(in, path);
  const int h = next_int(in, path);
  const int maxval = next_int(in, path);
  if (w <= 0 || h <= 0) throw ParseError(path, 0, "non-positive dimensions");
  if (maxval < 1 || maxval > 255) {
    throw ParseError(path, 0, "maxval must be in [1, 255]");
  }

  Raster img(w, h, channels);
  const std::size_t count = img.samples().size();
  if (binary) {
    // The maxval is followed by exactly one whitespace byte.
    in.read(reinterpret_cast<char*>(img.samples().data()),
            static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count) {
      throw ParseError(path, 0, "truncated pixel data");
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const int v = next_int(in, path);
      if (v < 0 || v > maxval) throw ParseError(path, 0, "sample out of range");
      img.samples()[i] = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

void save_raster(const Raster& img, const std::string& path) {
  if (img.width() <= 0) throw ValidationError("cannot save an empty raster");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write raster file " + path);
  out << (img.channels() == 1 ? "P5" : "P6") << "\n"
      << img.width() << " " << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.samples().data()),
            static_cast<std::streamsize>(img.samples().size()));
  if (!out) throw IoError("failed writing raster file " + path);
}

Raster histogram_match(const Raster& src, const Raster& ref) {
  if (src.channels() != ref.channels()) {
    throw ValidationError("histogram_match requires equal channel counts");
  }
  const int ch = src.channels();
  Raster out(src.width(), src.height(), ch);

  const std::size_t src_n = static_cast<std::size_t>(src.width()) * src.height();
  const std::size_t ref_n = static_cast<std::size_t>(ref.width()) * ref.height();

  for (int c = 0; c < ch; ++c) {
    std::array<std::size_t, 256> src_hist{}, ref_hist{};
    for (std::size_t i = 0; i < src_n; ++i) ++src_hist[src.samples()[i * ch + c]];
    for (std::size_t i = 0; i < ref_n; ++i) ++ref_hist[ref.samples()[i * ch + c]];

    std::array<double, 256> src_cdf{}, ref_cdf{};
    double s = 0.0, r = 0.0;
    for (int v = 0; v < 256; ++v) {
      s += static_cast<double>(src_hist[v]) / static_cast<double>(src_n);
      r += static_cast<double>(ref_hist[v]) / static_cast<double>(ref_n);
      src_cdf[v] = s;
      ref_cdf[v] = r;
    }

    // Monotone LUT: smallest ref level whose CDF reaches the src level's.
    std::array<std::uint8_t, 256> lut{};
    int u = 0;
    for (int v = 0; v < 256; ++v) {
      while (u < 255 && ref_cdf[u] < src_cdf[v] - 1e-12) ++u;
      lut[v] = static_cast<std::uint8_t>(u);
    }

    for (std::size_t i = 0; i < src_n; ++i) {
      out.samples()[i * ch + c] = lut[src.samples()[i * ch + c]];
    }
  }
  return out;
}

std::pair<Raster, double> photometric_difference(const Raster& a, const Raster& b,
                                                 const Polygon& mask) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw ValidationError("photometric_difference requires equal dimensions");
  }
  if (a.channels() != b.channels()) {
    throw ValidationError("photometric_difference requires equal channel counts");
  }
  const int ch = a.channels();
  Raster diff(a.width(), a.height(), 1);
  std::vector<std::uint8_t> masked;

  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      double sq = 0.0;
      for (int c = 0; c < ch; ++c) {
        const double d = static_cast<double>(a.at(x, y, c)) - b.at(x, y, c);
        sq += d * d;
      }
      double norm = std::sqrt(sq);
      if (norm > 255.0) norm = 255.0;
      // Half-down rounding keeps the level integral like a histogram bin.
      const auto level = static_cast<std::uint8_t>(std::ceil(norm - 0.5));
      diff.set(x, y, 0, level);
      if (!mask.empty() &&
          point_in_polygon(mask, Vec2{static_cast<double>(x), static_cast<double>(y)})) {
        masked.push_back(level);
      }
    }
  }

  double j = 255.0;
  if (!masked.empty()) {
    const std::size_t mid = (masked.size() - 1) / 2;
    std::nth_element(masked.begin(),
                     masked.begin() + static_cast<std::ptrdiff_t>(mid), masked.end());
    j = static_cast<double>(masked[mid]);
  }
  return {std::move(diff), j};
}

}  // namespace trigrow
