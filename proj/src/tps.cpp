#include "trigrow/tps.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "trigrow/errors.hpp"
#include "trigrow/geometry.hpp"

namespace trigrow {

namespace {

double kernel(double r2) {
  // U(r) = r^2 log r^2, continuous at r = 0.
  return r2 > 0.0 ? r2 * std::log(r2) : 0.0;
}

}  // namespace

Vec2 ThinPlateSpline::apply(const Vec2& p) const {
  double x = affine_[0] + affine_[1] * p.x + affine_[2] * p.y;
  double y = affine_[3] + affine_[4] * p.x + affine_[5] * p.y;
  for (std::size_t i = 0; i < src_.size(); ++i) {
    const double u = kernel((p - src_[i]).squared_norm());
    x += weights_[i].x * u;
    y += weights_[i].y * u;
  }
  return {x, y};
}

ThinPlateSpline tps_fit(const std::vector<Vec2>& src, const std::vector<Vec2>& dst,
                        double lambda) {
  if (src.size() != dst.size()) {
    throw ValidationError("tps_fit requires equal-length control lists");
  }
  if (src.size() < 3) throw ValidationError("tps_fit requires >= 3 control points");
  if (lambda < 0.0) throw ValidationError("tps_fit lambda must be >= 0");

  const auto n = static_cast<Eigen::Index>(src.size());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n + 3, n + 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double u = kernel((src[i] - src[j]).squared_norm());
      l(i, j) = u;
      l(j, i) = u;
    }
    l(i, i) = lambda;
    l(i, n) = 1.0;
    l(i, n + 1) = src[i].x;
    l(i, n + 2) = src[i].y;
    l(n, i) = 1.0;
    l(n + 1, i) = src[i].x;
    l(n + 2, i) = src[i].y;
  }

  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + 3, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    rhs(i, 0) = dst[i].x;
    rhs(i, 1) = dst[i].y;
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(l);
  if (!lu.isInvertible()) {
    throw GeometryError("tps_fit: singular system (collinear or duplicate controls)");
  }
  const Eigen::MatrixXd sol = lu.solve(rhs);

  ThinPlateSpline tps;
  tps.src_ = src;
  tps.dst_ = dst;
  tps.lambda_ = lambda;
  tps.weights_.resize(src.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    tps.weights_[static_cast<std::size_t>(i)] = {sol(i, 0), sol(i, 1)};
  }
  tps.affine_ = {sol(n, 0), sol(n + 1, 0), sol(n + 2, 0),
                 sol(n, 1), sol(n + 1, 1), sol(n + 2, 1)};
  return tps;
}

Raster tps_warp(const Raster& image, const ThinPlateSpline& tps, int out_width,
                int out_height) {
  Raster out(out_width, out_height, image.channels());
  const int w = image.width();
  const int h = image.height();

  for (int y = 0; y < out_height; ++y) {
    for (int x = 0; x < out_width; ++x) {
      Vec2 s = tps.apply({static_cast<double>(x), static_cast<double>(y)});
      // Half a pixel of slack at each border: a source position like -1e-9,
      // common when the fitted map is numerically-almost the identity, is an
      // edge sample rather than a miss. Beyond the slack the pixel stays black.
      if (s.x < -0.5 || s.y < -0.5 || s.x > w - 0.5 || s.y > h - 0.5) continue;
      s.x = std::clamp(s.x, 0.0, static_cast<double>(w - 1));
      s.y = std::clamp(s.y, 0.0, static_cast<double>(h - 1));
      const int x0 = static_cast<int>(s.x);
      const int y0 = static_cast<int>(s.y);
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const double fx = s.x - x0;
      const double fy = s.y - y0;
      for (int c = 0; c < image.channels(); ++c) {
        const double v00 = image.at(x0, y0, c);
        const double v10 = image.at(x1, y0, c);
        const double v01 = image.at(x0, y1, c);
        const double v11 = image.at(x1, y1, c);
        const double v = (1 - fy) * ((1 - fx) * v00 + fx * v10) +
                         fy * ((1 - fx) * v01 + fx * v11);
        out.set(x, y, c, static_cast<std::uint8_t>(std::lround(v)));
      }
    }
  }
  return out;
}

}  // namespace trigrow
