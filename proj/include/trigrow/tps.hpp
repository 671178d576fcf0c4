#pragma once

#include <vector>

#include "trigrow/raster.hpp"
#include "trigrow/types.hpp"

namespace trigrow {

// Thin-plate-spline map fitted through control pairs, kernel U(r) = r^2 log r^2.
// With lambda = 0 the map interpolates every control pair; the kernel weights
// satisfy the side conditions sum(w) = 0, sum(w*x) = 0, sum(w*y) = 0.
class ThinPlateSpline {
 public:
  Vec2 apply(const Vec2& p) const;

  const std::vector<Vec2>& sources() const { return src_; }
  const std::vector<Vec2>& targets() const { return dst_; }
  // Row-major per output dimension: (a0 + a1*x + a2*y) for x', then for y'.
  const std::array<double, 6>& affine() const { return affine_; }
  // Kernel weights, one (wx, wy) per control point.
  const std::vector<Vec2>& weights() const { return weights_; }
  double lambda() const { return lambda_; }

 private:
  friend ThinPlateSpline tps_fit(const std::vector<Vec2>&, const std::vector<Vec2>&,
                                 double);
  std::vector<Vec2> src_, dst_;
  std::array<double, 6> affine_{0, 1, 0, 0, 0, 1};
  std::vector<Vec2> weights_;
  double lambda_ = 0.0;
};

// Fits the spline sending src[i] -> dst[i]; lambda >= 0 is added on the
// kernel-matrix diagonal. Throws ValidationError on length mismatch or
// fewer than 3 points, GeometryError when the system is singular
// (collinear or duplicated control points at lambda = 0).
ThinPlateSpline tps_fit(const std::vector<Vec2>& src, const std::vector<Vec2>& dst,
                        double lambda = 0.0);

// Inverse-mapping warp: output pixel (x, y) samples the source image at
// tps(x, y) with bilinear interpolation; out-of-bounds pixels are black.
Raster tps_warp(const Raster& image, const ThinPlateSpline& tps, int out_width,
                int out_height);

}  // namespace trigrow
