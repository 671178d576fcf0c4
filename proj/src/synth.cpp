#include "trigrow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "trigrow/errors.hpp"
#include "trigrow/geometry.hpp"
#include "trigrow/tps.hpp"

namespace trigrow {

void SynthSpec::validate() const {
  if (instances < 0) throw ValidationError("instances must be >= 0");
  if (outliers < 0) throw ValidationError("outliers must be >= 0");
  if (descriptor_noise_std < 0.0) throw ValidationError("noise std must be >= 0");
  if (dropout < 0.0 || dropout >= 1.0) throw ValidationError("dropout must be in [0, 1)");
  if (canvas_width < 1 || canvas_height < 1) {
    throw ValidationError("canvas dimensions must be positive");
  }
  for (const InstanceTransform& t : transforms) {
    if (t.kind == TransformKind::kTps && t.tps_amplitude_px < 0.0) {
      throw ValidationError("tps amplitude must be >= 0");
    }
  }
}

double SynthRng::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double SynthRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::int64_t SynthRng::uniform_int(std::int64_t n) {
  return static_cast<std::int64_t>(eng_() % static_cast<std::uint64_t>(n));
}

double SynthRng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  spare_ = mag * std::sin(2.0 * M_PI * u2);
  has_spare_ = true;
  return mag * std::cos(2.0 * M_PI * u2);
}

namespace {

using PointMap = std::function<Vec2(const Vec2&)>;

struct Bbox {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  Vec2 center() const { return {(x0 + x1) / 2.0, (y0 + y1) / 2.0}; }
};

Bbox bbox_of(const KeyPointSet& set) {
  Bbox b{set.points().front().pos.x, set.points().front().pos.y,
         set.points().front().pos.x, set.points().front().pos.y};
  for (const KeyPoint& kp : set.points()) {
    b.x0 = std::min(b.x0, kp.pos.x);
    b.y0 = std::min(b.y0, kp.pos.y);
    b.x1 = std::max(b.x1, kp.pos.x);
    b.y1 = std::max(b.y1, kp.pos.y);
  }
  return b;
}

// Linear part of the instance pose: rotation, scale, shear, anisotropy.
struct Linear {
  double m[4];
  Vec2 apply(const Vec2& v) const {
    return {m[0] * v.x + m[1] * v.y, m[2] * v.x + m[3] * v.y};
  }
};

PointMap build_transform(const InstanceTransform& t, const Bbox& tb,
                         const Vec2& target_center, double fit_scale,
                         SynthRng& rng) {
  if (t.kind == TransformKind::kIdentity) {
    return [](const Vec2& p) { return p; };
  }
  const double theta = rng.uniform(0.0, 2.0 * M_PI);
  const double scale = fit_scale * rng.uniform(0.7, 0.95);
  const double shear = rng.uniform(-0.2, 0.2);
  const double aniso = rng.uniform(0.85, 1.15);
  const double ct = std::cos(theta), st = std::sin(theta);
  // R(theta) * scale * [[1, shear], [0, aniso]]
  const Linear lin{{scale * ct, scale * (ct * shear - st * aniso),
                    scale * st, scale * (st * shear + ct * aniso)}};
  const Vec2 pivot = tb.center();

  PointMap affine = [lin, pivot, target_center](const Vec2& p) {
    return lin.apply(p - pivot) + target_center;
  };
  if (t.kind == TransformKind::kAffine) return affine;

  if (t.kind == TransformKind::kHomography) {
    const double half = std::max(tb.width(), tb.height()) / 2.0;
    const double gx = rng.uniform(0.15, 0.35) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    const double gy = rng.uniform(0.15, 0.35) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    const Vec2 g{gx / half, gy / half};
    return [lin, pivot, target_center, g](const Vec2& p) {
      const Vec2 q = p - pivot;
      const double w = 1.0 + g.x * q.x + g.y * q.y;
      return lin.apply(Vec2{q.x / w, q.y / w}) + target_center;
    };
  }

  // TPS: affine pose plus random control-grid displacements.
  std::vector<Vec2> src, dst;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const Vec2 ctrl{tb.x0 + tb.width() * c / 3.0, tb.y0 + tb.height() * r / 3.0};
      src.push_back(ctrl);
      const Vec2 jitter{rng.uniform(-t.tps_amplitude_px, t.tps_amplitude_px),
                        rng.uniform(-t.tps_amplitude_px, t.tps_amplitude_px)};
      dst.push_back(affine(ctrl) + jitter);
    }
  }
  const ThinPlateSpline tps = tps_fit(src, dst, 0.0);
  return [tps](const Vec2& p) { return tps.apply(p); };
}

// Central-difference Jacobian of the map at p, step 0.5 px.
std::array<double, 4> jacobian(const PointMap& f, const Vec2& p) {
  const double h = 0.5;
  const Vec2 dx = (f({p.x + h, p.y}) - f({p.x - h, p.y})) * (1.0 / (2.0 * h));
  const Vec2 dy = (f({p.x, p.y + h}) - f({p.x, p.y - h})) * (1.0 / (2.0 * h));
  return {dx.x, dy.x, dx.y, dy.y};
}

Descriptor random_descriptor(SynthRng& rng) {
  Descriptor d;
  for (double& v : d) v = rng.uniform(0.0, 200.0);
  return d;
}

}  // namespace

std::pair<KeyPointSet, GroundTruth> generate_scene(const KeyPointSet& templ,
                                                   const SynthSpec& spec) {
  spec.validate();
  if (templ.empty()) throw ValidationError("generate_scene requires a template");

  SynthRng rng(spec.seed);
  KeyPointSet scene("synthetic");
  GroundTruth truth;
  truth.canvas_width = spec.canvas_width;
  truth.canvas_height = spec.canvas_height;

  const Bbox tb = bbox_of(templ);
  Polygon template_hull;
  try {
    template_hull = convex_hull([&] {
      std::vector<Vec2> pts;
      for (const KeyPoint& kp : templ.points()) pts.push_back(kp.pos);
      return pts;
    }());
  } catch (const GeometryError&) {
    throw ValidationError("template keypoints are degenerate (collinear)");
  }

  const int cols = std::max(1, static_cast<int>(std::ceil(std::sqrt(
                                    static_cast<double>(spec.instances)))));
  const int rows =
      spec.instances > 0 ? (spec.instances + cols - 1) / cols : 1;
  const double cell_w = static_cast<double>(spec.canvas_width) / cols;
  const double cell_h = static_cast<double>(spec.canvas_height) / rows;

  std::int64_t next_id = 0;
  for (int i = 0; i < spec.instances; ++i) {
    const InstanceTransform t = spec.transforms.empty()
                                    ? InstanceTransform{}
                                    : spec.transforms[static_cast<std::size_t>(i) %
                                                      spec.transforms.size()];
    const int cx = i % cols;
    const int cy = i / cols;
    const Vec2 center{cell_w * (cx + 0.5) + rng.uniform(-0.04, 0.04) * cell_w,
                      cell_h * (cy + 0.5) + rng.uniform(-0.04, 0.04) * cell_h};
    const double margin = 0.76;
    // The diagonal bounds the rotated footprint.
    const double diag = std::hypot(tb.width(), tb.height());
    const double fit_scale = margin * std::min(cell_w, cell_h) / diag;
    const PointMap map = build_transform(t, tb, center, fit_scale, rng);

    // Dropout: keep round((1 - d) * n) keypoints, chosen uniformly.
    const std::size_t n = templ.size();
    const auto keep =
        static_cast<std::size_t>(std::llround((1.0 - spec.dropout) * n));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const std::size_t j =
          k + static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(n - k)));
      std::swap(order[k], order[j]);
    }
    order.resize(keep);
    std::sort(order.begin(), order.end());

    GroundTruthInstance gti;
    for (std::size_t k : order) {
      const KeyPoint& src = templ.points()[k];
      KeyPoint kp;
      kp.id = next_id++;
      kp.pos = map(src.pos);

      const std::array<double, 4> j = jacobian(map, src.pos);
      const double det = j[0] * j[3] - j[1] * j[2];
      kp.scale = src.scale * (det != 0.0 ? std::sqrt(std::abs(det)) : 1.0);
      const Vec2 dir{std::cos(src.orientation), std::sin(src.orientation)};
      const Vec2 rotated{j[0] * dir.x + j[1] * dir.y, j[2] * dir.x + j[3] * dir.y};
      kp.orientation = rotated.squared_norm() > 0.0
                           ? normalize_angle(std::atan2(rotated.y, rotated.x))
                           : src.orientation;

      kp.descriptor = src.descriptor;
      if (spec.descriptor_noise_std > 0.0) {
        for (double& v : kp.descriptor) {
          v = std::max(0.0, v + spec.descriptor_noise_std * rng.gaussian());
        }
      }
      gti.correspondence.emplace_back(src.id, kp.id);
      scene.add(kp);
    }

    std::vector<Vec2> mapped;
    mapped.reserve(template_hull.size());
    for (const Vec2& v : template_hull) mapped.push_back(map(v));
    gti.hull = convex_hull(mapped);
    truth.instances.push_back(std::move(gti));
  }

  for (int i = 0; i < spec.outliers; ++i) {
    KeyPoint kp;
    kp.id = next_id++;
    kp.pos = {rng.uniform(0.0, spec.canvas_width), rng.uniform(0.0, spec.canvas_height)};
    kp.scale = rng.uniform(1.0, 4.0);
    kp.orientation = rng.uniform(0.0, 2.0 * M_PI);
    kp.descriptor = random_descriptor(rng);
    scene.add(kp);
  }

  return {std::move(scene), std::move(truth)};
}

KeyPointSet make_grid_template(int cols, int rows, double spacing,
                               std::uint64_t seed) {
  if (cols < 2 || rows < 2) throw ValidationError("grid template needs >= 2x2 points");
  if (spacing <= 0.0) throw ValidationError("grid spacing must be positive");
  SynthRng rng(seed);
  KeyPointSet set("template");
  std::int64_t id = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      KeyPoint kp;
      kp.id = id++;
      kp.pos = {spacing * (c + 1), spacing * (r + 1)};
      kp.scale = rng.uniform(1.5, 3.5);
      kp.orientation = rng.uniform(0.0, 2.0 * M_PI);
      kp.descriptor = random_descriptor(rng);
      set.add(kp);
    }
  }
  return set;
}

}  // namespace trigrow
