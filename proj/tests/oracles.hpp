// Independent reference implementations the unit tests check the library
// against. Everything here is deliberately brute force.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "trigrow/triangulation.hpp"
#include "trigrow/types.hpp"

namespace oracle {

inline double descriptor_distance(const trigrow::Descriptor& a,
                                  const trigrow::Descriptor& b) {
  double sum = 0.0;
  for (int i = 0; i < trigrow::kDescriptorSize; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

// Scene-to-template nearest-neighbor matching with the ratio test, written
// as a direct transcription of the rule: best and second-best template
// descriptor per scene keypoint, ties to the smaller template id, keep iff
// best < ratio * second. Single-template sets skip the ratio test.
inline std::vector<trigrow::Match> ratio_matches(const trigrow::KeyPointSet& templ,
                                                 const trigrow::KeyPointSet& scene,
                                                 double ratio) {
  std::vector<trigrow::Match> out;
  for (const trigrow::KeyPoint& s : scene.points()) {
    const trigrow::KeyPoint* best = nullptr;
    double best_d = 0.0, second_d = 0.0;
    bool has_second = false;
    for (const trigrow::KeyPoint& t : templ.points()) {
      const double d = descriptor_distance(t.descriptor, s.descriptor);
      if (best == nullptr || d < best_d || (d == best_d && t.id < best->id)) {
        if (best != nullptr) {
          second_d = best_d;
          has_second = true;
        }
        best = &t;
        best_d = d;
      } else if (!has_second || d < second_d) {
        second_d = d;
        has_second = true;
      }
    }
    if (best == nullptr) continue;
    if (has_second) {
      if (second_d <= 0.0) continue;
      if (!(best_d < ratio * second_d)) continue;
    }
    out.push_back({best->id, s.id, best_d});
  }
  std::sort(out.begin(), out.end(),
            [](const trigrow::Match& a, const trigrow::Match& b) {
              return a.scene_id < b.scene_id;
            });
  return out;
}

struct Circumcircle {
  trigrow::Vec2 center;
  double radius_sq = 0.0;
  bool valid = false;
};

// Circumcircle through three points via the perpendicular-bisector system.
inline Circumcircle circumcircle(const trigrow::Vec2& a, const trigrow::Vec2& b,
                                 const trigrow::Vec2& c) {
  const double d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
  Circumcircle out;
  if (std::abs(d) < 1e-12) return out;
  const double a2 = a.x * a.x + a.y * a.y;
  const double b2 = b.x * b.x + b.y * b.y;
  const double c2 = c.x * c.x + c.y * c.y;
  out.center.x = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
  out.center.y = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
  out.radius_sq = (a - out.center).squared_norm();
  out.valid = true;
  return out;
}

// Empty-circumcircle property over every triangle, allowing cocircular
// vertices (relative tolerance). Returns the number of violations.
inline int delaunay_violations(const trigrow::TriangulationGraph& g) {
  int bad = 0;
  for (const trigrow::IdTriangle& tri : g.triangles()) {
    const Circumcircle cc = circumcircle(g.position(tri[0]), g.position(tri[1]),
                                         g.position(tri[2]));
    if (!cc.valid) {
      ++bad;
      continue;
    }
    for (const auto& [id, pos] : g.vertices()) {
      if (id == tri[0] || id == tri[1] || id == tri[2]) continue;
      const double d2 = (pos - cc.center).squared_norm();
      if (d2 < cc.radius_sq * (1.0 - 1e-9)) {
        ++bad;
        break;
      }
    }
  }
  return bad;
}

// Uniform random point set with distinct positions, ids 0..n-1.
inline std::vector<std::pair<std::int64_t, trigrow::Vec2>> random_points(
    std::size_t n, std::uint64_t seed, double extent = 1000.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, extent);
  std::vector<std::pair<std::int64_t, trigrow::Vec2>> pts;
  pts.reserve(n);
  while (pts.size() < n) {
    trigrow::Vec2 p{coord(rng), coord(rng)};
    bool dup = false;
    for (const auto& [id, q] : pts) {
      if ((p - q).squared_norm() < 1e-12) {
        dup = true;
        break;
      }
    }
    if (!dup) pts.emplace_back(static_cast<std::int64_t>(pts.size()), p);
  }
  return pts;
}

// A keypoint with a deterministic pseudo-random descriptor.
inline trigrow::KeyPoint make_keypoint(std::int64_t id, trigrow::Vec2 pos,
                                       double scale = 2.0, double orientation = 0.0,
                                       std::uint64_t descriptor_seed = 0) {
  trigrow::KeyPoint kp;
  kp.id = id;
  kp.pos = pos;
  kp.scale = scale;
  kp.orientation = orientation;
  std::mt19937_64 rng(descriptor_seed * 1000003ULL + static_cast<std::uint64_t>(id));
  std::uniform_real_distribution<double> level(0.0, 200.0);
  for (double& d : kp.descriptor) d = level(rng);
  return kp;
}

}  // namespace oracle
