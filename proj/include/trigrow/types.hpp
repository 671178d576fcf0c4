#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "trigrow/errors.hpp"

namespace trigrow {

inline constexpr int kDescriptorSize = 128;
using Descriptor = std::array<double, kDescriptorSize>;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
};

using Polygon = std::vector<Vec2>;

// Wraps an angle into [0, 2*pi).
double normalize_angle(double radians);

// Wraps an angle difference into (-pi, pi].
double wrap_angle_diff(double radians);

struct KeyPoint {
  std::int64_t id = 0;
  Vec2 pos;
  double scale = 1.0;        // > 0
  double orientation = 0.0;  // [0, 2*pi)
  Descriptor descriptor{};

  double descriptor_distance(const KeyPoint& other) const;
};

// An ordered collection of keypoints from one image, with id lookup.
// Iteration order is file/creation order; ids are unique.
class KeyPointSet {
 public:
  KeyPointSet() = default;
  explicit KeyPointSet(std::string image_tag) : image_tag_(std::move(image_tag)) {}

  // Throws ValidationError on duplicate id or non-positive scale.
  void add(KeyPoint kp);

  const KeyPoint* find(std::int64_t id) const;
  // Throws ValidationError if the id is unknown.
  const KeyPoint& at(std::int64_t id) const;

  const std::vector<KeyPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::string& image_tag() const { return image_tag_; }
  void set_image_tag(std::string tag) { image_tag_ = std::move(tag); }

 private:
  std::string image_tag_;
  std::vector<KeyPoint> points_;
  std::unordered_map<std::int64_t, std::size_t> index_;
};

struct Match {
  std::int64_t template_id = 0;
  std::int64_t scene_id = 0;
  double distance = 0.0;  // descriptor distance, >= 0

  friend bool operator==(const Match& a, const Match& b) {
    return a.template_id == b.template_id && a.scene_id == b.scene_id;
  }
};

// An injective set of matches: every template id and every scene id
// appears at most once. Matches are kept sorted by template id.
class Seed {
 public:
  Seed() = default;
  // Throws ValidationError if the matches are not injective.
  Seed(std::vector<Match> matches, std::string label);

  // Throws ValidationError if adding would break injectivity.
  void add(const Match& m);

  bool contains_template(std::int64_t template_id) const;
  bool contains_scene(std::int64_t scene_id) const;
  bool contains(const Match& m) const;
  const Match* match_for_template(std::int64_t template_id) const;

  // True if the union of the two match sets is still injective.
  bool conflict_free_with(const Seed& other) const;
  // True if the seeds have at least one (template_id, scene_id) pair in common.
  bool shares_match_with(const Seed& other) const;
  // Union with another seed. Throws ValidationError on conflict.
  void merge(const Seed& other);

  const std::vector<Match>& matches() const { return matches_; }
  std::size_t size() const { return matches_.size(); }
  const std::string& label() const { return label_; }
  const std::vector<std::string>& provenance() const { return provenance_; }

  std::vector<std::int64_t> template_ids() const;
  std::vector<std::int64_t> scene_ids() const;
  double summed_distance() const;

 private:
  std::vector<Match> matches_;  // sorted by template_id
  std::unordered_map<std::int64_t, std::size_t> by_template_;
  std::unordered_map<std::int64_t, std::size_t> by_scene_;
  std::string label_;
  std::vector<std::string> provenance_;
};

struct Detection {
  Seed seed;
  Polygon template_hull;
  Polygon scene_hull;
  // Median photometric difference in [0, 255]; absent in keypoint-only runs.
  std::optional<double> score_j;
};

struct GroundTruthInstance {
  Polygon hull;  // planted object region in scene coordinates
  std::vector<std::pair<std::int64_t, std::int64_t>> correspondence;  // template id -> scene id
};

struct GroundTruth {
  int canvas_width = 0;
  int canvas_height = 0;
  std::vector<GroundTruthInstance> instances;
};

}  // namespace trigrow
