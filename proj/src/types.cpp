#include "trigrow/types.hpp"

#include <algorithm>
#include <numbers>

namespace trigrow {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double normalize_angle(double radians) {
  double a = std::fmod(radians, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;  // fmod can land exactly on 2*pi after the add
  return a;
}

double wrap_angle_diff(double radians) {
  double a = std::fmod(radians, kTwoPi);
  if (a > std::numbers::pi) a -= kTwoPi;
  if (a <= -std::numbers::pi) a += kTwoPi;
  return a;
}

double KeyPoint::descriptor_distance(const KeyPoint& other) const {
  double sum = 0.0;
  for (int i = 0; i < kDescriptorSize; ++i) {
    const double d = descriptor[i] - other.descriptor[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

void KeyPointSet::add(KeyPoint kp) {
  if (index_.count(kp.id) != 0) {
    throw ValidationError("duplicate keypoint id " + std::to_string(kp.id) +
                          (image_tag_.empty() ? "" : " in " + image_tag_));
  }
  if (!(kp.scale > 0.0)) {
    throw ValidationError("keypoint " + std::to_string(kp.id) +
                          " has non-positive scale");
  }
  kp.orientation = normalize_angle(kp.orientation);
  index_.emplace(kp.id, points_.size());
  points_.push_back(std::move(kp));
}

const KeyPoint* KeyPointSet::find(std::int64_t id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &points_[it->second];
}

const KeyPoint& KeyPointSet::at(std::int64_t id) const {
  const KeyPoint* kp = find(id);
  if (kp == nullptr) {
    throw ValidationError("unknown keypoint id " + std::to_string(id) +
                          (image_tag_.empty() ? "" : " in " + image_tag_));
  }
  return *kp;
}

Seed::Seed(std::vector<Match> matches, std::string label)
    : label_(std::move(label)) {
  provenance_.push_back(label_);
  for (const Match& m : matches) add(m);
}

void Seed::add(const Match& m) {
  if (by_template_.count(m.template_id) != 0) {
    throw ValidationError("seed already maps template id " +
                          std::to_string(m.template_id));
  }
  if (by_scene_.count(m.scene_id) != 0) {
    throw ValidationError("seed already uses scene id " +
                          std::to_string(m.scene_id));
  }
  auto it = std::lower_bound(
      matches_.begin(), matches_.end(), m,
      [](const Match& a, const Match& b) { return a.template_id < b.template_id; });
  const std::size_t pos = static_cast<std::size_t>(it - matches_.begin());
  matches_.insert(it, m);
  for (auto& [id, idx] : by_template_) {
    if (idx >= pos) ++idx;
  }
  for (auto& [id, idx] : by_scene_) {
    if (idx >= pos) ++idx;
  }
  by_template_.emplace(m.template_id, pos);
  by_scene_.emplace(m.scene_id, pos);
}

bool Seed::contains_template(std::int64_t template_id) const {
  return by_template_.count(template_id) != 0;
}

bool Seed::contains_scene(std::int64_t scene_id) const {
  return by_scene_.count(scene_id) != 0;
}

bool Seed::contains(const Match& m) const {
  const Match* mine = match_for_template(m.template_id);
  return mine != nullptr && mine->scene_id == m.scene_id;
}

const Match* Seed::match_for_template(std::int64_t template_id) const {
  auto it = by_template_.find(template_id);
  return it == by_template_.end() ? nullptr : &matches_[it->second];
}

bool Seed::conflict_free_with(const Seed& other) const {
  for (const Match& m : other.matches_) {
    const Match* mine = match_for_template(m.template_id);
    if (mine != nullptr && mine->scene_id != m.scene_id) return false;
    auto it = by_scene_.find(m.scene_id);
    if (it != by_scene_.end() && matches_[it->second].template_id != m.template_id) {
      return false;
    }
  }
  return true;
}

bool Seed::shares_match_with(const Seed& other) const {
  const Seed& small = size() <= other.size() ? *this : other;
  const Seed& big = size() <= other.size() ? other : *this;
  for (const Match& m : small.matches_) {
    if (big.contains(m)) return true;
  }
  return false;
}

void Seed::merge(const Seed& other) {
  if (!conflict_free_with(other)) {
    throw ValidationError("cannot merge conflicting seeds " + label_ + " and " +
                          other.label_);
  }
  for (const Match& m : other.matches_) {
    if (!contains(m)) add(m);
  }
  for (const std::string& p : other.provenance_) {
    if (std::find(provenance_.begin(), provenance_.end(), p) == provenance_.end()) {
      provenance_.push_back(p);
    }
  }
}

std::vector<std::int64_t> Seed::template_ids() const {
  std::vector<std::int64_t> ids;
  ids.reserve(matches_.size());
  for (const Match& m : matches_) ids.push_back(m.template_id);
  return ids;
}

std::vector<std::int64_t> Seed::scene_ids() const {
  std::vector<std::int64_t> ids;
  ids.reserve(matches_.size());
  for (const Match& m : matches_) ids.push_back(m.scene_id);
  return ids;
}

double Seed::summed_distance() const {
  double sum = 0.0;
  for (const Match& m : matches_) sum += m.distance;
  return sum;
}

}  // namespace trigrow
