#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "trigrow/types.hpp"

namespace trigrow {

enum class TransformKind { kIdentity, kAffine, kHomography, kTps };

struct InstanceTransform {
  TransformKind kind = TransformKind::kAffine;
  double tps_amplitude_px = 0.0;  // control-grid displacement, kTps only
};

struct SynthSpec {
  int instances = 1;
  // One entry per instance; shorter lists repeat cyclically, empty = affine.
  std::vector<InstanceTransform> transforms;
  int outliers = 0;
  double descriptor_noise_std = 0.0;
  double dropout = 0.0;  // fraction of instance keypoints removed, [0, 1)
  std::uint64_t seed = 1;
  int canvas_width = 800;
  int canvas_height = 600;

  // Throws ValidationError when a field is out of range.
  void validate() const;
};

// mt19937_64 with hand-rolled distributions: the engine's sequence is pinned
// by the standard, the library distributions are not, so identical seeds
// generate identical scenes on any standard library.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : eng_(seed) {}

  double uniform();                          // [0, 1)
  double uniform(double lo, double hi);      // [lo, hi)
  std::int64_t uniform_int(std::int64_t n);  // [0, n)
  double gaussian();                         // standard normal, Box-Muller

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Plants spec.instances transformed copies of the template into a canvas,
// updating each keypoint's scale and orientation by the local Jacobian of
// its instance transform, then appends uniform-random outlier keypoints.
// Ground truth records the planted hull (transformed template keypoint hull)
// and the exact template-to-scene id correspondence per instance.
std::pair<KeyPointSet, GroundTruth> generate_scene(const KeyPointSet& templ,
                                                   const SynthSpec& spec);

// Regular keypoint grid with random descriptors, scales, and orientations;
// ids are row-major from 0. A convenient template source for fixtures.
KeyPointSet make_grid_template(int cols, int rows, double spacing,
                               std::uint64_t seed);

}  // namespace trigrow
