#pragma once

#include <cstdint>
#include <vector>

#include "trigrow/types.hpp"

namespace trigrow {

// One leaf of an axis-aligned partition of the scene bounding box.
struct KdLeaf {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  std::vector<std::int64_t> point_ids;  // sorted ascending
};

struct KdPartition {
  std::vector<KdLeaf> leaves;

  // Index of the leaf whose point set contains the id, or -1.
  int leaf_of(std::int64_t point_id) const;
};

// Partitions the points into exactly `leaves` axis-aligned leaves by
// repeatedly splitting the most populated leaf along its wider axis at the
// median point coordinate (lower median on even counts). Leaves tile the
// bounding box and every leaf is non-empty.
// Throws ValidationError when leaves < 1 or leaves > |points|.
KdPartition kd_partition(const std::vector<std::pair<std::int64_t, Vec2>>& points,
                         std::size_t leaves);

}  // namespace trigrow
