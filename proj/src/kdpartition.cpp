#include "trigrow/kdpartition.hpp"

#include <algorithm>

namespace trigrow {

namespace {

struct BuildLeaf {
  double x0, y0, x1, y1;
  std::vector<std::pair<std::int64_t, Vec2>> pts;
};

}  // namespace

int KdPartition::leaf_of(std::int64_t point_id) const {
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (std::binary_search(leaves[i].point_ids.begin(), leaves[i].point_ids.end(),
                           point_id)) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

KdPartition kd_partition(const std::vector<std::pair<std::int64_t, Vec2>>& points,
                         std::size_t leaves) {
  if (leaves < 1) throw ValidationError("kd partition needs at least one leaf");
  if (leaves > points.size()) {
    throw ValidationError("kd partition infeasible: " + std::to_string(leaves) +
                          " leaves requested for " + std::to_string(points.size()) +
                          " points");
  }

  BuildLeaf root;
  root.pts = points;
  std::sort(root.pts.begin(), root.pts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  root.x0 = root.x1 = root.pts[0].second.x;
  root.y0 = root.y1 = root.pts[0].second.y;
  for (const auto& [id, p] : root.pts) {
    root.x0 = std::min(root.x0, p.x);
    root.x1 = std::max(root.x1, p.x);
    root.y0 = std::min(root.y0, p.y);
    root.y1 = std::max(root.y1, p.y);
  }

  std::vector<BuildLeaf> work{std::move(root)};
  while (work.size() < leaves) {
    // Split the most populated leaf; first such leaf wins ties.
    std::size_t target = 0;
    for (std::size_t i = 1; i < work.size(); ++i) {
      if (work[i].pts.size() > work[target].pts.size()) target = i;
    }
    BuildLeaf& leaf = work[target];
    if (leaf.pts.size() < 2) {
      throw ValidationError("kd partition infeasible: leaf cannot be split");
    }

    const bool split_x = (leaf.x1 - leaf.x0) >= (leaf.y1 - leaf.y0);
    std::vector<std::pair<std::int64_t, Vec2>> order = leaf.pts;
    std::stable_sort(order.begin(), order.end(),
                     [split_x](const auto& a, const auto& b) {
                       return split_x ? a.second.x < b.second.x
                                      : a.second.y < b.second.y;
                     });
    // Lower median: on an even count both halves are equal, on an odd count
    // the left half takes the extra point.
    const std::size_t left_count = (order.size() + 1) / 2;
    const double lo_coord = split_x ? order[left_count - 1].second.x
                                    : order[left_count - 1].second.y;
    const double hi_coord =
        split_x ? order[left_count].second.x : order[left_count].second.y;
    const double cut = 0.5 * (lo_coord + hi_coord);

    BuildLeaf left, right;
    left.x0 = leaf.x0;
    left.y0 = leaf.y0;
    left.x1 = split_x ? cut : leaf.x1;
    left.y1 = split_x ? leaf.y1 : cut;
    right.x0 = split_x ? cut : leaf.x0;
    right.y0 = split_x ? leaf.y0 : cut;
    right.x1 = leaf.x1;
    right.y1 = leaf.y1;
    left.pts.assign(order.begin(), order.begin() + left_count);
    right.pts.assign(order.begin() + left_count, order.end());
    std::sort(left.pts.begin(), left.pts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::sort(right.pts.begin(), right.pts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    work[target] = std::move(left);
    work.push_back(std::move(right));
  }

  KdPartition out;
  for (const BuildLeaf& leaf : work) {
    KdLeaf kl;
    kl.x0 = leaf.x0;
    kl.y0 = leaf.y0;
    kl.x1 = leaf.x1;
    kl.y1 = leaf.y1;
    for (const auto& [id, p] : leaf.pts) kl.point_ids.push_back(id);
    out.leaves.push_back(std::move(kl));
  }
  return out;
}

}  // namespace trigrow
