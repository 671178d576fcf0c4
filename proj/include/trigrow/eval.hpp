#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trigrow/types.hpp"

namespace trigrow {

// Boolean pixel mask on an integer grid.
struct BitMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> on;  // row-major, 0 or 1

  std::size_t count() const;
};

// Even-odd scanline rasterization of a polygon; pixels are sampled at their
// integer coordinates. Degenerate polygons give an empty mask.
BitMask rasterize_polygon(const Polygon& poly, int width, int height);

// |A intersect B| / |A union B|; 0 when both masks are empty.
// Throws ValidationError on dimension mismatch.
double iou(const BitMask& a, const BitMask& b);

struct InstanceEval {
  bool identified = false;    // IoU >= 0.5 with its assigned detection
  double iou = 0.0;
  std::optional<double> j;    // the assigned detection's difference median
  int detection_index = -1;   // -1 when no detection was assigned
};

struct EvalReport {
  std::vector<InstanceEval> instances;
  int detections = 0;
  int planted_matches = 0;
  int detected_matches = 0;
  int correct_matches = 0;
  double precision = 0.0;  // correct / detected (0 when nothing detected)
  double recall = 0.0;     // correct / planted (0 when nothing planted)
};

// Greedy one-to-one assignment of detections to planted instances by
// descending IoU at the truth's canvas resolution, plus match-level
// precision/recall of the union of detection matches against the union of
// planted correspondences.
EvalReport evaluate(const std::vector<Detection>& detections,
                    const GroundTruth& truth);

std::string eval_report_to_json(const EvalReport& report);
// Fixed-width text table, one row per instance plus a summary line.
std::string eval_report_table(const EvalReport& report);

}  // namespace trigrow
