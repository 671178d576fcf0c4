#include "trigrow/eval.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "trigrow/errors.hpp"

namespace trigrow {

std::size_t BitMask::count() const {
  std::size_t c = 0;
  for (std::uint8_t v : on) c += v;
  return c;
}

BitMask rasterize_polygon(const Polygon& poly, int width, int height) {
  BitMask mask;
  mask.width = width;
  mask.height = height;
  mask.on.assign(static_cast<std::size_t>(width) * height, 0);
  if (poly.size() < 3) return mask;

  for (int y = 0; y < height; ++y) {
    const double fy = y;
    std::vector<double> crossings;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2& p = poly[i];
      const Vec2& q = poly[(i + 1) % poly.size()];
      // Half-open span rule: each vertex counts for exactly one of its edges.
      if ((p.y <= fy && q.y > fy) || (q.y <= fy && p.y > fy)) {
        crossings.push_back(p.x + (fy - p.y) * (q.x - p.x) / (q.y - p.y));
      }
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      const int x0 = std::max(0, static_cast<int>(std::ceil(crossings[k])));
      const int x1 = std::min(width - 1,
                              static_cast<int>(std::floor(crossings[k + 1])));
      for (int x = x0; x <= x1; ++x) {
        mask.on[static_cast<std::size_t>(y) * width + x] = 1;
      }
    }
  }
  return mask;
}

double iou(const BitMask& a, const BitMask& b) {
  if (a.width != b.width || a.height != b.height) {
    throw ValidationError("iou requires masks of equal dimensions");
  }
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.on.size(); ++i) {
    inter += a.on[i] & b.on[i];
    uni += a.on[i] | b.on[i];
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

EvalReport evaluate(const std::vector<Detection>& detections,
                    const GroundTruth& truth) {
  EvalReport report;
  report.detections = static_cast<int>(detections.size());
  report.instances.resize(truth.instances.size());

  const int w = truth.canvas_width;
  const int h = truth.canvas_height;
  if (w > 0 && h > 0 && !truth.instances.empty()) {
    std::vector<BitMask> truth_masks, det_masks;
    truth_masks.reserve(truth.instances.size());
    for (const GroundTruthInstance& gi : truth.instances) {
      truth_masks.push_back(rasterize_polygon(gi.hull, w, h));
    }
    det_masks.reserve(detections.size());
    for (const Detection& d : detections) {
      det_masks.push_back(rasterize_polygon(d.scene_hull, w, h));
    }

    // Greedy best-IoU assignment, one detection per instance.
    std::vector<bool> det_used(detections.size(), false);
    std::vector<bool> inst_used(truth.instances.size(), false);
    while (true) {
      double best = 0.0;
      std::size_t bd = 0, bi = 0;
      bool found = false;
      for (std::size_t i = 0; i < truth.instances.size(); ++i) {
        if (inst_used[i]) continue;
        for (std::size_t d = 0; d < detections.size(); ++d) {
          if (det_used[d]) continue;
          const double v = iou(det_masks[d], truth_masks[i]);
          if (v > best) {
            best = v;
            bd = d;
            bi = i;
            found = true;
          }
        }
      }
      if (!found || best <= 0.0) break;
      det_used[bd] = true;
      inst_used[bi] = true;
      InstanceEval& ie = report.instances[bi];
      ie.iou = best;
      ie.identified = best >= 0.5;
      ie.detection_index = static_cast<int>(bd);
      ie.j = detections[bd].score_j;
    }
  }

  std::set<std::pair<std::int64_t, std::int64_t>> planted;
  for (const GroundTruthInstance& gi : truth.instances) {
    for (const auto& c : gi.correspondence) planted.insert(c);
  }
  std::set<std::pair<std::int64_t, std::int64_t>> detected;
  for (const Detection& d : detections) {
    for (const Match& m : d.seed.matches()) detected.insert({m.template_id, m.scene_id});
  }
  std::size_t correct = 0;
  for (const auto& m : detected) correct += planted.count(m);

  report.planted_matches = static_cast<int>(planted.size());
  report.detected_matches = static_cast<int>(detected.size());
  report.correct_matches = static_cast<int>(correct);
  report.precision = detected.empty()
                         ? 0.0
                         : static_cast<double>(correct) / static_cast<double>(detected.size());
  report.recall = planted.empty()
                      ? 0.0
                      : static_cast<double>(correct) / static_cast<double>(planted.size());
  return report;
}

std::string eval_report_to_json(const EvalReport& report) {
  nlohmann::json doc;
  doc["detections"] = report.detections;
  doc["instances"] = nlohmann::json::array();
  for (const InstanceEval& ie : report.instances) {
    nlohmann::json row;
    row["identified"] = ie.identified;
    row["iou"] = ie.iou;
    if (ie.j.has_value()) {
      row["j"] = *ie.j;
    } else {
      row["j"] = nullptr;
    }
    row["detection_index"] = ie.detection_index;
    doc["instances"].push_back(row);
  }
  doc["planted_matches"] = report.planted_matches;
  doc["detected_matches"] = report.detected_matches;
  doc["correct_matches"] = report.correct_matches;
  doc["precision"] = report.precision;
  doc["recall"] = report.recall;
  return doc.dump(2) + "\n";
}

std::string eval_report_table(const EvalReport& report) {
  std::ostringstream out;
  out << "instance  identified  iou     j\n";
  int identified = 0;
  for (std::size_t i = 0; i < report.instances.size(); ++i) {
    const InstanceEval& ie = report.instances[i];
    identified += ie.identified ? 1 : 0;
    char iou_buf[16];
    std::snprintf(iou_buf, sizeof iou_buf, "%.3f", ie.iou);
    out << i + 1;
    out << std::string(i + 1 < 10 ? 9 : 8, ' ');
    out << (ie.identified ? "yes" : "no ") << "         " << iou_buf << "   ";
    if (ie.j.has_value()) {
      char j_buf[16];
      std::snprintf(j_buf, sizeof j_buf, "%.0f", *ie.j);
      out << j_buf;
    } else {
      out << "-";
    }
    out << "\n";
  }
  out << "identified " << identified << "/" << report.instances.size()
      << "  precision ";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", report.precision);
  out << buf << "  recall ";
  std::snprintf(buf, sizeof buf, "%.4f", report.recall);
  out << buf << "\n";
  return out.str();
}

}  // namespace trigrow
