#pragma once

#include <string>
#include <vector>

#include "trigrow/triangulation.hpp"
#include "trigrow/types.hpp"

namespace trigrow {

// Two-panel overlay: template keypoints and per-detection member meshes on
// the left, the scene with replicated meshes and hulls on the right, one
// line per seed correspondence across the panels. Deterministic output.
std::string detection_svg(const KeyPointSet& templ, const KeyPointSet& scene,
                          const std::vector<Detection>& detections);

// Single-panel mesh drawing of a triangulation, for debugging geometry.
std::string mesh_svg(const TriangulationGraph& tri);

}  // namespace trigrow
