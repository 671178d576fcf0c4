#pragma once

#include <string>
#include <vector>

#include "trigrow/types.hpp"

namespace trigrow {

// Text keypoint format, one keypoint per line:
//   id x y scale orientation d0 d1 ... d127
// '#' starts a comment line. Orientations are radians unless a directive
// comment "# angles=degrees" appears before the data lines.
// Throws ParseError (with file:line), ValidationError, or IoError.
KeyPointSet load_keypoints(const std::string& path, const std::string& image_tag);
void save_keypoints(const std::string& path, const KeyPointSet& set);

// Match file, one match per line: template_id scene_id distance
// '#' starts a comment line.
std::vector<Match> load_matches(const std::string& path);
void save_matches(const std::string& path, const std::vector<Match>& matches);

// Detection documents share one JSON schema across detectors:
// {"method": ..., "detections":[{"seeds":[{"provenance":[...],
//  "matches":[{"template_id","scene_id","distance"},...]}],
//  "template_hull":[[x,y],...], "scene_hull":[[x,y],...], "score_j": num|null}]}
std::string detections_to_json(const std::vector<Detection>& detections,
                               const std::string& method);
void save_detections(const std::string& path, const std::vector<Detection>& detections,
                     const std::string& method);
std::vector<Detection> load_detections(const std::string& path);

std::string ground_truth_to_json(const GroundTruth& truth);
void save_ground_truth(const std::string& path, const GroundTruth& truth);
GroundTruth load_ground_truth(const std::string& path);

// Shortest decimal text that round-trips the double exactly.
std::string format_double(double value);

// Whole-file helpers shared by the CLI writers.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace trigrow
