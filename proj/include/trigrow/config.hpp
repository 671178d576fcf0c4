#pragma once

#include <map>
#include <string>

#include "trigrow/growth.hpp"
#include "trigrow/synth.hpp"

namespace trigrow {

// Flat key=value file: one pair per line, '#' comments, blank lines ignored.
// Throws ParseError with file:line on malformed lines, IoError when missing.
std::map<std::string, std::string> load_config(const std::string& path);

// Typed lookups; throw ValidationError naming the key on bad values.
double config_double(const std::map<std::string, std::string>& cfg,
                     const std::string& key, double fallback);
std::int64_t config_int(const std::map<std::string, std::string>& cfg,
                        const std::string& key, std::int64_t fallback);
std::string config_string(const std::map<std::string, std::string>& cfg,
                          const std::string& key, const std::string& fallback);

// Known growth keys: ratio_threshold, ccs_threshold, rcs_threshold,
// coherence_threshold, kd_leaves, max_candidates_per_template_triplet,
// expansion_neighbor_depth, min_properly_expanded, max_rounds,
// rcs_mu (paper|corrected). Unknown keys are rejected.
GrowthConfig growth_config_from(const std::map<std::string, std::string>& cfg);

// Known synth keys: instances, transforms (comma list of
// identity|affine|homography|tps:<px>), outliers, noise_std, dropout, seed,
// canvas_width, canvas_height. Unknown keys are rejected.
SynthSpec synth_spec_from(const std::map<std::string, std::string>& cfg);

}  // namespace trigrow
