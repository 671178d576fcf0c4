#include "trigrow/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "trigrow/errors.hpp"

namespace trigrow {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);

  std::map<std::string, std::string> cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path, line_no, "expected key=value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ParseError(path, line_no, "empty key");
    cfg[key] = value;
  }
  return cfg;
}

double config_double(const std::map<std::string, std::string>& cfg,
                     const std::string& key, double fallback) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "' is not a number: " + it->second);
  }
}

std::int64_t config_int(const std::map<std::string, std::string>& cfg,
                        const std::string& key, std::int64_t fallback) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "' is not an integer: " + it->second);
  }
}

std::string config_string(const std::map<std::string, std::string>& cfg,
                          const std::string& key, const std::string& fallback) {
  const auto it = cfg.find(key);
  return it == cfg.end() ? fallback : it->second;
}

namespace {

void reject_unknown(const std::map<std::string, std::string>& cfg,
                    const std::vector<std::string>& known) {
  for (const auto& [key, value] : cfg) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ValidationError("unknown config key '" + key + "'");
    }
  }
}

}  // namespace

GrowthConfig growth_config_from(const std::map<std::string, std::string>& cfg) {
  reject_unknown(cfg, {"ratio_threshold", "ccs_threshold", "rcs_threshold",
                       "coherence_threshold", "kd_leaves",
                       "max_candidates_per_template_triplet",
                       "expansion_neighbor_depth", "min_properly_expanded",
                       "max_rounds", "rcs_mu"});
  GrowthConfig out;
  out.ratio_threshold = config_double(cfg, "ratio_threshold", out.ratio_threshold);
  out.ccs_threshold = config_double(cfg, "ccs_threshold", out.ccs_threshold);
  out.rcs_threshold = config_double(cfg, "rcs_threshold", out.rcs_threshold);
  out.coherence_threshold =
      config_double(cfg, "coherence_threshold", out.coherence_threshold);
  out.kd_leaves = static_cast<std::size_t>(
      config_int(cfg, "kd_leaves", static_cast<std::int64_t>(out.kd_leaves)));
  out.max_candidates_per_template_triplet = static_cast<std::size_t>(config_int(
      cfg, "max_candidates_per_template_triplet",
      static_cast<std::int64_t>(out.max_candidates_per_template_triplet)));
  out.expansion_neighbor_depth = static_cast<int>(
      config_int(cfg, "expansion_neighbor_depth", out.expansion_neighbor_depth));
  out.min_properly_expanded = static_cast<std::size_t>(config_int(
      cfg, "min_properly_expanded", static_cast<std::int64_t>(out.min_properly_expanded)));
  out.max_rounds = static_cast<std::size_t>(
      config_int(cfg, "max_rounds", static_cast<std::int64_t>(out.max_rounds)));
  const std::string mu = config_string(cfg, "rcs_mu", "corrected");
  if (mu == "paper") {
    out.rcs_mu = RcsMu::kPaper;
  } else if (mu == "corrected") {
    out.rcs_mu = RcsMu::kCorrected;
  } else {
    throw ValidationError("rcs_mu must be 'paper' or 'corrected', got '" + mu + "'");
  }
  out.validate();
  return out;
}

SynthSpec synth_spec_from(const std::map<std::string, std::string>& cfg) {
  reject_unknown(cfg, {"instances", "transforms", "outliers", "noise_std", "dropout",
                       "seed", "canvas_width", "canvas_height"});
  SynthSpec spec;
  spec.instances = static_cast<int>(config_int(cfg, "instances", spec.instances));
  spec.outliers = static_cast<int>(config_int(cfg, "outliers", spec.outliers));
  spec.descriptor_noise_std = config_double(cfg, "noise_std", spec.descriptor_noise_std);
  spec.dropout = config_double(cfg, "dropout", spec.dropout);
  spec.seed = static_cast<std::uint64_t>(
      config_int(cfg, "seed", static_cast<std::int64_t>(spec.seed)));
  spec.canvas_width = static_cast<int>(config_int(cfg, "canvas_width", spec.canvas_width));
  spec.canvas_height =
      static_cast<int>(config_int(cfg, "canvas_height", spec.canvas_height));

  const std::string transforms = config_string(cfg, "transforms", "");
  std::stringstream ss(transforms);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    InstanceTransform t;
    if (item == "identity") {
      t.kind = TransformKind::kIdentity;
    } else if (item == "affine") {
      t.kind = TransformKind::kAffine;
    } else if (item == "homography") {
      t.kind = TransformKind::kHomography;
    } else if (item.rfind("tps:", 0) == 0) {
      t.kind = TransformKind::kTps;
      try {
        t.tps_amplitude_px = std::stod(item.substr(4));
      } catch (const std::exception&) {
        throw ValidationError("bad tps amplitude in transform '" + item + "'");
      }
    } else {
      throw ValidationError("unknown transform '" + item + "'");
    }
    spec.transforms.push_back(t);
  }
  spec.validate();
  return spec;
}

}  // namespace trigrow
