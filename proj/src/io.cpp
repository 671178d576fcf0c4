#include "trigrow/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace trigrow {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

// Splits on whitespace.
std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, const std::string& path, int line) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || tok.empty()) {
    throw ParseError(path, line, "expected a number, got '" + tok + "'");
  }
  return v;
}

std::int64_t parse_id(const std::string& tok, const std::string& path, int line) {
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw ParseError(path, line, "expected an integer id, got '" + tok + "'");
  }
  return v;
}

json polygon_to_json(const Polygon& poly) {
  json arr = json::array();
  for (const Vec2& p : poly) arr.push_back(json::array({p.x, p.y}));
  return arr;
}

Polygon polygon_from_json(const json& arr) {
  Polygon poly;
  for (const auto& p : arr) {
    poly.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  return poly;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, p);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path);
}

KeyPointSet load_keypoints(const std::string& path, const std::string& image_tag) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");

  KeyPointSet set(image_tag);
  std::string line;
  int line_no = 0;
  bool degrees = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty()) continue;
    if (body[0] == '#') {
      const std::string directive = trim(body.substr(1));
      if (directive == "angles=degrees") degrees = true;
      if (directive == "angles=radians") degrees = false;
      continue;
    }
    const std::vector<std::string> toks = tokenize(body);
    if (toks.size() != 5 + kDescriptorSize) {
      throw ParseError(path, line_no,
                       "expected " + std::to_string(5 + kDescriptorSize) +
                           " fields (id x y scale orientation d0..d127), got " +
                           std::to_string(toks.size()));
    }
    KeyPoint kp;
    kp.id = parse_id(toks[0], path, line_no);
    kp.pos.x = parse_double(toks[1], path, line_no);
    kp.pos.y = parse_double(toks[2], path, line_no);
    kp.scale = parse_double(toks[3], path, line_no);
    kp.orientation = parse_double(toks[4], path, line_no);
    if (degrees) kp.orientation *= std::numbers::pi / 180.0;
    for (int i = 0; i < kDescriptorSize; ++i) {
      kp.descriptor[i] = parse_double(toks[5 + i], path, line_no);
    }
    if (!(kp.scale > 0.0)) {
      throw ParseError(path, line_no, "scale must be positive");
    }
    try {
      set.add(std::move(kp));
    } catch (const ValidationError& e) {
      throw ParseError(path, line_no, e.what());
    }
  }
  return set;
}

void save_keypoints(const std::string& path, const KeyPointSet& set) {
  std::ostringstream out;
  out << "# id x y scale orientation d0..d" << (kDescriptorSize - 1) << "\n";
  for (const KeyPoint& kp : set.points()) {
    out << kp.id << ' ' << format_double(kp.pos.x) << ' ' << format_double(kp.pos.y)
        << ' ' << format_double(kp.scale) << ' ' << format_double(kp.orientation);
    for (double d : kp.descriptor) out << ' ' << format_double(d);
    out << '\n';
  }
  write_text_file(path, out.str());
}

std::vector<Match> load_matches(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");

  std::vector<Match> matches;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const std::vector<std::string> toks = tokenize(body);
    if (toks.size() != 3) {
      throw ParseError(path, line_no,
                       "expected 3 fields (template_id scene_id distance), got " +
                           std::to_string(toks.size()));
    }
    Match m;
    m.template_id = parse_id(toks[0], path, line_no);
    m.scene_id = parse_id(toks[1], path, line_no);
    m.distance = parse_double(toks[2], path, line_no);
    if (m.distance < 0.0) {
      throw ParseError(path, line_no, "distance must be non-negative");
    }
    matches.push_back(m);
  }
  return matches;
}

void save_matches(const std::string& path, const std::vector<Match>& matches) {
  std::ostringstream out;
  out << "# template_id scene_id distance\n";
  for (const Match& m : matches) {
    out << m.template_id << ' ' << m.scene_id << ' ' << format_double(m.distance)
        << '\n';
  }
  write_text_file(path, out.str());
}

std::string detections_to_json(const std::vector<Detection>& detections,
                               const std::string& method) {
  json doc;
  doc["method"] = method;
  doc["detections"] = json::array();
  for (const Detection& det : detections) {
    json jdet;
    json jseed;
    jseed["label"] = det.seed.label();
    jseed["provenance"] = det.seed.provenance();
    jseed["matches"] = json::array();
    for (const Match& m : det.seed.matches()) {
      jseed["matches"].push_back({{"template_id", m.template_id},
                                  {"scene_id", m.scene_id},
                                  {"distance", m.distance}});
    }
    jdet["seeds"] = json::array({jseed});
    jdet["template_hull"] = polygon_to_json(det.template_hull);
    jdet["scene_hull"] = polygon_to_json(det.scene_hull);
    if (det.score_j.has_value()) {
      jdet["score_j"] = *det.score_j;
    } else {
      jdet["score_j"] = nullptr;
    }
    doc["detections"].push_back(jdet);
  }
  return doc.dump(2) + "\n";
}

void save_detections(const std::string& path, const std::vector<Detection>& detections,
                     const std::string& method) {
  write_text_file(path, detections_to_json(detections, method));
}

std::vector<Detection> load_detections(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  std::vector<Detection> detections;
  try {
    for (const auto& jdet : doc.at("detections")) {
      Detection det;
      std::vector<Match> matches;
      const auto& jseed = jdet.at("seeds").at(0);
      for (const auto& jm : jseed.at("matches")) {
        matches.push_back({jm.at("template_id").get<std::int64_t>(),
                           jm.at("scene_id").get<std::int64_t>(),
                           jm.at("distance").get<double>()});
      }
      det.seed = Seed(std::move(matches), jseed.value("label", std::string("d")));
      det.template_hull = polygon_from_json(jdet.at("template_hull"));
      det.scene_hull = polygon_from_json(jdet.at("scene_hull"));
      if (!jdet.at("score_j").is_null()) {
        det.score_j = jdet.at("score_j").get<double>();
      }
      detections.push_back(std::move(det));
    }
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return detections;
}

std::string ground_truth_to_json(const GroundTruth& truth) {
  json doc;
  doc["canvas"] = json::array({truth.canvas_width, truth.canvas_height});
  doc["instances"] = json::array();
  for (const GroundTruthInstance& inst : truth.instances) {
    json jinst;
    jinst["hull"] = polygon_to_json(inst.hull);
    json corr = json::array();
    for (const auto& [t, s] : inst.correspondence) {
      corr.push_back(json::array({t, s}));
    }
    jinst["correspondence"] = corr;
    doc["instances"].push_back(jinst);
  }
  return doc.dump(2) + "\n";
}

void save_ground_truth(const std::string& path, const GroundTruth& truth) {
  write_text_file(path, ground_truth_to_json(truth));
}

GroundTruth load_ground_truth(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  GroundTruth truth;
  try {
    truth.canvas_width = doc.at("canvas").at(0).get<int>();
    truth.canvas_height = doc.at("canvas").at(1).get<int>();
    for (const auto& jinst : doc.at("instances")) {
      GroundTruthInstance inst;
      inst.hull = polygon_from_json(jinst.at("hull"));
      for (const auto& jc : jinst.at("correspondence")) {
        inst.correspondence.emplace_back(jc.at(0).get<std::int64_t>(),
                                         jc.at(1).get<std::int64_t>());
      }
      truth.instances.push_back(std::move(inst));
    }
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (truth.canvas_width <= 0 || truth.canvas_height <= 0) {
    throw ValidationError(path + ": canvas dimensions must be positive");
  }
  return truth;
}

}  // namespace trigrow
