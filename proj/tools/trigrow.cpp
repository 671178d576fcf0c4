// trigrow command line: detect / baseline / synth / eval / dump-mesh.
// Exit codes: 0 success, 1 parse or validation failure, 2 I/O failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trigrow/config.hpp"
#include "trigrow/errors.hpp"
#include "trigrow/eval.hpp"
#include "trigrow/geometry.hpp"
#include "trigrow/growth.hpp"
#include "trigrow/io.hpp"
#include "trigrow/log.hpp"
#include "trigrow/ransac.hpp"
#include "trigrow/raster.hpp"
#include "trigrow/svg.hpp"
#include "trigrow/synth.hpp"
#include "trigrow/triangulation.hpp"

namespace {

using namespace trigrow;

struct DetectArgs {
  std::string template_path;
  std::string scene_path;
  std::string template_image;
  std::string scene_image;
  std::string config_path;
  std::string out_path = "detections.json";
  std::string svg_path;
  std::size_t kd_leaves = 0;
  double ccs_threshold = -1.0;
  double rcs_threshold = -1.0;
  std::string rcs_mu;
  double ratio = -1.0;
};

struct BaselineArgs {
  std::string template_path;
  std::string scene_path;
  std::string scene_image;
  std::string out_path = "detections.json";
  std::string svg_path;
  double ratio = 0.8;
  int iterations = 2000;
  double inlier_threshold = 3.0;
  std::size_t min_inliers = 10;
  std::uint32_t seed = 12345;
};

struct SynthArgs {
  std::string template_path;
  std::string config_path;
  std::string out_path = "scene.keypoints";
  std::string truth_path = "truth.json";
  std::optional<std::uint64_t> seed;
};

struct EvalArgs {
  std::string detections_path;
  std::string truth_path;
  std::string out_path;
};

struct MeshArgs {
  std::string template_path;
  std::string out_path = "mesh.svg";
};

void print_summary(const std::vector<Detection>& detections) {
  std::printf("%-4s %-8s %-10s %s\n", "#", "matches", "j", "seed");
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const Detection& d = detections[i];
    std::string j = "-";
    if (d.score_j.has_value()) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.2f", *d.score_j);
      j = buf;
    }
    std::printf("%-4zu %-8zu %-10s %s\n", i + 1, d.seed.size(), j.c_str(),
                d.seed.label().c_str());
  }
  std::printf("%zu detection%s\n", detections.size(),
              detections.size() == 1 ? "" : "s");
}

int cmd_detect(const DetectArgs& args) {
  GrowthConfig cfg;
  if (!args.config_path.empty()) {
    cfg = growth_config_from(load_config(args.config_path));
  }
  if (args.kd_leaves > 0) cfg.kd_leaves = args.kd_leaves;
  if (args.ccs_threshold >= 0.0) cfg.ccs_threshold = args.ccs_threshold;
  if (args.rcs_threshold >= 0.0) cfg.rcs_threshold = args.rcs_threshold;
  if (args.ratio >= 0.0) cfg.ratio_threshold = args.ratio;
  if (!args.rcs_mu.empty()) {
    if (args.rcs_mu == "paper") {
      cfg.rcs_mu = RcsMu::kPaper;
    } else if (args.rcs_mu == "corrected") {
      cfg.rcs_mu = RcsMu::kCorrected;
    } else {
      throw ValidationError("--rcs-mu must be 'paper' or 'corrected'");
    }
  }

  const KeyPointSet templ = load_keypoints(args.template_path, "template");
  const KeyPointSet scene = load_keypoints(args.scene_path, "scene");

  std::optional<Raster> template_img, scene_img;
  if (!args.template_image.empty()) template_img = load_raster(args.template_image);
  if (!args.scene_image.empty()) scene_img = load_raster(args.scene_image);

  const std::vector<Detection> detections =
      detect(templ, scene, cfg, template_img ? &*template_img : nullptr,
             scene_img ? &*scene_img : nullptr);

  save_detections(args.out_path, detections, "growth");
  log("wrote " + args.out_path);
  if (!args.svg_path.empty()) {
    write_text_file(args.svg_path, detection_svg(templ, scene, detections));
    log("wrote " + args.svg_path);
  }
  print_summary(detections);
  return 0;
}

int cmd_baseline(const BaselineArgs& args) {
  RansacConfig cfg;
  cfg.iterations = args.iterations;
  cfg.inlier_threshold = args.inlier_threshold;
  cfg.min_inliers = args.min_inliers;
  cfg.seed = args.seed;

  const KeyPointSet templ = load_keypoints(args.template_path, "template");
  const KeyPointSet scene = load_keypoints(args.scene_path, "scene");

  std::optional<Raster> scene_img;
  if (!args.scene_image.empty()) scene_img = load_raster(args.scene_image);

  const std::vector<Detection> detections = baseline_detect(
      templ, scene, cfg, args.ratio, scene_img ? &*scene_img : nullptr);

  save_detections(args.out_path, detections, "baseline");
  log("wrote " + args.out_path);
  if (!args.svg_path.empty()) {
    write_text_file(args.svg_path, detection_svg(templ, scene, detections));
    log("wrote " + args.svg_path);
  }
  print_summary(detections);
  return 0;
}

int cmd_synth(const SynthArgs& args) {
  SynthSpec spec = synth_spec_from(load_config(args.config_path));
  if (args.seed.has_value()) spec.seed = *args.seed;

  const KeyPointSet templ = load_keypoints(args.template_path, "template");
  const auto [scene, truth] = generate_scene(templ, spec);

  save_keypoints(args.out_path, scene);
  save_ground_truth(args.truth_path, truth);
  log("wrote " + args.out_path + " and " + args.truth_path);
  std::printf("%zu scene keypoints, %zu instances\n", scene.size(),
              truth.instances.size());
  return 0;
}

int cmd_eval(const EvalArgs& args) {
  const std::vector<Detection> detections = load_detections(args.detections_path);
  const GroundTruth truth = load_ground_truth(args.truth_path);

  const EvalReport report = evaluate(detections, truth);
  if (!args.out_path.empty()) {
    write_text_file(args.out_path, eval_report_to_json(report));
    log("wrote " + args.out_path);
  }
  std::fputs(eval_report_table(report).c_str(), stdout);
  return 0;
}

int cmd_dump_mesh(const MeshArgs& args) {
  const KeyPointSet set = load_keypoints(args.template_path, "mesh");
  std::vector<std::pair<std::int64_t, Vec2>> points;
  points.reserve(set.size());
  for (const KeyPoint& kp : set.points()) points.emplace_back(kp.id, kp.pos);
  const TriangulationGraph tri = delaunay(points);
  write_text_file(args.out_path, mesh_svg(tri));
  log("wrote " + args.out_path);
  std::printf("%zu vertices, %zu triangles\n", tri.vertices().size(),
              tri.triangles().size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Object detection by triangulation-guided match grouping"};
  app.require_subcommand(1);

  DetectArgs da;
  CLI::App* detect_cmd =
      app.add_subcommand("detect", "Grow and filter match seeds");
  detect_cmd->add_option("--template", da.template_path, "Template keypoint file")
      ->required();
  detect_cmd->add_option("--scene", da.scene_path, "Scene keypoint file")
      ->required();
  detect_cmd->add_option("--template-image", da.template_image,
                         "Template raster (PGM/PPM) for photometric filtering");
  detect_cmd->add_option("--scene-image", da.scene_image,
                         "Scene raster (PGM/PPM) for photometric filtering");
  detect_cmd->add_option("--config", da.config_path, "Growth config file");
  detect_cmd->add_option("--out", da.out_path, "Detections JSON output path");
  detect_cmd->add_option("--svg", da.svg_path, "Overlay SVG output path");
  detect_cmd->add_option("--kd-leaves", da.kd_leaves, "Leaves per selection round");
  detect_cmd->add_option("--ccs-threshold", da.ccs_threshold,
                         "Initial-seed score threshold");
  detect_cmd->add_option("--rcs-threshold", da.rcs_threshold,
                         "Expansion score threshold");
  detect_cmd->add_option("--rcs-mu", da.rcs_mu, "'paper' or 'corrected'");
  detect_cmd->add_option("--ratio", da.ratio, "Ratio test threshold");

  BaselineArgs ba;
  CLI::App* baseline_cmd =
      app.add_subcommand("baseline", "RANSAC homography detector");
  baseline_cmd->add_option("--template", ba.template_path, "Template keypoint file")
      ->required();
  baseline_cmd->add_option("--scene", ba.scene_path, "Scene keypoint file")
      ->required();
  baseline_cmd->add_option("--scene-image", ba.scene_image,
                           "Scene raster; hulls are clipped to it");
  baseline_cmd->add_option("--out", ba.out_path, "Detections JSON output path");
  baseline_cmd->add_option("--svg", ba.svg_path, "Overlay SVG output path");
  baseline_cmd->add_option("--ratio", ba.ratio, "Ratio test threshold");
  baseline_cmd->add_option("--iterations", ba.iterations, "RANSAC iterations");
  baseline_cmd->add_option("--inlier-threshold", ba.inlier_threshold,
                           "Inlier reprojection threshold (px)");
  baseline_cmd->add_option("--min-inliers", ba.min_inliers,
                           "Minimum consensus size");
  baseline_cmd->add_option("--seed", ba.seed, "RANSAC RNG seed");

  SynthArgs sa;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Generate a synthetic scene from a template");
  synth_cmd->add_option("--template", sa.template_path, "Template keypoint file")
      ->required();
  synth_cmd->add_option("--config", sa.config_path, "Scene spec file")->required();
  synth_cmd->add_option("--out", sa.out_path, "Scene keypoint output path");
  synth_cmd->add_option("--truth", sa.truth_path, "Ground truth JSON output path");
  std::uint64_t seed_value = 0;
  CLI::Option* seed_opt =
      synth_cmd->add_option("--seed", seed_value, "Override the spec's seed");

  EvalArgs ea;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Score detections against ground truth");
  eval_cmd->add_option("--detections", ea.detections_path, "Detections JSON")
      ->required();
  eval_cmd->add_option("--truth", ea.truth_path, "Ground truth JSON")->required();
  eval_cmd->add_option("--out", ea.out_path, "Report JSON output path");

  MeshArgs ma;
  CLI::App* mesh_cmd =
      app.add_subcommand("dump-mesh", "Write a keypoint set's Delaunay mesh as SVG");
  mesh_cmd->add_option("--template", ma.template_path, "Keypoint file")->required();
  mesh_cmd->add_option("--out", ma.out_path, "SVG output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (detect_cmd->parsed()) return cmd_detect(da);
    if (baseline_cmd->parsed()) return cmd_baseline(ba);
    if (synth_cmd->parsed()) {
      if (seed_opt->count() > 0) sa.seed = seed_value;
      return cmd_synth(sa);
    }
    if (eval_cmd->parsed()) return cmd_eval(ea);
    if (mesh_cmd->parsed()) return cmd_dump_mesh(ma);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
