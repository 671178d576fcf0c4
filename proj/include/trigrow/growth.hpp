#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "trigrow/scores.hpp"
#include "trigrow/triangulation.hpp"
#include "trigrow/types.hpp"

namespace trigrow {

class Raster;

struct GrowthConfig {
  double ratio_threshold = 0.8;
  double ccs_threshold = 0.6;
  double rcs_threshold = 0.6;
  double coherence_threshold = 0.7;
  std::size_t kd_leaves = 5;
  std::size_t max_candidates_per_template_triplet = 32;
  int expansion_neighbor_depth = 1;
  // Expanded seeds below this size are dropped (or rescued by merging into an
  // overlapping pool seed) instead of becoming detections on their own.
  std::size_t min_properly_expanded = 6;
  std::size_t max_rounds = 64;
  RcsMu rcs_mu = RcsMu::kCorrected;

  // Throws ValidationError when a field is out of range.
  void validate() const;
};

// Accumulates expanded seeds across detection rounds. Seeds never share a
// match; overlapping conflict-free seeds are merged at admission.
struct SeedPool {
  std::vector<Seed> seeds;
  std::set<std::pair<std::int64_t, std::int64_t>> consumed;  // (template, scene)

  bool is_consumed(const Match& m) const {
    return consumed.count({m.template_id, m.scene_id}) > 0;
  }
};

using IdTriple = std::array<std::int64_t, 3>;  // sorted ascending

// Matches grouped by template id; each group sorted by scene id.
using MatchIndex = std::map<std::int64_t, std::vector<Match>>;
MatchIndex index_matches(const std::vector<Match>& matches);

// Every triangle of the graph plus all triples obtained by swapping one
// vertex for one of its graph neighbors. Deduplicated, collinear triples
// dropped, sorted lexicographically.
std::vector<IdTriple> redundant_triplets(const TriangulationGraph& tri);

// Cartesian product of the three template ids' match lists, skipping
// combinations that reuse a scene id, capped by ascending summed descriptor
// distance. Seeds are unlabeled three-match candidates.
std::vector<Seed> compose_matching_triangles(const IdTriple& triple,
                                             const MatchIndex& by_template,
                                             std::size_t cap);

// Delaunay over the matched template keypoints, redundant triple expansion,
// candidate composition, ccs scoring, then per-kd-leaf selection of the best
// candidate (a candidate belongs to the leaf holding its lowest scene id).
// Returns up to cfg.kd_leaves seeds labeled "leaf<k>"; empty when nothing
// scores above cfg.ccs_threshold or fewer than 3 template points matched.
std::vector<Seed> initial_seed_selection(const KeyPointSet& templ,
                                         const KeyPointSet& scene,
                                         const std::vector<Match>& matches,
                                         const GrowthConfig& cfg);

// One growth attempt: drops non-member template keypoints strictly inside
// the seed's template hull, re-triangulates the rest with the hull boundary
// forced, enumerates adjacent matching triangles whose shared side is pinned
// through the seed, filters them through the geometric checks, and adds the
// best rcs survivor's new correspondence. Returns std::nullopt when nothing
// survives. Throws GeometryError when the seed hull is degenerate.
std::optional<Seed> expansion_step(const Seed& seed, const KeyPointSet& templ,
                                   const KeyPointSet& scene,
                                   const std::vector<Match>& matches,
                                   const GrowthConfig& cfg);

// Repeats expansion_step until no growth happens.
Seed expand_seed(Seed seed, const KeyPointSet& templ, const KeyPointSet& scene,
                 const std::vector<Match>& matches, const GrowthConfig& cfg);

// Full detection: ratio-test matching, repeated multi-seed selection and
// expansion on the shrinking match set, pool merging, leftover absorption,
// and photometric filtering (image-based when both rasters are given,
// cardinality-based otherwise).
std::vector<Detection> detect(const KeyPointSet& templ, const KeyPointSet& scene,
                              const GrowthConfig& cfg,
                              const Raster* template_image = nullptr,
                              const Raster* scene_image = nullptr);

}  // namespace trigrow
