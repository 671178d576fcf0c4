#include "trigrow/growth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "trigrow/checks.hpp"
#include "trigrow/errors.hpp"
#include "trigrow/filtering.hpp"
#include "trigrow/geometry.hpp"
#include "trigrow/kdpartition.hpp"
#include "trigrow/log.hpp"
#include "trigrow/matching.hpp"

namespace trigrow {

namespace {

bool collinear(const Vec2& a, const Vec2& b, const Vec2& c) {
  return std::abs(orient2d(a, b, c)) <= kGeomEps;
}

double mean_dv(const Match& m0, const Match& m1, const Match& m2) {
  return (dv_pair_from_distance(m0.distance) + dv_pair_from_distance(m1.distance) +
          dv_pair_from_distance(m2.distance)) /
         3.0;
}

// Template ids to triangulate: every matched id plus the seed members, one id
// per exact position (members win, then the lowest id). Coincident keypoints
// cannot coexist in a triangulation.
std::vector<std::pair<std::int64_t, Vec2>> dedup_positions(
    const std::vector<std::pair<std::int64_t, Vec2>>& points,
    const Seed* members) {
  struct Entry {
    std::int64_t id;
    bool member;
  };
  std::map<std::pair<double, double>, Entry> best;
  for (const auto& [id, pos] : points) {
    const bool is_member = members != nullptr && members->contains_template(id);
    auto [it, inserted] = best.try_emplace({pos.x, pos.y}, Entry{id, is_member});
    if (inserted) continue;
    Entry& cur = it->second;
    if ((is_member && !cur.member) || (is_member == cur.member && id < cur.id)) {
      cur = Entry{id, is_member};
    }
  }
  std::vector<std::pair<std::int64_t, Vec2>> out;
  out.reserve(best.size());
  for (const auto& [pos, entry] : best) {
    out.emplace_back(entry.id, Vec2{pos.first, pos.second});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

struct RankedCandidate {
  double score = 0.0;
  double summed_distance = 0.0;
  IdTriple template_ids{};
  IdTriple scene_ids{};

  bool better_than(const RankedCandidate& o) const {
    if (score != o.score) return score > o.score;
    if (summed_distance != o.summed_distance) return summed_distance < o.summed_distance;
    if (template_ids != o.template_ids) return template_ids < o.template_ids;
    return scene_ids < o.scene_ids;
  }
};

IdTriple sorted_triple(std::int64_t a, std::int64_t b, std::int64_t c) {
  IdTriple t{a, b, c};
  std::sort(t.begin(), t.end());
  return t;
}

// Least-squares affine template->scene over all matches of a seed.
AffineMap fit_seed_affine(const Seed& seed, const KeyPointSet& templ,
                          const KeyPointSet& scene) {
  const std::size_t n = seed.size();
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd bx(n), by(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Match& m = seed.matches()[i];
    const Vec2& t = templ.at(m.template_id).pos;
    const Vec2& s = scene.at(m.scene_id).pos;
    a(i, 0) = t.x;
    a(i, 1) = t.y;
    a(i, 2) = 1.0;
    bx(i) = s.x;
    by(i) = s.y;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::VectorXd rx = qr.solve(bx);
  const Eigen::VectorXd ry = qr.solve(by);
  AffineMap map;
  map.a = {rx(0), rx(1), ry(0), ry(1)};
  map.t = {rx(2), ry(2)};
  return map;
}

}  // namespace

void GrowthConfig::validate() const {
  auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!(ratio_threshold > 0.0 && ratio_threshold <= 1.0)) {
    throw ValidationError("ratio_threshold must be in (0, 1]");
  }
  if (!in_unit(ccs_threshold) || !in_unit(rcs_threshold) ||
      !in_unit(coherence_threshold)) {
    throw ValidationError("score thresholds must be in (0, 1)");
  }
  if (kd_leaves < 1) throw ValidationError("kd_leaves must be >= 1");
  if (max_candidates_per_template_triplet < 1) {
    throw ValidationError("max_candidates_per_template_triplet must be >= 1");
  }
  if (expansion_neighbor_depth < 0) {
    throw ValidationError("expansion_neighbor_depth must be >= 0");
  }
  if (min_properly_expanded < 3) {
    throw ValidationError("min_properly_expanded must be >= 3");
  }
  if (max_rounds < 1) throw ValidationError("max_rounds must be >= 1");
}

MatchIndex index_matches(const std::vector<Match>& matches) {
  MatchIndex index;
  for (const Match& m : matches) index[m.template_id].push_back(m);
  for (auto& [id, list] : index) {
    std::sort(list.begin(), list.end(),
              [](const Match& a, const Match& b) { return a.scene_id < b.scene_id; });
  }
  return index;
}

std::vector<IdTriple> redundant_triplets(const TriangulationGraph& tri) {
  if (tri.triangles().empty()) {
    throw GeometryError("redundant_triplets requires at least one triangle");
  }
  std::set<IdTriple> triples;
  for (const IdTriangle& t : tri.triangles()) {
    triples.insert(t);
    for (int k = 0; k < 3; ++k) {
      const std::int64_t replaced = t[k];
      const std::int64_t keep0 = t[(k + 1) % 3];
      const std::int64_t keep1 = t[(k + 2) % 3];
      for (std::int64_t nb : tri.neighbors(replaced)) {
        if (nb == keep0 || nb == keep1) continue;
        if (collinear(tri.position(keep0), tri.position(keep1), tri.position(nb))) {
          continue;
        }
        triples.insert(sorted_triple(keep0, keep1, nb));
      }
    }
  }
  return {triples.begin(), triples.end()};
}

std::vector<Seed> compose_matching_triangles(const IdTriple& triple,
                                             const MatchIndex& by_template,
                                             std::size_t cap) {
  if (cap < 1) throw ValidationError("candidate cap must be >= 1");
  std::array<const std::vector<Match>*, 3> lists{};
  for (int k = 0; k < 3; ++k) {
    auto it = by_template.find(triple[k]);
    if (it == by_template.end()) return {};
    lists[k] = &it->second;
  }

  struct Combo {
    double summed;
    std::array<Match, 3> matches;
  };
  std::vector<Combo> combos;
  for (const Match& m0 : *lists[0]) {
    for (const Match& m1 : *lists[1]) {
      if (m1.scene_id == m0.scene_id) continue;
      for (const Match& m2 : *lists[2]) {
        if (m2.scene_id == m0.scene_id || m2.scene_id == m1.scene_id) continue;
        combos.push_back({m0.distance + m1.distance + m2.distance, {m0, m1, m2}});
      }
    }
  }
  std::stable_sort(combos.begin(), combos.end(),
                   [](const Combo& a, const Combo& b) { return a.summed < b.summed; });
  if (combos.size() > cap) combos.resize(cap);

  std::vector<Seed> out;
  out.reserve(combos.size());
  for (const Combo& c : combos) {
    out.emplace_back(std::vector<Match>{c.matches.begin(), c.matches.end()},
                     std::string());
  }
  return out;
}

std::vector<Seed> initial_seed_selection(const KeyPointSet& templ,
                                         const KeyPointSet& scene,
                                         const std::vector<Match>& matches,
                                         const GrowthConfig& cfg) {
  cfg.validate();
  if (matches.empty() || scene.empty()) return {};

  const MatchIndex by_template = index_matches(matches);
  std::vector<std::pair<std::int64_t, Vec2>> matched_points;
  matched_points.reserve(by_template.size());
  for (const auto& [id, list] : by_template) {
    matched_points.emplace_back(id, templ.at(id).pos);
  }
  matched_points = dedup_positions(matched_points, nullptr);
  if (matched_points.size() < 3) return {};

  TriangulationGraph tri;
  try {
    tri = delaunay(matched_points);
  } catch (const GeometryError&) {
    return {};  // all matched points collinear: nothing to seed from
  }

  struct LeafBest {
    RankedCandidate rank;
    std::vector<Match> matches;
    bool filled = false;
  };

  std::vector<std::pair<std::int64_t, Vec2>> scene_points;
  scene_points.reserve(scene.size());
  for (const KeyPoint& kp : scene.points()) scene_points.emplace_back(kp.id, kp.pos);
  const std::size_t leaves = std::min<std::size_t>(cfg.kd_leaves, scene_points.size());
  const KdPartition kd = kd_partition(scene_points, leaves);
  std::vector<LeafBest> best(kd.leaves.size());

  for (const IdTriple& triple : redundant_triplets(tri)) {
    for (Seed& cand : compose_matching_triangles(
             triple, by_template, cfg.max_candidates_per_template_triplet)) {
      TriangleProjection proj;
      ScoreVector sv;
      sv.dv = mean_dv(cand.matches()[0], cand.matches()[1], cand.matches()[2]);
      for (int k = 0; k < 3; ++k) {
        proj.tpl[k] = &templ.at(cand.matches()[k].template_id);
        proj.scn[k] = &scene.at(cand.matches()[k].scene_id);
      }
      double score = 0.0;
      try {
        sv.position = position_score(proj);
        sv.orientation = orientation_score(proj);
        sv.scale_ratio = scale_ratio_score(proj);
        score = ccs(sv);
      } catch (const GeometryError&) {
        continue;  // coincident scene points make the candidate unscorable
      }
      if (score < cfg.ccs_threshold) continue;

      RankedCandidate rank;
      rank.score = score;
      rank.summed_distance = cand.summed_distance();
      rank.template_ids = triple;
      rank.scene_ids = {cand.matches()[0].scene_id, cand.matches()[1].scene_id,
                        cand.matches()[2].scene_id};
      const std::int64_t lowest_scene =
          *std::min_element(rank.scene_ids.begin(), rank.scene_ids.end());
      const int leaf = kd.leaf_of(lowest_scene);
      LeafBest& slot = best[static_cast<std::size_t>(leaf)];
      if (!slot.filled || rank.better_than(slot.rank)) {
        slot.rank = rank;
        slot.matches = cand.matches();
        slot.filled = true;
      }
    }
  }

  std::vector<Seed> out;
  for (std::size_t k = 0; k < best.size(); ++k) {
    if (!best[k].filled) continue;
    out.emplace_back(best[k].matches, "leaf" + std::to_string(k));
  }
  return out;
}

namespace {

struct ForcedSide {
  std::int64_t a = 0;
  std::int64_t b = 0;
};

// Hull boundary as forced id segments. Points lying exactly on a side split
// it into a chain, so the triangulation stays valid on gridded data.
std::vector<ForcedSide> forced_hull_sides(
    const Polygon& hull, const std::vector<std::pair<std::int64_t, Vec2>>& points) {
  auto id_at = [&points](const Vec2& v) {
    std::int64_t found = -1;
    for (const auto& [id, pos] : points) {
      if (pos.x == v.x && pos.y == v.y && (found < 0 || id < found)) found = id;
    }
    if (found < 0) throw GeometryError("hull vertex missing from triangulation points");
    return found;
  };

  std::vector<ForcedSide> sides;
  const std::size_t n = hull.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& pa = hull[i];
    const Vec2& pb = hull[(i + 1) % n];
    const std::int64_t a = id_at(pa);
    const std::int64_t b = id_at(pb);

    struct OnSide {
      double along;
      std::int64_t id;
    };
    std::vector<OnSide> chain;
    const Vec2 dir = pb - pa;
    const double len2 = dir.squared_norm();
    for (const auto& [id, pos] : points) {
      if (id == a || id == b) continue;
      if (!point_on_segment(pa, pb, pos)) continue;
      chain.push_back({(pos - pa).dot(dir) / len2, id});
    }
    std::sort(chain.begin(), chain.end(), [](const OnSide& x, const OnSide& y) {
      if (x.along != y.along) return x.along < y.along;
      return x.id < y.id;
    });

    std::int64_t prev = a;
    for (const OnSide& s : chain) {
      sides.push_back({prev, s.id});
      prev = s.id;
    }
    sides.push_back({prev, b});
  }
  return sides;
}

}  // namespace

std::optional<Seed> expansion_step(const Seed& seed, const KeyPointSet& templ,
                                   const KeyPointSet& scene,
                                   const std::vector<Match>& matches,
                                   const GrowthConfig& cfg) {
  if (seed.size() < 3) throw ValidationError("expansion requires a seed of >= 3 matches");

  std::vector<Vec2> member_tpl, member_scn;
  for (const Match& m : seed.matches()) {
    member_tpl.push_back(templ.at(m.template_id).pos);
    member_scn.push_back(scene.at(m.scene_id).pos);
  }
  const Polygon hull_t = convex_hull(member_tpl);  // throws when degenerate
  const Polygon hull_s = convex_hull(member_scn);
  const Vec2 centroid_t = polygon_centroid(hull_t);

  // Matched template points, minus swallowed non-members, one id per position.
  std::vector<std::pair<std::int64_t, Vec2>> cdt_points;
  {
    std::set<std::int64_t> ids;
    for (const Match& m : matches) ids.insert(m.template_id);
    for (const Match& m : seed.matches()) ids.insert(m.template_id);
    for (std::int64_t id : ids) {
      const Vec2& pos = templ.at(id).pos;
      if (!seed.contains_template(id) && point_strictly_inside(hull_t, pos)) continue;
      cdt_points.emplace_back(id, pos);
    }
  }
  cdt_points = dedup_positions(cdt_points, &seed);

  const std::vector<ForcedSide> sides = forced_hull_sides(hull_t, cdt_points);
  std::vector<IdEdge> forced;
  forced.reserve(sides.size());
  for (const ForcedSide& s : sides) {
    forced.emplace_back(std::min(s.a, s.b), std::max(s.a, s.b));
  }
  const TriangulationGraph cdt = constrained_delaunay(cdt_points, forced);

  const MatchIndex by_template = index_matches(matches);

  struct Candidate {
    RankedCandidate rank;
    Match addition;
    std::size_t coherence_support = 0;
  };
  std::optional<Candidate> winner;

  for (const ForcedSide& side : sides) {
    const Match* ma = seed.match_for_template(side.a);
    const Match* mb = seed.match_for_template(side.b);
    if (ma == nullptr || mb == nullptr) continue;

    const Vec2& pa = cdt.position(side.a);
    const Vec2& pb = cdt.position(side.b);

    for (std::int64_t apex : cdt.opposite_vertices(side.a, side.b)) {
      if (classify_vertex_vs_side(pa, pb, centroid_t, cdt.position(apex)) !=
          HullSide::kOuterHalfplane) {
        continue;  // the triangle on the interior side of the hull
      }

      // Third-vertex pool: the apex plus its graph neighborhood.
      std::set<std::int64_t> thirds{apex};
      std::set<std::int64_t> frontier{apex};
      for (int depth = 0; depth < cfg.expansion_neighbor_depth; ++depth) {
        std::set<std::int64_t> next;
        for (std::int64_t v : frontier) {
          for (std::int64_t nb : cdt.neighbors(v)) {
            if (nb == side.a || nb == side.b) continue;
            if (thirds.insert(nb).second) next.insert(nb);
          }
        }
        frontier = std::move(next);
      }

      for (std::int64_t third : thirds) {
        if (seed.contains_template(third)) continue;
        auto lists = by_template.find(third);
        if (lists == by_template.end()) continue;

        TriangleProjection proj;
        proj.tpl = {&templ.at(side.a), &templ.at(side.b), &templ.at(third)};
        for (const Match& m : lists->second) {
          if (seed.contains_scene(m.scene_id)) continue;
          proj.scn = {&scene.at(ma->scene_id), &scene.at(mb->scene_id),
                      &scene.at(m.scene_id)};

          try {
            if (!non_intersection_check(hull_t, hull_s, proj)) continue;
            const CoherenceReport coherence = local_coherence_check(
                seed, proj, cdt, scene, cfg.coherence_threshold);
            if (!coherence.accepted) continue;
            ScoreVector sv;
            sv.dv = mean_dv(*ma, *mb, m);
            sv.scale_ratio = scale_ratio_score(proj);
            const double score = rcs(sv, cfg.rcs_mu);
            if (score < cfg.rcs_threshold) continue;

            Candidate cand;
            cand.rank.score = score;
            cand.rank.summed_distance = ma->distance + mb->distance + m.distance;
            cand.rank.template_ids = sorted_triple(side.a, side.b, third);
            cand.rank.scene_ids =
                sorted_triple(ma->scene_id, mb->scene_id, m.scene_id);
            cand.addition = m;
            cand.coherence_support = coherence.errors.size();
            if (!winner || cand.rank.better_than(winner->rank)) winner = cand;
          } catch (const GeometryError&) {
            continue;  // degenerate candidate geometry
          }
        }
      }
    }
  }

  if (!winner) return std::nullopt;
  log("  add " + std::to_string(winner->addition.template_id) + "->" +
      std::to_string(winner->addition.scene_id) + " support " +
      std::to_string(winner->coherence_support));
  Seed grown = seed;
  grown.add(winner->addition);
  return grown;
}

Seed expand_seed(Seed seed, const KeyPointSet& templ, const KeyPointSet& scene,
                 const std::vector<Match>& matches, const GrowthConfig& cfg) {
  const std::size_t max_steps = matches.size() + 8;
  for (std::size_t step = 0; step < max_steps; ++step) {
    std::optional<Seed> next;
    try {
      next = expansion_step(seed, templ, scene, matches, cfg);
    } catch (const GeometryError&) {
      return seed;  // degeneracy ends growth; keep what was gathered
    }
    if (!next) return seed;
    seed = std::move(*next);
  }
  return seed;
}

namespace {

Polygon seed_scene_hull(const Seed& seed, const KeyPointSet& scene) {
  std::vector<Vec2> pts;
  pts.reserve(seed.size());
  for (const Match& m : seed.matches()) pts.push_back(scene.at(m.scene_id).pos);
  return convex_hull(pts);
}

Polygon seed_template_hull(const Seed& seed, const KeyPointSet& templ) {
  std::vector<Vec2> pts;
  pts.reserve(seed.size());
  for (const Match& m : seed.matches()) pts.push_back(templ.at(m.template_id).pos);
  return convex_hull(pts);
}

bool seeds_mergeable(const Seed& a, const Seed& b, const KeyPointSet& scene) {
  if (!a.conflict_free_with(b)) return false;
  if (a.shares_match_with(b)) return true;
  return polygons_intersect(seed_scene_hull(a, scene), seed_scene_hull(b, scene));
}

void consume_seed(SeedPool& pool, const Seed& seed) {
  for (const Match& m : seed.matches()) {
    pool.consumed.insert({m.template_id, m.scene_id});
  }
}

// Members this far from the seed's own least-squares affine consensus are
// treated as leaps onto another object copy, not as deformation. Warps at the
// scale the coherence gate tolerates stay well under this; a jump to a second
// planted instance overshoots it by an order of magnitude.
constexpr double kMaxConsensusResidual = 50.0;

// The local checks can be fooled into a cross-instance addition when the
// coherence supporters happen to be nearly collinear with the shared side
// (the side-fixing affine then hides the transverse stretch). Such members
// are far outliers against the seed-wide consensus map: drop the worst one
// and refit until every residual is within bounds. Dropped matches stay
// unconsumed, so later rounds can regroup them where they belong.
Seed trim_inconsistent_members(Seed seed, const KeyPointSet& templ,
                               const KeyPointSet& scene,
                               std::vector<Match>* dropped_out = nullptr) {
  while (seed.size() > 3) {
    const AffineMap map = fit_seed_affine(seed, templ, scene);
    double worst = 0.0;
    std::size_t worst_index = 0;
    for (std::size_t i = 0; i < seed.size(); ++i) {
      const Match& m = seed.matches()[i];
      const double err =
          (scene.at(m.scene_id).pos - map.apply(templ.at(m.template_id).pos)).norm();
      if (err > worst) {
        worst = err;
        worst_index = i;
      }
    }
    if (worst <= kMaxConsensusResidual) break;

    std::vector<Match> kept = seed.matches();
    const Match dropped = kept[worst_index];
    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(worst_index));
    log("trim " + std::to_string(dropped.template_id) + "->" +
        std::to_string(dropped.scene_id) + " residual " + std::to_string(worst) +
        " from " + seed.label());
    if (dropped_out != nullptr) dropped_out->push_back(dropped);
    seed = Seed(std::move(kept), seed.label());
  }
  return seed;
}

// Trims a pool member against its own consensus and releases the dropped
// matches for later rounds, unless another pool seed still holds them.
void trim_pool_seed(SeedPool& pool, std::size_t index, const KeyPointSet& templ,
                    const KeyPointSet& scene) {
  std::vector<Match> dropped;
  pool.seeds[index] =
      trim_inconsistent_members(std::move(pool.seeds[index]), templ, scene, &dropped);
  for (const Match& m : dropped) {
    bool held = false;
    for (const Seed& s : pool.seeds) {
      for (const Match& sm : s.matches()) {
        if (sm.template_id == m.template_id && sm.scene_id == m.scene_id) {
          held = true;
          break;
        }
      }
      if (held) break;
    }
    if (!held) pool.consumed.erase({m.template_id, m.scene_id});
  }
}

// A merged seed is re-trimmed immediately: merging joins match sets on hull
// overlap alone, so one contaminated fragment would otherwise smuggle a
// cross-instance member past the expansion-time consensus check and stretch
// the pooled hull over a second object copy.
void merge_pool_to_fixpoint(SeedPool& pool, const KeyPointSet& templ,
                            const KeyPointSet& scene) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < pool.seeds.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < pool.seeds.size(); ++j) {
        if (!seeds_mergeable(pool.seeds[i], pool.seeds[j], scene)) continue;
        pool.seeds[i].merge(pool.seeds[j]);
        pool.seeds.erase(pool.seeds.begin() + static_cast<std::ptrdiff_t>(j));
        trim_pool_seed(pool, i, templ, scene);
        changed = true;
        break;
      }
    }
  }
}

// Leftover matches that fall inside a seed's hulls on both sides and agree
// with its least-squares affine map are folded in after merging; growth can
// strand such points when the hull sweeps past them between steps.
void absorb_leftovers(SeedPool& pool, const std::vector<Match>& all_matches,
                      const KeyPointSet& templ, const KeyPointSet& scene) {
  if (pool.seeds.empty()) return;

  const double max_error = 10.0 + 2.0 * std::log(3.0 / 7.0);
  struct Region {
    Polygon hull_t, hull_s;
    AffineMap map;
  };
  std::vector<Region> regions;
  regions.reserve(pool.seeds.size());
  for (const Seed& s : pool.seeds) {
    regions.push_back({seed_template_hull(s, templ), seed_scene_hull(s, scene),
                       fit_seed_affine(s, templ, scene)});
  }

  std::vector<Match> leftovers;
  for (const Match& m : all_matches) {
    if (!pool.is_consumed(m)) leftovers.push_back(m);
  }
  std::sort(leftovers.begin(), leftovers.end(), [](const Match& a, const Match& b) {
    if (a.template_id != b.template_id) return a.template_id < b.template_id;
    return a.scene_id < b.scene_id;
  });

  for (const Match& m : leftovers) {
    const Vec2& tp = templ.at(m.template_id).pos;
    const Vec2& sp = scene.at(m.scene_id).pos;
    for (std::size_t k = 0; k < pool.seeds.size(); ++k) {
      Seed& s = pool.seeds[k];
      if (s.contains_template(m.template_id) || s.contains_scene(m.scene_id)) continue;
      const Region& r = regions[k];
      if (!point_in_polygon(r.hull_t, tp) || !point_in_polygon(r.hull_s, sp)) continue;
      if ((sp - r.map.apply(tp)).norm() > max_error) continue;
      s.add(m);
      pool.consumed.insert({m.template_id, m.scene_id});
      break;
    }
  }
}

}  // namespace

std::vector<Detection> detect(const KeyPointSet& templ, const KeyPointSet& scene,
                              const GrowthConfig& cfg, const Raster* template_image,
                              const Raster* scene_image) {
  cfg.validate();
  if (templ.empty() || scene.empty()) return {};

  const std::vector<Match> all_matches =
      match_sets(templ, scene, cfg.ratio_threshold);
  log("ratio test kept " + std::to_string(all_matches.size()) + " matches");
  if (all_matches.empty()) return {};

  SeedPool pool;
  for (std::size_t round = 1; round <= cfg.max_rounds; ++round) {
    std::vector<Match> remaining;
    for (const Match& m : all_matches) {
      if (!pool.is_consumed(m)) remaining.push_back(m);
    }
    if (remaining.size() < 3) break;

    const std::vector<Seed> selected =
        initial_seed_selection(templ, scene, remaining, cfg);
    if (selected.empty()) break;
    log("round " + std::to_string(round) + ": " +
        std::to_string(selected.size()) + " initial seeds from " +
        std::to_string(remaining.size()) + " remaining matches");

    const std::size_t consumed_before = pool.consumed.size();
    for (const Seed& sel : selected) {
      Seed seed(sel.matches(), "r" + std::to_string(round) + "." + sel.label());
      if (log_enabled()) {
        std::string triple;
        for (const Match& m : seed.matches()) {
          triple += " " + std::to_string(m.template_id) + "->" +
                    std::to_string(m.scene_id);
        }
        log("initial seed " + seed.label() + triple);
      }
      Seed expanded = expand_seed(std::move(seed), templ, scene, remaining, cfg);
      expanded = trim_inconsistent_members(std::move(expanded), templ, scene);
      log("seed " + expanded.label() + " expanded to " +
          std::to_string(expanded.size()) + " matches");

      if (expanded.size() >= cfg.min_properly_expanded) {
        pool.seeds.push_back(std::move(expanded));
        consume_seed(pool, pool.seeds.back());
        merge_pool_to_fixpoint(pool, templ, scene);
        continue;
      }
      // Undersized result: keep it only when it extends an existing seed.
      try {
        for (std::size_t k = 0; k < pool.seeds.size(); ++k) {
          if (seeds_mergeable(pool.seeds[k], expanded, scene)) {
            pool.seeds[k].merge(expanded);
            consume_seed(pool, expanded);
            trim_pool_seed(pool, k, templ, scene);
            merge_pool_to_fixpoint(pool, templ, scene);
            break;
          }
        }
      } catch (const GeometryError&) {
        // the undersized seed has a degenerate hull; drop it
      }
    }
    if (pool.consumed.size() == consumed_before) break;
  }

  // Merge-time trims can leave a pool member below the proper-expansion
  // size; such remnants are no better than the undersized seeds the rounds
  // already refused. Release their matches so absorption can still place
  // the agreeing ones into the surviving seeds.
  for (std::size_t k = pool.seeds.size(); k-- > 0;) {
    if (pool.seeds[k].size() >= cfg.min_properly_expanded) continue;
    const Seed remnant = std::move(pool.seeds[k]);
    pool.seeds.erase(pool.seeds.begin() + static_cast<std::ptrdiff_t>(k));
    log("dropping trimmed-down pool seed " + remnant.label() + " with " +
        std::to_string(remnant.size()) + " matches");
    for (const Match& m : remnant.matches()) {
      bool held = false;
      for (const Seed& s : pool.seeds) {
        for (const Match& sm : s.matches()) {
          if (sm.template_id == m.template_id && sm.scene_id == m.scene_id) {
            held = true;
            break;
          }
        }
        if (held) break;
      }
      if (!held) pool.consumed.erase({m.template_id, m.scene_id});
    }
  }

  const std::size_t consumed_before_absorb = pool.consumed.size();
  absorb_leftovers(pool, all_matches, templ, scene);
  log("absorbed " + std::to_string(pool.consumed.size() - consumed_before_absorb) +
      " leftover matches into " + std::to_string(pool.seeds.size()) + " seeds");
  if (log_enabled()) {
    for (const Seed& s : pool.seeds) {
      Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
      for (const Match& m : s.matches()) {
        const Vec2& p = scene.at(m.scene_id).pos;
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y);
      }
      log("pool seed " + s.label() + ": " + std::to_string(s.size()) +
          " matches, scene bbox [" + std::to_string(lo.x) + "," +
          std::to_string(lo.y) + "]..[" + std::to_string(hi.x) + "," +
          std::to_string(hi.y) + "]");
    }
  }

  return photometric_filtering(pool.seeds, templ, scene, template_image,
                               scene_image);
}

}  // namespace trigrow
