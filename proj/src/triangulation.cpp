#include "trigrow/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace trigrow {

namespace {

// Relative zero filter for the incircle determinant: terms grow with the 4th
// power of the coordinate magnitude, so a fixed absolute epsilon would be
// scale-dependent.
constexpr double kRelTol = 1e-12;

struct InCircle {
  double value = 0.0;  // oriented so that > 0 means strictly inside
  double bound = 0.0;  // magnitude of the contributing terms
  bool inside() const { return value > kRelTol * bound; }
  bool outside() const { return value < -kRelTol * bound; }
  bool cocircular() const { return !inside() && !outside(); }
};

InCircle incircle_oriented(const Vec2& a, const Vec2& b, const Vec2& c,
                           const Vec2& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double ad = adx * adx + ady * ady;
  const double bd = bdx * bdx + bdy * bdy;
  const double cd = cdx * cdx + cdy * cdy;
  InCircle r;
  r.value = adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
            ad * (bdx * cdy - bdy * cdx);
  r.bound = std::abs(adx) * (std::abs(bdy) * cd + bd * std::abs(cdy)) +
            std::abs(ady) * (std::abs(bdx) * cd + bd * std::abs(cdx)) +
            ad * (std::abs(bdx) * std::abs(cdy) + std::abs(bdy) * std::abs(cdx));
  const double orient = orient2d(a, b, c);
  if (orient < 0.0) r.value = -r.value;
  return r;
}

}  // namespace

// Incremental Delaunay/CDT builder working on local vertex indices. Lives in
// the library namespace (not file scope) because the graph befriends it.
class Triangulator {
 public:
  explicit Triangulator(const std::vector<std::pair<std::int64_t, Vec2>>& points) {
    if (points.size() < 3) {
      throw GeometryError("triangulation needs at least 3 points");
    }
    std::vector<std::pair<std::int64_t, Vec2>> sorted = points;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i].first == sorted[i - 1].first) {
        throw ValidationError("duplicate point id " +
                              std::to_string(sorted[i].first));
      }
    }
    for (const auto& [id, pos] : sorted) {
      ids_.push_back(id);
      pts_.push_back(pos);
    }
  }

  void build_delaunay() {
    add_super_triangle();
    for (int i = 0; i < static_cast<int>(ids_.size()); ++i) insert_point(i);
    remove_super_triangles();
    if (live_triangle_count() == 0) {
      throw GeometryError("triangulation is degenerate: points are collinear");
    }
    normalize_cocircular();
  }

  void insert_constraints(const std::vector<IdEdge>& segments) {
    std::vector<std::pair<int, int>> local;
    for (const IdEdge& seg : segments) {
      const int a = local_index(seg.first);
      const int b = local_index(seg.second);
      if (a < 0 || b < 0) {
        throw GeometryError("forced segment endpoint id is not an input point");
      }
      if (a == b) throw GeometryError("forced segment endpoints coincide");
      local.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(local.begin(), local.end());
    local.erase(std::unique(local.begin(), local.end()), local.end());

    // No third point may lie on a forced segment, and forced segments may not
    // cross each other.
    for (const auto& [a, b] : local) {
      for (int i = 0; i < static_cast<int>(ids_.size()); ++i) {
        if (i == a || i == b) continue;
        if (point_on_segment(pts_[a], pts_[b], pts_[i])) {
          throw GeometryError("input point id " + std::to_string(ids_[i]) +
                              " lies on a forced segment");
        }
      }
    }
    for (std::size_t i = 0; i < local.size(); ++i) {
      for (std::size_t j = i + 1; j < local.size(); ++j) {
        if (segments_properly_cross(pts_[local[i].first], pts_[local[i].second],
                                    pts_[local[j].first], pts_[local[j].second])) {
          throw GeometryError("forced segments cross each other");
        }
      }
    }

    for (const auto& [a, b] : local) insert_segment(a, b);
    lawson_global();
    normalize_cocircular();
  }

  TriangulationGraph finish() const {
    TriangulationGraph g;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      if (!alive_[t]) continue;
      IdTriangle tri{ids_[tris_[t][0]], ids_[tris_[t][1]], ids_[tris_[t][2]]};
      std::sort(tri.begin(), tri.end());
      g.triangles_.push_back(tri);
      for (int k = 0; k < 3; ++k) {
        const std::int64_t u = tri[k];
        const std::int64_t v = tri[(k + 1) % 3];
        g.edges_.insert({std::min(u, v), std::max(u, v)});
      }
    }
    std::sort(g.triangles_.begin(), g.triangles_.end());
    for (std::size_t i = 0; i < ids_.size(); ++i) g.vertices_[ids_[i]] = pts_[i];
    for (const auto& [a, b] : constrained_) {
      const IdEdge e{std::min(ids_[a], ids_[b]), std::max(ids_[a], ids_[b])};
      g.constrained_.insert(e);
    }
    for (const IdEdge& e : g.edges_) {
      g.adjacency_[e.first].push_back(e.second);
      g.adjacency_[e.second].push_back(e.first);
    }
    for (auto& [id, nbrs] : g.adjacency_) std::sort(nbrs.begin(), nbrs.end());
    // Hull vertices: endpoints of edges bordering exactly one triangle.
    std::map<IdEdge, int> edge_use;
    for (const IdTriangle& tri : g.triangles_) {
      for (int k = 0; k < 3; ++k) {
        const std::int64_t u = tri[k];
        const std::int64_t v = tri[(k + 1) % 3];
        edge_use[{std::min(u, v), std::max(u, v)}]++;
      }
    }
    std::set<std::int64_t> hull_ids;
    for (const auto& [e, uses] : edge_use) {
      if (uses == 1) {
        hull_ids.insert(e.first);
        hull_ids.insert(e.second);
      }
    }
    g.hull_vertices_ = hull_ids.size();
    return g;
  }

 private:
  using Edge = std::pair<int, int>;  // normalized local indices

  struct EdgeSlot {
    std::array<int, 2> t{-1, -1};
  };

  static Edge make_edge(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

  int local_index(std::int64_t id) const {
    const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return -1;
    return static_cast<int>(it - ids_.begin());
  }

  bool is_super(int v) const { return v >= static_cast<int>(ids_.size()); }

  void add_super_triangle() {
    double lo_x = pts_[0].x, hi_x = pts_[0].x, lo_y = pts_[0].y, hi_y = pts_[0].y;
    for (const Vec2& p : pts_) {
      lo_x = std::min(lo_x, p.x);
      hi_x = std::max(hi_x, p.x);
      lo_y = std::min(lo_y, p.y);
      hi_y = std::max(hi_y, p.y);
    }
    const double cx = 0.5 * (lo_x + hi_x);
    const double cy = 0.5 * (lo_y + hi_y);
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1.0});
    const double m = 1e6 * span;
    const int s0 = static_cast<int>(pts_.size());
    pts_.push_back({cx - 2.0 * m, cy - m});
    pts_.push_back({cx + 2.0 * m, cy - m});
    pts_.push_back({cx, cy + 2.0 * m});
    add_triangle(s0, s0 + 1, s0 + 2);
  }

  int add_triangle(int a, int b, int c) {
    if (orient2d(pts_[a], pts_[b], pts_[c]) < 0.0) std::swap(b, c);
    int idx;
    if (!free_.empty()) {
      idx = free_.back();
      free_.pop_back();
      tris_[idx] = {a, b, c};
      alive_[idx] = true;
    } else {
      idx = static_cast<int>(tris_.size());
      tris_.push_back({a, b, c});
      alive_.push_back(true);
    }
    for (int k = 0; k < 3; ++k) {
      register_edge(make_edge(tris_[idx][k], tris_[idx][(k + 1) % 3]), idx);
    }
    return idx;
  }

  void remove_triangle(int idx) {
    for (int k = 0; k < 3; ++k) {
      unregister_edge(make_edge(tris_[idx][k], tris_[idx][(k + 1) % 3]), idx);
    }
    alive_[idx] = false;
    free_.push_back(idx);
  }

  void register_edge(const Edge& e, int tri) {
    auto& slot = edge_tris_[e].t;
    if (slot[0] < 0) {
      slot[0] = tri;
    } else if (slot[1] < 0) {
      slot[1] = tri;
    } else {
      throw GeometryError("internal triangulation error: edge used three times");
    }
  }

  void unregister_edge(const Edge& e, int tri) {
    auto it = edge_tris_.find(e);
    if (it == edge_tris_.end()) return;
    auto& slot = it->second.t;
    if (slot[0] == tri) {
      slot[0] = slot[1];
      slot[1] = -1;
    } else if (slot[1] == tri) {
      slot[1] = -1;
    }
    if (slot[0] < 0) edge_tris_.erase(it);
  }

  // Triangle index across edge e from triangle `from`, or -1.
  int across(const Edge& e, int from) const {
    const auto it = edge_tris_.find(e);
    if (it == edge_tris_.end()) return -1;
    if (it->second.t[0] == from) return it->second.t[1];
    if (it->second.t[1] == from) return it->second.t[0];
    return -1;
  }

  int third_vertex(int tri, const Edge& e) const {
    for (int v : tris_[tri]) {
      if (v != e.first && v != e.second) return v;
    }
    return -1;
  }

  std::size_t live_triangle_count() const {
    std::size_t n = 0;
    for (bool a : alive_) n += a ? 1 : 0;
    return n;
  }

  void insert_point(int pi) {
    const Vec2& p = pts_[pi];
    int containing = -1;
    int on_edge_k = -1;
    for (std::size_t t = 0; t < tris_.size() && containing < 0; ++t) {
      if (!alive_[t]) continue;
      int zero_k = -1;
      bool inside = true;
      for (int k = 0; k < 3 && inside; ++k) {
        const Vec2& a = pts_[tris_[t][k]];
        const Vec2& b = pts_[tris_[t][(k + 1) % 3]];
        const double o = orient2d(a, b, p);
        const double bound = (std::abs(b.x - a.x) + std::abs(p.x - a.x)) *
                                 (std::abs(b.y - a.y) + std::abs(p.y - a.y)) +
                             1.0;
        if (o < -kRelTol * bound) {
          inside = false;
        } else if (o <= kRelTol * bound) {
          if (zero_k >= 0) {
            // On two edges at once: coincides with a vertex.
            throw GeometryError("coincident points at id " +
                                std::to_string(ids_[pi]));
          }
          zero_k = k;
        }
      }
      if (inside) {
        containing = static_cast<int>(t);
        on_edge_k = zero_k;
      }
    }
    if (containing < 0) {
      throw GeometryError("internal triangulation error: point not located");
    }

    std::vector<Edge> suspect;
    const auto tri = tris_[containing];
    if (on_edge_k < 0) {
      remove_triangle(containing);
      add_triangle(tri[0], tri[1], pi);
      add_triangle(tri[1], tri[2], pi);
      add_triangle(tri[2], tri[0], pi);
      suspect = {make_edge(tri[0], tri[1]), make_edge(tri[1], tri[2]),
                 make_edge(tri[2], tri[0])};
    } else {
      const int a = tri[on_edge_k];
      const int b = tri[(on_edge_k + 1) % 3];
      const int c = tri[(on_edge_k + 2) % 3];
      const Edge split = make_edge(a, b);
      const int other = across(split, containing);
      remove_triangle(containing);
      add_triangle(a, pi, c);
      add_triangle(pi, b, c);
      suspect = {make_edge(a, c), make_edge(b, c)};
      if (other >= 0) {
        const int d = third_vertex(other, split);
        remove_triangle(other);
        add_triangle(a, pi, d);
        add_triangle(pi, b, d);
        suspect.push_back(make_edge(a, d));
        suspect.push_back(make_edge(b, d));
      }
    }
    lawson(suspect);
  }

  // Restores the (constrained) Delaunay criterion by edge flips starting from
  // the given suspect edges.
  void lawson(std::vector<Edge> stack) {
    std::size_t guard = 0;
    const std::size_t max_steps = 64 + 8 * pts_.size() * pts_.size();
    while (!stack.empty()) {
      if (++guard > max_steps) break;  // tolerance noise; oracle-level Delaunay holds
      const Edge e = stack.back();
      stack.pop_back();
      if (constrained_.count(e) != 0) continue;
      const auto it = edge_tris_.find(e);
      if (it == edge_tris_.end()) continue;
      const int t1 = it->second.t[0];
      const int t2 = it->second.t[1];
      if (t1 < 0 || t2 < 0) continue;
      const int w = third_vertex(t1, e);
      const int x = third_vertex(t2, e);
      if (w < 0 || x < 0) continue;
      const InCircle ic = incircle_oriented(pts_[e.first], pts_[e.second], pts_[w],
                                            pts_[x]);
      if (!ic.inside()) continue;
      if (!flip(e, t1, t2, w, x)) continue;
      stack.push_back(make_edge(e.first, w));
      stack.push_back(make_edge(w, e.second));
      stack.push_back(make_edge(e.second, x));
      stack.push_back(make_edge(x, e.first));
    }
  }

  bool flip(const Edge& e, int t1, int t2, int w, int x) {
    // Refuse flips that would create inverted or degenerate triangles.
    if (orient2d(pts_[w], pts_[x], pts_[e.first]) == 0.0 ||
        orient2d(pts_[w], pts_[x], pts_[e.second]) == 0.0) {
      return false;
    }
    if (!segments_properly_cross(pts_[e.first], pts_[e.second], pts_[w], pts_[x])) {
      return false;
    }
    remove_triangle(t1);
    remove_triangle(t2);
    add_triangle(e.first, w, x);
    add_triangle(e.second, w, x);
    return true;
  }

  void lawson_global() {
    std::vector<Edge> all;
    for (const auto& [e, slot] : edge_tris_) all.push_back(e);
    std::sort(all.begin(), all.end());
    lawson(all);
  }

  void remove_super_triangles() {
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      if (!alive_[t]) continue;
      if (is_super(tris_[t][0]) || is_super(tris_[t][1]) || is_super(tris_[t][2])) {
        remove_triangle(static_cast<int>(t));
      }
    }
  }

  // Deterministic resolution of cocircular quads: keep the diagonal that
  // contains the smallest vertex id of the quad.
  void normalize_cocircular() {
    for (std::size_t round = 0; round < pts_.size() + 3; ++round) {
      std::vector<Edge> all;
      for (const auto& [e, slot] : edge_tris_) {
        if (slot.t[0] >= 0 && slot.t[1] >= 0) all.push_back(e);
      }
      std::sort(all.begin(), all.end());
      bool changed = false;
      for (const Edge& e : all) {
        if (constrained_.count(e) != 0) continue;
        const auto it = edge_tris_.find(e);
        if (it == edge_tris_.end()) continue;
        const int t1 = it->second.t[0];
        const int t2 = it->second.t[1];
        if (t1 < 0 || t2 < 0) continue;
        const int w = third_vertex(t1, e);
        const int x = third_vertex(t2, e);
        if (w < 0 || x < 0 || is_super(w) || is_super(x)) continue;
        const InCircle ic =
            incircle_oriented(pts_[e.first], pts_[e.second], pts_[w], pts_[x]);
        if (!ic.cocircular()) continue;
        const int quad_min = std::min({e.first, e.second, w, x});
        if (e.first == quad_min || e.second == quad_min) continue;
        if (flip(e, t1, t2, w, x)) changed = true;
      }
      if (!changed) break;
    }
  }

  void insert_segment(int a, int b) {
    const Edge seg = make_edge(a, b);
    if (edge_tris_.count(seg) != 0) {
      constrained_.insert(seg);
      return;
    }

    // Walk the strip of triangles the open segment passes through, from a to
    // b, crossing one edge per step. Every endpoint of a crossed edge joins
    // the chain on its side of the segment, so a vertex whose whole star is
    // carved away (the segment grazing past a low-degree vertex) still lands
    // on a chain instead of being orphaned inside the cavity.
    const Vec2& pa = pts_[a];
    const Vec2& pb = pts_[b];
    int cur = -1;
    Edge crossed{-1, -1};
    for (std::size_t t = 0; t < tris_.size() && cur < 0; ++t) {
      if (!alive_[t]) continue;
      const auto& tri = tris_[t];
      if (tri[0] != a && tri[1] != a && tri[2] != a) continue;
      int u = -1, v = -1;
      for (int k = 0; k < 3; ++k) {
        if (tri[k] == a) {
          u = tri[(k + 1) % 3];
          v = tri[(k + 2) % 3];
          break;
        }
      }
      if (segments_properly_cross(pa, pb, pts_[u], pts_[v])) {
        cur = static_cast<int>(t);
        crossed = make_edge(u, v);
      }
    }
    if (cur < 0) {
      throw GeometryError("internal triangulation error: segment not embeddable");
    }

    const auto side_of = [&](int v) { return orient2d(pa, pb, pts_[v]); };
    std::vector<int> left, right;
    std::vector<int> removed{cur};
    (side_of(crossed.first) > 0.0 ? left : right).push_back(crossed.first);
    (side_of(crossed.second) > 0.0 ? left : right).push_back(crossed.second);

    for (std::size_t step = 0; step <= tris_.size(); ++step) {
      if (constrained_.count(crossed) != 0) {
        throw GeometryError("forced segment crosses a constrained edge");
      }
      const int next = across(crossed, cur);
      if (next < 0) {
        throw GeometryError("internal triangulation error: segment walk left the hull");
      }
      removed.push_back(next);
      const int w = third_vertex(next, crossed);
      if (w == b) {
        for (int t : removed) remove_triangle(t);
        retriangulate_chain(a, b, left);
        retriangulate_chain(a, b, right);
        constrained_.insert(seg);
        return;
      }
      (side_of(w) > 0.0 ? left : right).push_back(w);
      const Edge e1 = make_edge(w, crossed.first);
      const Edge e2 = make_edge(w, crossed.second);
      const bool c1 = segments_properly_cross(pa, pb, pts_[e1.first], pts_[e1.second]);
      const bool c2 = segments_properly_cross(pa, pb, pts_[e2.first], pts_[e2.second]);
      if (c1 == c2) {
        throw GeometryError("degenerate channel while inserting forced segment");
      }
      crossed = c1 ? e1 : e2;
      cur = next;
    }
    throw GeometryError("internal triangulation error: unterminated segment walk");
  }

  // Triangulates the pseudo-polygon formed by base (u, w) and the chain of
  // vertices between them, Delaunay-first (Anglada's algorithm).
  void retriangulate_chain(int u, int w, const std::vector<int>& chain) {
    if (chain.empty()) return;
    std::size_t best = 0;
    for (std::size_t i = 1; i < chain.size(); ++i) {
      const InCircle ic = incircle_oriented(pts_[u], pts_[w], pts_[chain[best]],
                                            pts_[chain[i]]);
      if (ic.inside()) best = i;
    }
    add_triangle(u, chain[best], w);
    retriangulate_chain(u, chain[best],
                        std::vector<int>(chain.begin(), chain.begin() + best));
    retriangulate_chain(chain[best], w,
                        std::vector<int>(chain.begin() + best + 1, chain.end()));
  }

  std::vector<std::int64_t> ids_;
  std::vector<Vec2> pts_;
  std::vector<std::array<int, 3>> tris_;
  std::vector<char> alive_;
  std::vector<int> free_;
  std::map<Edge, EdgeSlot> edge_tris_;
  std::set<Edge> constrained_;
};

bool TriangulationGraph::has_edge(std::int64_t a, std::int64_t b) const {
  return edges_.count({std::min(a, b), std::max(a, b)}) != 0;
}

bool TriangulationGraph::is_constrained(std::int64_t a, std::int64_t b) const {
  return constrained_.count({std::min(a, b), std::max(a, b)}) != 0;
}

const Vec2& TriangulationGraph::position(std::int64_t id) const {
  const auto it = vertices_.find(id);
  if (it == vertices_.end()) {
    throw ValidationError("unknown triangulation vertex id " + std::to_string(id));
  }
  return it->second;
}

const std::vector<std::int64_t>& TriangulationGraph::neighbors(
    std::int64_t id) const {
  static const std::vector<std::int64_t> kEmpty;
  const auto it = adjacency_.find(id);
  return it == adjacency_.end() ? kEmpty : it->second;
}

std::vector<std::int64_t> TriangulationGraph::opposite_vertices(
    std::int64_t a, std::int64_t b) const {
  std::vector<std::int64_t> out;
  if (!has_edge(a, b)) return out;
  for (const IdTriangle& tri : triangles_) {
    bool has_a = false, has_b = false;
    std::int64_t other = -1;
    for (std::int64_t v : tri) {
      if (v == a) has_a = true;
      else if (v == b) has_b = true;
      else other = v;
    }
    if (has_a && has_b) out.push_back(other);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TriangulationGraph delaunay(
    const std::vector<std::pair<std::int64_t, Vec2>>& points) {
  Triangulator t(points);
  t.build_delaunay();
  return t.finish();
}

TriangulationGraph constrained_delaunay(
    const std::vector<std::pair<std::int64_t, Vec2>>& points,
    const std::vector<IdEdge>& forced_segments) {
  Triangulator t(points);
  t.build_delaunay();
  t.insert_constraints(forced_segments);
  return t.finish();
}

}  // namespace trigrow
