#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "trigrow/geometry.hpp"
#include "trigrow/types.hpp"

namespace trigrow {

using IdEdge = std::pair<std::int64_t, std::int64_t>;  // normalized: first < second
using IdTriangle = std::array<std::int64_t, 3>;        // sorted ascending

// A triangulation over identified 2-D points. Triangles are stored as sorted
// id triples; edges as sorted id pairs. All accessors iterate in sorted order
// so downstream consumers are deterministic.
class TriangulationGraph {
 public:
  const std::map<std::int64_t, Vec2>& vertices() const { return vertices_; }
  const std::vector<IdTriangle>& triangles() const { return triangles_; }
  const std::set<IdEdge>& edges() const { return edges_; }
  const std::set<IdEdge>& constrained_edges() const { return constrained_; }

  bool has_edge(std::int64_t a, std::int64_t b) const;
  bool is_constrained(std::int64_t a, std::int64_t b) const;
  const Vec2& position(std::int64_t id) const;

  // Adjacent vertex ids, sorted ascending.
  const std::vector<std::int64_t>& neighbors(std::int64_t id) const;

  // Ids of the third vertices of the (up to 2) triangles on edge (a, b),
  // sorted ascending. Empty when the edge does not exist.
  std::vector<std::int64_t> opposite_vertices(std::int64_t a, std::int64_t b) const;

  // Number of vertices on the convex hull boundary.
  std::size_t hull_vertex_count() const { return hull_vertices_; }

 private:
  friend class Triangulator;
  std::map<std::int64_t, Vec2> vertices_;
  std::vector<IdTriangle> triangles_;
  std::set<IdEdge> edges_;
  std::set<IdEdge> constrained_;
  std::map<std::int64_t, std::vector<std::int64_t>> adjacency_;
  std::size_t hull_vertices_ = 0;
};

// Delaunay triangulation by incremental insertion with Lawson flips.
// Cocircular groups are normalized deterministically: of the two diagonals of
// a cocircular quad, the one containing the smallest vertex id is kept.
// Throws GeometryError for fewer than 3 points, coincident points, or an
// all-collinear input; ValidationError for duplicate ids.
TriangulationGraph delaunay(const std::vector<std::pair<std::int64_t, Vec2>>& points);

// Constrained Delaunay triangulation: every forced segment appears as an
// edge; all other edges satisfy the local Delaunay criterion. Throws
// GeometryError when a forced segment passes through a third input point,
// when forced segments cross each other, or when an endpoint id is unknown.
TriangulationGraph constrained_delaunay(
    const std::vector<std::pair<std::int64_t, Vec2>>& points,
    const std::vector<IdEdge>& forced_segments);

}  // namespace trigrow
