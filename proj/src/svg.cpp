#include "trigrow/svg.hpp"

#include <algorithm>
#include <sstream>

#include "trigrow/errors.hpp"
#include "trigrow/io.hpp"

namespace trigrow {

namespace {

constexpr const char* kPalette[] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad",
                                    "#d35400", "#16a085", "#7f8c8d", "#2c3e50"};

struct Panel {
  double min_x = 0, min_y = 0;  // content coordinates mapped to offset
  double offset_x = 0, offset_y = 0;

  Vec2 place(const Vec2& p) const {
    return {p.x - min_x + offset_x, p.y - min_y + offset_y};
  }
};

void bounds(const KeyPointSet& set, double* x0, double* y0, double* x1, double* y1) {
  *x0 = *y0 = 0.0;
  *x1 = *y1 = 1.0;
  if (set.empty()) return;
  *x0 = *x1 = set.points().front().pos.x;
  *y0 = *y1 = set.points().front().pos.y;
  for (const KeyPoint& kp : set.points()) {
    *x0 = std::min(*x0, kp.pos.x);
    *x1 = std::max(*x1, kp.pos.x);
    *y0 = std::min(*y0, kp.pos.y);
    *y1 = std::max(*y1, kp.pos.y);
  }
}

void write_circle(std::ostringstream& out, const Vec2& c, double r,
                  const std::string& fill) {
  out << "<circle cx=\"" << format_double(c.x) << "\" cy=\"" << format_double(c.y)
      << "\" r=\"" << format_double(r) << "\" fill=\"" << fill << "\"/>\n";
}

void write_line(std::ostringstream& out, const Vec2& a, const Vec2& b,
                const std::string& stroke, double width, double opacity = 1.0) {
  out << "<line x1=\"" << format_double(a.x) << "\" y1=\"" << format_double(a.y)
      << "\" x2=\"" << format_double(b.x) << "\" y2=\"" << format_double(b.y)
      << "\" stroke=\"" << stroke << "\" stroke-width=\"" << format_double(width)
      << "\"";
  if (opacity != 1.0) out << " opacity=\"" << format_double(opacity) << "\"";
  out << "/>\n";
}

void write_polygon(std::ostringstream& out, const Polygon& poly,
                   const std::string& stroke) {
  if (poly.empty()) return;
  out << "<polygon points=\"";
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (i > 0) out << " ";
    out << format_double(poly[i].x) << "," << format_double(poly[i].y);
  }
  out << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\"/>\n";
}

}  // namespace

std::string detection_svg(const KeyPointSet& templ, const KeyPointSet& scene,
                          const std::vector<Detection>& detections) {
  double tx0, ty0, tx1, ty1, sx0, sy0, sx1, sy1;
  bounds(templ, &tx0, &ty0, &tx1, &ty1);
  bounds(scene, &sx0, &sy0, &sx1, &sy1);

  const double margin = 20.0;
  const double gap = 60.0;
  Panel tp{tx0, ty0, margin, margin};
  Panel sp{sx0, sy0, margin + (tx1 - tx0) + gap, margin};
  const double width = sp.offset_x + (sx1 - sx0) + margin;
  const double height = margin * 2 + std::max(ty1 - ty0, sy1 - sy0);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 "
      << format_double(width) << " " << format_double(height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (const KeyPoint& kp : templ.points()) write_circle(out, tp.place(kp.pos), 1.2, "#bbbbbb");
  for (const KeyPoint& kp : scene.points()) write_circle(out, sp.place(kp.pos), 1.2, "#bbbbbb");

  for (std::size_t d = 0; d < detections.size(); ++d) {
    const Detection& det = detections[d];
    const std::string color = kPalette[d % (sizeof kPalette / sizeof *kPalette)];

    // Member mesh in the template panel, replicated through the matches in
    // the scene panel.
    std::vector<std::pair<std::int64_t, Vec2>> members;
    for (const Match& m : det.seed.matches()) {
      members.emplace_back(m.template_id, templ.at(m.template_id).pos);
    }
    try {
      const TriangulationGraph mesh = delaunay(members);
      for (const IdEdge& e : mesh.edges()) {
        const Match* ma = det.seed.match_for_template(e.first);
        const Match* mb = det.seed.match_for_template(e.second);
        write_line(out, tp.place(templ.at(e.first).pos),
                   tp.place(templ.at(e.second).pos), color, 0.6, 0.7);
        if (ma != nullptr && mb != nullptr) {
          write_line(out, sp.place(scene.at(ma->scene_id).pos),
                     sp.place(scene.at(mb->scene_id).pos), color, 0.6, 0.7);
        }
      }
    } catch (const Error&) {
      // no mesh for degenerate member sets; hulls and lines still drawn
    }

    Polygon th, sh;
    for (const Vec2& v : det.template_hull) th.push_back(tp.place(v));
    for (const Vec2& v : det.scene_hull) sh.push_back(sp.place(v));
    write_polygon(out, th, color);
    write_polygon(out, sh, color);

    for (const Match& m : det.seed.matches()) {
      write_line(out, tp.place(templ.at(m.template_id).pos),
                 sp.place(scene.at(m.scene_id).pos), color, 0.3, 0.35);
    }
    for (const Match& m : det.seed.matches()) {
      write_circle(out, tp.place(templ.at(m.template_id).pos), 1.8, color);
      write_circle(out, sp.place(scene.at(m.scene_id).pos), 1.8, color);
    }
  }

  out << "</svg>\n";
  return out.str();
}

std::string mesh_svg(const TriangulationGraph& tri) {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
  bool first = true;
  for (const auto& [id, pos] : tri.vertices()) {
    if (first) {
      x0 = x1 = pos.x;
      y0 = y1 = pos.y;
      first = false;
    }
    x0 = std::min(x0, pos.x);
    x1 = std::max(x1, pos.x);
    y0 = std::min(y0, pos.y);
    y1 = std::max(y1, pos.y);
  }
  const double margin = 20.0;
  Panel p{x0, y0, margin, margin};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 "
      << format_double(x1 - x0 + 2 * margin) << " "
      << format_double(y1 - y0 + 2 * margin) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const IdEdge& e : tri.edges()) {
    const bool forced = tri.is_constrained(e.first, e.second);
    write_line(out, p.place(tri.position(e.first)), p.place(tri.position(e.second)),
               forced ? "#c0392b" : "#2980b9", forced ? 1.4 : 0.6);
  }
  for (const auto& [id, pos] : tri.vertices()) write_circle(out, p.place(pos), 1.4, "#2c3e50");
  out << "</svg>\n";
  return out.str();
}

}  // namespace trigrow
