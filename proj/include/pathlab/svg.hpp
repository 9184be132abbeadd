#pragma once

// Minimal SVG writer for 2-D scenarios: obstacles and cost regions shaded,
// goal region marked, roadmap edges drawn once per undirected pair, best
// goal-reaching path highlighted.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "pathlab/geometry.hpp"
#include "pathlab/graph.hpp"

namespace pathlab {

namespace detail {

class SvgWriter {
public:
    SvgWriter(double size, double margin) : size_(size), margin_(margin) {}

    double px(double x) const { return margin_ + x * size_; }
    double py(double y) const { return margin_ + (1.0 - y) * size_; }  // y grows upward

    void open(const std::string& comment) {
        out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        if (!comment.empty()) out_ << "<!-- " << comment << " -->\n";
        const double total = size_ + 2 * margin_;
        out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total << "\" height=\""
             << total << "\" viewBox=\"0 0 " << total << " " << total << "\">\n";
        rect(0, 0, total, total, "#ffffff", "none", 0, 1.0);
    }

    void rect(double x, double y, double w, double h, const std::string& fill,
              const std::string& stroke, double stroke_w, double opacity) {
        out_ << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << h
             << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\"" << stroke_w
             << "\" fill-opacity=\"" << opacity << "\"/>\n";
    }

    void box(const Box& b, const std::string& fill, const std::string& stroke, double stroke_w,
             double opacity) {
        rect(px(b.lo[0]), py(b.hi[1]), (b.hi[0] - b.lo[0]) * size_, (b.hi[1] - b.lo[1]) * size_,
             fill, stroke, stroke_w, opacity);
    }

    void line(const Point& a, const Point& b, const std::string& stroke, double w) {
        out_ << "<line x1=\"" << px(a[0]) << "\" y1=\"" << py(a[1]) << "\" x2=\"" << px(b[0])
             << "\" y2=\"" << py(b[1]) << "\" stroke=\"" << stroke << "\" stroke-width=\"" << w
             << "\"/>\n";
    }

    void circle(const Point& c, double r, const std::string& fill) {
        out_ << "<circle cx=\"" << px(c[0]) << "\" cy=\"" << py(c[1]) << "\" r=\"" << r
             << "\" fill=\"" << fill << "\"/>\n";
    }

    void polyline(const PathPolyline& p, const std::string& stroke, double w) {
        out_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << w
             << "\" points=\"";
        for (const Point& q : p.waypoints) out_ << px(q[0]) << "," << py(q[1]) << " ";
        out_ << "\"/>\n";
    }

    void close() { out_ << "</svg>\n"; }

    std::string str() const { return out_.str(); }

private:
    double size_;
    double margin_;
    std::ostringstream out_;
};

}  // namespace detail

/// Renders a 2-D scenario and roadmap to SVG text. Throws for d != 2.
inline std::string render_svg_string(const RoadmapGraph& g, const Scenario& s,
                                     const std::optional<PathPolyline>& best_path = {},
                                     const std::string& comment = "") {
    if (s.d != 2) throw std::invalid_argument("render_svg requires a 2-D scenario");
    detail::SvgWriter w(760.0, 20.0);
    w.open(comment);

    for (const CostRegion& r : s.cost_regions)
        w.box(r.box, r.weight > 1.0 ? "#e0a030" : "#7ec8e3", "none", 0.0, 0.45);
    for (const Box& o : s.obstacles) w.box(o, "#555555", "none", 0.0, 1.0);
    w.box(s.goal, "#4caf50", "#2e7031", 1.5, 0.5);

    // One line per undirected pair.
    std::set<std::pair<int, int>> drawn;
    for (const auto& e : g.edges) {
        const std::pair<int, int> key{std::min(e.u, e.v), std::max(e.u, e.v)};
        if (!drawn.insert(key).second) continue;
        w.line(g.vertices[static_cast<std::size_t>(e.u)], g.vertices[static_cast<std::size_t>(e.v)],
               "#4d7ea8", 0.6);
    }
    for (const Point& v : g.vertices) w.circle(v, 1.1, "#1b3d5c");

    if (best_path && !best_path->waypoints.empty()) w.polyline(*best_path, "#d62828", 2.2);
    w.circle(s.x_init, 4.0, "#000000");

    w.close();
    return w.str();
}

inline void render_svg(const RoadmapGraph& g, const Scenario& s, const std::string& out_path,
                       const std::optional<PathPolyline>& best_path = {},
                       const std::string& comment = "") {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << render_svg_string(g, s, best_path, comment);
}

}  // namespace pathlab
