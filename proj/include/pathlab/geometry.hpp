#pragma once

// Configuration-space primitives: points in the unit cube (0,1)^d, axis-aligned
// box obstacles, planning scenarios, polyline paths, exact collision predicates
// and cost functionals.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pathlab {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// A configuration in the unit cube. Coordinate count equals the scenario
/// dimension d.
struct Point {
    std::vector<double> coords;

    Point() = default;
    Point(std::initializer_list<double> c) : coords(c) {}
    explicit Point(std::vector<double> c) : coords(std::move(c)) {}

    static Point zeros(int d) { return Point(std::vector<double>(static_cast<std::size_t>(d), 0.0)); }

    std::size_t dim() const { return coords.size(); }
    double operator[](std::size_t i) const { return coords[i]; }
    double& operator[](std::size_t i) { return coords[i]; }

    bool operator==(const Point& o) const { return coords == o.coords; }
    bool operator!=(const Point& o) const { return coords != o.coords; }
};

inline double distance_sq(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double distance(const Point& a, const Point& b) { return std::sqrt(distance_sq(a, b)); }

/// Axis-aligned box with lo[i] < hi[i] on every axis.
struct Box {
    Point lo;
    Point hi;

    std::size_t dim() const { return lo.dim(); }

    /// Closed containment (boundary included).
    bool contains(const Point& p) const {
        for (std::size_t i = 0; i < dim(); ++i)
            if (p[i] < lo[i] || p[i] > hi[i]) return false;
        return true;
    }

    /// Open containment (interior only).
    bool contains_interior(const Point& p) const {
        for (std::size_t i = 0; i < dim(); ++i)
            if (p[i] <= lo[i] || p[i] >= hi[i]) return false;
        return true;
    }

    double volume() const {
        double v = 1.0;
        for (std::size_t i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
        return v;
    }

    /// Closest point of the closed box to p.
    Point clamp(const Point& p) const {
        Point q = p;
        for (std::size_t i = 0; i < dim(); ++i) q[i] = std::clamp(p[i], lo[i], hi[i]);
        return q;
    }

    void validate(int d) const {
        if (static_cast<int>(lo.dim()) != d || static_cast<int>(hi.dim()) != d)
            throw std::invalid_argument("box dimension mismatch");
        for (std::size_t i = 0; i < dim(); ++i) {
            if (!(lo[i] < hi[i])) throw std::invalid_argument("box requires lo < hi on every axis");
            if (lo[i] < 0.0 || hi[i] > 1.0) throw std::invalid_argument("box must lie inside the unit cube");
        }
    }
};

inline double distance_to_box(const Point& p, const Box& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
        const double d = std::max({b.lo[i] - p[i], p[i] - b.hi[i], 0.0});
        s += d * d;
    }
    return std::sqrt(s);
}

/// Intersection of two boxes; returns false when the interiors do not overlap.
inline bool intersect_boxes(const Box& a, const Box& b, Box& out) {
    out.lo = a.lo;
    out.hi = a.hi;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        out.lo[i] = std::max(a.lo[i], b.lo[i]);
        out.hi[i] = std::min(a.hi[i], b.hi[i]);
        if (!(out.lo[i] < out.hi[i])) return false;
    }
    return true;
}

struct CostRegion {
    Box box;
    double weight = 1.0;
};

/// A planning problem: unit cube of dimension d, box obstacles (their union is
/// the obstacle region), a start configuration, a closed goal box, and optional
/// piecewise-constant cost regions (weight 1 outside all regions).
struct Scenario {
    int d = 2;
    std::vector<Box> obstacles;
    Point x_init;
    Box goal;
    std::vector<CostRegion> cost_regions;

    bool in_goal(const Point& p) const { return goal.contains(p); }

    void validate() const;
};

/// Piecewise-linear path through >= 1 waypoints.
struct PathPolyline {
    std::vector<Point> waypoints;
};

/// Length of a polyline: the sum of Euclidean segment lengths.
inline double total_variation(const PathPolyline& path) {
    double tv = 0.0;
    for (std::size_t i = 1; i < path.waypoints.size(); ++i)
        tv += distance(path.waypoints[i - 1], path.waypoints[i]);
    return tv;
}

/// Waypoint-list concatenation; requires a.back() == b.front().
inline PathPolyline concat(const PathPolyline& a, const PathPolyline& b) {
    if (a.waypoints.empty() || b.waypoints.empty())
        throw std::invalid_argument("concat requires non-empty paths");
    if (!(a.waypoints.back() == b.waypoints.front()))
        throw std::invalid_argument("concat requires matching endpoints");
    PathPolyline out = a;
    out.waypoints.insert(out.waypoints.end(), b.waypoints.begin() + 1, b.waypoints.end());
    return out;
}

/// Free-space membership uses closure semantics: only obstacle interiors are
/// forbidden, points on an obstacle boundary are free.
inline bool point_in_free(const Point& p, const Scenario& s) {
    for (const Box& b : s.obstacles)
        if (b.contains_interior(p)) return false;
    return true;
}

namespace detail {

/// Parameter interval of segment a+t(b-a), t in [0,1], spent strictly inside
/// the open box. Returns false when that interval is empty or degenerate.
inline bool segment_interior_overlap(const Point& a, const Point& b, const Box& box,
                                     double& t0, double& t1) {
    t0 = 0.0;
    t1 = 1.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double dir = b[i] - a[i];
        if (dir == 0.0) {
            if (a[i] <= box.lo[i] || a[i] >= box.hi[i]) return false;
        } else {
            double ta = (box.lo[i] - a[i]) / dir;
            double tb = (box.hi[i] - a[i]) / dir;
            if (ta > tb) std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
            if (t0 >= t1) return false;
        }
    }
    return t0 < t1;
}

/// Closed-box variant used for clipping cost regions.
inline bool segment_closed_overlap(const Point& a, const Point& b, const Box& box,
                                   double& t0, double& t1) {
    t0 = 0.0;
    t1 = 1.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double dir = b[i] - a[i];
        if (dir == 0.0) {
            if (a[i] < box.lo[i] || a[i] > box.hi[i]) return false;
        } else {
            double ta = (box.lo[i] - a[i]) / dir;
            double tb = (box.hi[i] - a[i]) / dir;
            if (ta > tb) std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
            if (t0 > t1) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Exact slab test: true iff the closed segment [a,b] avoids every obstacle
/// interior.
inline bool segment_collision_free(const Point& a, const Point& b, const Scenario& s) {
    double t0, t1;
    for (const Box& box : s.obstacles)
        if (detail::segment_interior_overlap(a, b, box, t0, t1)) return false;
    return true;
}

/// Volume of the union of boxes by inclusion-exclusion. Branches with empty
/// intersections are pruned, but the worst case is exponential, hence the cap.
inline double union_volume(const std::vector<Box>& boxes) {
    if (boxes.size() > 20)
        throw std::invalid_argument("union_volume: inclusion-exclusion capped at 20 boxes");
    double total = 0.0;
    // Depth-first subset expansion carrying the running intersection.
    struct Frame {
        Box inter;
        std::size_t next;
        int parity;  // +1 for odd subset cardinality
    };
    std::vector<Frame> stack;
    for (std::size_t i = 0; i < boxes.size(); ++i)
        stack.push_back({boxes[i], i + 1, +1});
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        total += f.parity * f.inter.volume();
        for (std::size_t j = f.next; j < boxes.size(); ++j) {
            Box inter;
            if (intersect_boxes(f.inter, boxes[j], inter))
                stack.push_back({inter, j + 1, -f.parity});
        }
    }
    return total;
}

/// Exact Lebesgue measure of the obstacle-free space, 1 - vol(union of
/// obstacles). Rejects more than 20 obstacles.
inline double free_space_measure(const Scenario& s) {
    if (s.obstacles.size() > 20)
        throw std::invalid_argument("free_space_measure supports at most 20 obstacles");
    return 1.0 - union_volume(s.obstacles);
}

/// Volume of the unit d-ball, pi^(d/2) / Gamma(d/2 + 1).
inline double unit_ball_volume(int d) {
    if (d < 1) throw std::invalid_argument("unit_ball_volume requires d >= 1");
    return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

/// Line integral of the piecewise-constant cost weight along [a,b], computed
/// exactly by clipping the segment against every cost region. When two regions
/// overlap the first one listed wins. With no cost regions this is the segment
/// length.
inline double line_integral_cost(const Point& a, const Point& b, const Scenario& s) {
    const double len = distance(a, b);
    if (s.cost_regions.empty() || len == 0.0) return len;

    std::vector<double> cuts{0.0, 1.0};
    double t0, t1;
    for (const CostRegion& r : s.cost_regions) {
        if (detail::segment_closed_overlap(a, b, r.box, t0, t1)) {
            cuts.push_back(std::clamp(t0, 0.0, 1.0));
            cuts.push_back(std::clamp(t1, 0.0, 1.0));
        }
    }
    std::sort(cuts.begin(), cuts.end());

    auto weight_at = [&](double t) {
        Point p = a;
        for (std::size_t i = 0; i < a.dim(); ++i) p[i] = a[i] + t * (b[i] - a[i]);
        for (const CostRegion& r : s.cost_regions)
            if (r.box.contains(p)) return r.weight;
        return 1.0;
    };

    double cost = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double dt = cuts[i] - cuts[i - 1];
        if (dt <= 0.0) continue;
        cost += weight_at(0.5 * (cuts[i] + cuts[i - 1])) * dt * len;
    }
    return cost;
}

inline void Scenario::validate() const {
    if (d < 2) throw std::invalid_argument("scenario dimension must be >= 2");
    if (static_cast<int>(x_init.dim()) != d) throw std::invalid_argument("x_init dimension mismatch");
    for (std::size_t i = 0; i < x_init.dim(); ++i)
        if (!(x_init[i] > 0.0 && x_init[i] < 1.0) || !std::isfinite(x_init[i]))
            throw std::invalid_argument("x_init must lie inside the open unit cube");
    for (const Box& b : obstacles) b.validate(d);
    goal.validate(d);
    for (const CostRegion& r : cost_regions) {
        r.box.validate(d);
        if (!(r.weight > 0.0)) throw std::invalid_argument("cost region weight must be positive");
    }
    if (!point_in_free(x_init, *this)) throw std::invalid_argument("x_init lies inside an obstacle");
    // The goal must overlap free space with positive measure.
    std::vector<Box> clipped;
    for (const Box& o : obstacles) {
        Box inter;
        if (intersect_boxes(goal, o, inter)) clipped.push_back(inter);
    }
    if (!(goal.volume() - union_volume(clipped) > 0.0))
        throw std::invalid_argument("goal region is covered by obstacles");
}

}  // namespace pathlab
