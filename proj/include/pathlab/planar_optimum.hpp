#pragma once

// Exact optimal path cost for 2-D scenarios with box obstacles and Euclidean
// cost. In a box world the optimal path is a polyline that turns only at
// obstacle corners and ends at a goal corner or at the projection of its last
// turning point onto the goal, so a visibility graph over those candidates
// plus Dijkstra gives the exact value.

#include <stdexcept>
#include <vector>

#include "pathlab/geometry.hpp"
#include "pathlab/graph.hpp"

namespace pathlab {

/// Distance from x_init to the closed goal box; a lower bound in general and
/// the exact optimum when no obstacle blocks the straight segment.
inline double straight_line_lower_bound(const Scenario& s) {
    return distance_to_box(s.x_init, s.goal);
}

inline double optimal_cost_2d(const Scenario& s) {
    if (s.d != 2) throw std::invalid_argument("optimal_cost_2d requires d == 2");
    if (!s.cost_regions.empty())
        throw std::invalid_argument("optimal_cost_2d supports Euclidean cost only");

    std::vector<Point> nodes;
    auto add_node = [&](const Point& p) {
        if (point_in_free(p, s)) nodes.push_back(p);
    };
    auto add_box_corners = [&](const Box& b) {
        add_node(Point{b.lo[0], b.lo[1]});
        add_node(Point{b.hi[0], b.lo[1]});
        add_node(Point{b.lo[0], b.hi[1]});
        add_node(Point{b.hi[0], b.hi[1]});
    };

    nodes.push_back(s.x_init);
    for (const Box& o : s.obstacles) add_box_corners(o);
    const std::size_t turn_candidates = nodes.size();
    add_box_corners(s.goal);
    // Projections of every potential last turning point onto the goal.
    for (std::size_t i = 0; i < turn_candidates; ++i) add_node(s.goal.clamp(nodes[i]));

    RoadmapGraph g;
    for (const Point& p : nodes) g.add_vertex(p);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (segment_collision_free(nodes[i], nodes[j], s))
                g.add_edge_pair(static_cast<int>(i), static_cast<int>(j), distance(nodes[i], nodes[j]));

    const QueryResult best = shortest_path(g, 0, [&s](const Point& p) { return s.in_goal(p); });
    if (!best.found()) throw std::runtime_error("optimal_cost_2d: goal unreachable in visibility graph");
    return best.cost;
}

}  // namespace pathlab
