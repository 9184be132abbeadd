#pragma once

// Random-geometric-graph lab: r-disc, mutual k-nearest and online
// nearest-neighbor graph generators over uniform points in the unit cube,
// plus Monte Carlo sweeps that estimate connectivity probabilities and
// largest-component fractions across a parameter grid.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathlab/geometry.hpp"
#include "pathlab/graph.hpp"
#include "pathlab/sampling.hpp"
#include "pathlab/spatial_index.hpp"

namespace pathlab {

enum class RggKind { rDisc, kNearest, onlineNN };

inline const char* rgg_kind_name(RggKind k) {
    switch (k) {
        case RggKind::rDisc: return "rdisc";
        case RggKind::kNearest: return "knearest";
        case RggKind::onlineNN: return "onlinenn";
    }
    return "?";
}

inline RggKind rgg_kind_from_name(const std::string& name) {
    if (name == "rdisc") return RggKind::rDisc;
    if (name == "knearest") return RggKind::kNearest;
    if (name == "onlinenn") return RggKind::onlineNN;
    throw std::invalid_argument("unknown rgg model: " + name);
}

struct RggModel {
    RggKind kind = RggKind::rDisc;
    int d = 2;
    /// Vertex count; the Poisson mean when poissonized.
    int n = 100;
    double r = 0.1;  // rDisc connection radius
    int k = 1;       // kNearest neighbor count
    /// Draw the vertex count as Poisson(n) instead of fixing it.
    bool poissonized = false;

    void validate() const {
        if (d < 1) throw std::invalid_argument("rgg model needs d >= 1");
        if (n < 0) throw std::invalid_argument("rgg model needs n >= 0");
        if (kind == RggKind::rDisc && !(r > 0.0)) throw std::invalid_argument("rDisc needs r > 0");
        if (kind == RggKind::kNearest && k < 1) throw std::invalid_argument("kNearest needs k >= 1");
    }
};

/// Edges between pairs strictly closer than r.
inline RoadmapGraph rdisc_graph(const std::vector<Point>& pts, double r) {
    RoadmapGraph g;
    if (pts.empty()) return g;
    VertexIndex index(static_cast<int>(pts[0].dim()));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        g.add_vertex(pts[i]);
        index.insert(pts[i], static_cast<int>(i));
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (const auto& nb : index.near(pts[i], r)) {
            if (nb.id == static_cast<int>(i)) continue;
            if (nb.dist < r) g.add_edge_pair(static_cast<int>(i), nb.id, nb.dist);
        }
    }
    return g;
}

/// Mutual-union k-nearest graph: (i,j) is an edge when either point is among
/// the k nearest neighbors of the other.
inline RoadmapGraph knn_graph(const std::vector<Point>& pts, int k) {
    RoadmapGraph g;
    if (pts.empty()) return g;
    VertexIndex index(static_cast<int>(pts[0].dim()));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        g.add_vertex(pts[i]);
        index.insert(pts[i], static_cast<int>(i));
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        int taken = 0;
        for (const auto& nb : index.k_nearest(pts[i], k + 1)) {
            if (nb.id == static_cast<int>(i)) continue;
            if (taken++ == k) break;
            g.add_edge_pair(static_cast<int>(i), nb.id, nb.dist);
        }
    }
    return g;
}

/// Online nearest-neighbor graph: each point after the first attaches to its
/// closest predecessor, yielding a connected tree with n-1 edges.
inline RoadmapGraph online_nn_graph(const std::vector<Point>& pts) {
    RoadmapGraph g;
    if (pts.empty()) return g;
    VertexIndex index(static_cast<int>(pts[0].dim()));
    std::vector<int> parent(pts.size(), 0);
    std::vector<double> pcost(pts.size(), 0.0);
    g.add_vertex(pts[0]);
    index.insert(pts[0], 0);
    for (std::size_t j = 1; j < pts.size(); ++j) {
        const auto nb = index.nearest(pts[j]);
        parent[j] = nb.id;
        pcost[j] = nb.dist;
        g.add_vertex(pts[j]);
        index.insert(pts[j], static_cast<int>(j));
    }
    g.finalize_tree(std::move(parent), std::move(pcost));
    return g;
}

inline RoadmapGraph gen_rgg(const RggModel& model, RngStream& rng) {
    model.validate();
    const std::size_t count =
        model.poissonized ? static_cast<std::size_t>(poisson_count(rng, static_cast<double>(model.n)))
                          : static_cast<std::size_t>(model.n);
    std::vector<Point> pts;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) pts.push_back(sample_uniform(rng, model.d));
    switch (model.kind) {
        case RggKind::rDisc: return rdisc_graph(pts, model.r);
        case RggKind::kNearest: return knn_graph(pts, model.k);
        case RggKind::onlineNN: return online_nn_graph(pts);
    }
    throw std::logic_error("gen_rgg: unhandled kind");
}

/// Radius at which r-disc connectivity flips: zeta_d r^d = log(n)/n.
inline double connectivity_threshold_radius(int n, int d) {
    if (n < 2) throw std::invalid_argument("connectivity_threshold_radius requires n >= 2");
    return std::pow(std::log(static_cast<double>(n)) / (unit_ball_volume(d) * n),
                    1.0 / static_cast<double>(d));
}

inline bool is_connected(const RoadmapGraph& g) {
    if (g.vertices.size() <= 1) return true;
    const int root = g.components.find(0);
    for (std::size_t v = 1; v < g.vertices.size(); ++v)
        if (g.components.find(static_cast<int>(v)) != root) return false;
    return true;
}

struct SweepRow {
    std::string model;
    int d;
    int n;
    double param;
    double p_connected;
    double std_err;
    double mean_lcc_fraction;
};

/// Monte Carlo sweep over a parameter grid. The parameter is the radius for
/// rDisc and the neighbor count for kNearest; trials use independent derived
/// streams so rows are reproducible and order-independent.
inline std::vector<SweepRow> run_rgg_sweep(const RggModel& base, const std::vector<double>& grid,
                                           int trials, RngStream& rng) {
    if (trials < 1) throw std::invalid_argument("run_rgg_sweep requires trials >= 1");
    std::vector<SweepRow> rows;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        RggModel model = base;
        if (model.kind == RggKind::rDisc) model.r = grid[gi];
        if (model.kind == RggKind::kNearest) model.k = static_cast<int>(std::lround(grid[gi]));
        RngStream grid_stream = rng.derived(gi);
        int connected = 0;
        double lcc_sum = 0.0;
        for (int t = 0; t < trials; ++t) {
            RngStream trial_stream = grid_stream.derived(static_cast<std::uint64_t>(t));
            const RoadmapGraph g = gen_rgg(model, trial_stream);
            if (is_connected(g)) ++connected;
            lcc_sum += g.vertices.empty() ? 1.0 : largest_component_fraction(g);
        }
        const double p = static_cast<double>(connected) / trials;
        rows.push_back({rgg_kind_name(model.kind), model.d, model.n, grid[gi], p,
                        std::sqrt(p * (1.0 - p) / trials), lcc_sum / trials});
    }
    return rows;
}

}  // namespace pathlab
