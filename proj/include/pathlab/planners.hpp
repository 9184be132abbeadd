#pragma once

// The planner family. Incremental planners (PRM, RRT, RRG, RRT*) grow a
// roadmap one sample at a time; batch planners (sPRM variants, PRM*) draw all
// samples first and connect neighbor sets. Every build is a pure function of
// (Scenario, PlannerSpec, seed).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathlab/geometry.hpp"
#include "pathlab/graph.hpp"
#include "pathlab/sampling.hpp"
#include "pathlab/spatial_index.hpp"

namespace pathlab {

enum class Algorithm {
    PRM,
    sPRM,
    kSPRM,
    boundedDegreeSPRM,
    variableRadiusSPRM,
    RRT,
    PRMstar,
    kPRMstar,
    RRG,
    kRRG,
    RRTstar,
    kRRTstar,
};

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::PRM: return "PRM";
        case Algorithm::sPRM: return "sPRM";
        case Algorithm::kSPRM: return "kSPRM";
        case Algorithm::boundedDegreeSPRM: return "boundedDegreeSPRM";
        case Algorithm::variableRadiusSPRM: return "variableRadiusSPRM";
        case Algorithm::RRT: return "RRT";
        case Algorithm::PRMstar: return "PRMstar";
        case Algorithm::kPRMstar: return "kPRMstar";
        case Algorithm::RRG: return "RRG";
        case Algorithm::kRRG: return "kRRG";
        case Algorithm::RRTstar: return "RRTstar";
        case Algorithm::kRRTstar: return "kRRTstar";
    }
    return "?";
}

inline Algorithm algorithm_from_name(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(Algorithm::kRRTstar); ++i) {
        const auto a = static_cast<Algorithm>(i);
        if (name == algorithm_name(a)) return a;
    }
    throw std::invalid_argument("unknown algorithm: " + name);
}

inline bool is_batch(Algorithm a) {
    switch (a) {
        case Algorithm::sPRM:
        case Algorithm::kSPRM:
        case Algorithm::boundedDegreeSPRM:
        case Algorithm::variableRadiusSPRM:
        case Algorithm::PRMstar:
        case Algorithm::kPRMstar: return true;
        default: return false;
    }
}

struct PlannerSpec {
    Algorithm algorithm = Algorithm::RRTstar;
    int n = 1000;
    /// Connection radius for PRM/sPRM; the coefficient of r(N) = r * N^(-1/d)
    /// for variableRadiusSPRM.
    std::optional<double> fixed_radius;
    /// Neighbor count for kSPRM (default 15) and boundedDegreeSPRM (default 20).
    std::optional<int> fixed_k;
    /// Multiplier applied to the critical gamma* of the starred radius rules.
    double gamma_factor = 1.1;
    /// Multiplier applied to the critical k* of the starred k-nearest rules.
    double k_factor = 1.1;
    /// Steering range; defaults to sqrt(d), which never truncates inside the cube.
    std::optional<double> eta;
    std::uint64_t seed = 0;

    double resolved_eta(int d) const { return eta ? *eta : std::sqrt(static_cast<double>(d)); }

    int resolved_k() const {
        if (fixed_k) return *fixed_k;
        return algorithm == Algorithm::boundedDegreeSPRM ? 20 : 15;
    }

    void validate() const {
        if (n < 0) throw std::invalid_argument("planner budget n must be >= 0");
        if (eta && !(*eta > 0.0)) throw std::invalid_argument("eta must be positive");
        switch (algorithm) {
            case Algorithm::PRM:
            case Algorithm::sPRM:
            case Algorithm::variableRadiusSPRM:
                if (!fixed_radius || !(*fixed_radius > 0.0))
                    throw std::invalid_argument("this planner needs fixed_radius > 0");
                break;
            case Algorithm::kSPRM:
            case Algorithm::boundedDegreeSPRM:
                if (resolved_k() < 1) throw std::invalid_argument("fixed_k must be >= 1");
                if (algorithm == Algorithm::boundedDegreeSPRM &&
                    (!fixed_radius || !(*fixed_radius > 0.0)))
                    throw std::invalid_argument("boundedDegreeSPRM needs fixed_radius > 0");
                break;
            case Algorithm::PRMstar:
            case Algorithm::RRG:
            case Algorithm::RRTstar:
                if (!(gamma_factor > 1.0))
                    throw std::invalid_argument("gamma_factor must exceed 1 for starred planners");
                break;
            case Algorithm::kPRMstar:
            case Algorithm::kRRG:
            case Algorithm::kRRTstar:
                if (!(k_factor > 1.0))
                    throw std::invalid_argument("k_factor must exceed 1 for starred planners");
                break;
            case Algorithm::RRT: break;
        }
    }
};

struct TracePoint {
    int iteration;
    double best_cost;
    double elapsed_s;
    long long collision_calls;
};

struct RunTrace {
    std::vector<TracePoint> points;
    long long collision_calls = 0;
    long long collision_successes = 0;
    long long edges_added = 0;
    int iterations = 0;
};

struct PlannerResult {
    RoadmapGraph graph;
    RunTrace trace;
};

/// Live view into the RRT* internals, handed to the inspection hook after
/// every iteration.
struct RrtStarState {
    int iteration;
    const std::vector<Point>& vertices;
    const std::vector<int>& parent;
    const std::vector<double>& parent_edge_cost;
    int new_vertex;                     // -1 when the iteration admitted nothing
    const std::vector<int>& near_ids;   // the X_near set examined this iteration
    const std::function<double(int)>& cost_of;
};

struct PlannerOptions {
    /// Iterations at which a TracePoint is recorded; the final iteration is
    /// always recorded. Batch planners realize interior checkpoints by
    /// re-running the construction on sample prefixes.
    std::vector<int> checkpoints;
    bool trace_every_iteration = false;
    /// When false the elapsed column is written as zero, which makes traces
    /// byte-reproducible.
    bool measure_time = true;
    std::function<void(int, const RoadmapGraph&)> inspect;
    std::function<void(const RrtStarState&)> inspect_rrt_star;
    /// Called at recorded checkpoints with the roadmap built so far (tree
    /// planners hand over a materialized copy).
    std::function<void(int, const RoadmapGraph&)> snapshot;
};

/// Point closest to y within the eta-ball around x.
inline Point steer(const Point& x, const Point& y, double eta) {
    const double d = distance(x, y);
    if (d <= eta) return y;
    Point z = x;
    const double scale = eta / d;
    for (std::size_t i = 0; i < x.dim(); ++i) z[i] = x[i] + scale * (y[i] - x[i]);
    return z;
}

/// Critical radius coefficient gamma* = 2 (1+1/d)^(1/d) (mu_free/zeta_d)^(1/d),
/// shared by the PRM* and RRG radius rules.
inline double gamma_star(int d, double mu_free) {
    const double dd = static_cast<double>(d);
    return 2.0 * std::pow(1.0 + 1.0 / dd, 1.0 / dd) * std::pow(mu_free / unit_ball_volume(d), 1.0 / dd);
}

/// Shrinking connection radius gamma_factor * gamma* * (log(card)/card)^(1/d).
inline double radius_prm_star(int card, int d, double mu_free, double gamma_factor) {
    if (card < 2) throw std::invalid_argument("radius_prm_star requires card >= 2");
    return gamma_factor * gamma_star(d, mu_free) *
           std::pow(std::log(static_cast<double>(card)) / card, 1.0 / static_cast<double>(d));
}

/// Critical k-nearest coefficient k* = e (1 + 1/d).
inline double k_star_coefficient(int d) { return std::numbers::e * (1.0 + 1.0 / static_cast<double>(d)); }

/// Neighbor count ceil(k_factor * k* * log(card)), at least 1.
inline int k_of_n(int card, int d, double k_factor) {
    const double raw = k_factor * k_star_coefficient(d) * std::log(static_cast<double>(card));
    return std::max(1, static_cast<int>(std::ceil(raw)));
}

/// k_factor that realizes the instance-independent 2e coefficient.
inline double k_factor_for_two_e(int d) { return 2.0 * d / (d + 1.0); }

/// Cheapest path from x_init to a goal vertex. Planners other than PRM store
/// x_init as vertex 0. PRM roadmaps omit it, so pass attach_radius to connect
/// x_init to its collision-free neighbors at query time.
inline QueryResult query_best_path(const RoadmapGraph& g, const Scenario& s,
                                   std::optional<double> attach_radius = {}) {
    const auto goal_pred = [&s](const Point& p) { return s.in_goal(p); };
    if (g.vertices.empty()) return {};
    if (!attach_radius) return shortest_path(g, 0, goal_pred);

    RoadmapGraph aug = g;
    const int src = aug.add_vertex(s.x_init);
    const double r2 = *attach_radius * *attach_radius;
    for (int v = 0; v < src; ++v) {
        if (distance_sq(s.x_init, g.vertices[static_cast<std::size_t>(v)]) > r2) continue;
        if (!segment_collision_free(s.x_init, g.vertices[static_cast<std::size_t>(v)], s)) continue;
        aug.add_edge_pair(src, v, line_integral_cost(s.x_init, g.vertices[static_cast<std::size_t>(v)], s));
    }
    return shortest_path(aug, src, goal_pred);
}

namespace detail {

class TraceRecorder {
public:
    TraceRecorder(const PlannerOptions& opts, int n)
        : every_(opts.trace_every_iteration), measure_(opts.measure_time), n_(n),
          marks_(opts.checkpoints) {
        std::sort(marks_.begin(), marks_.end());
        marks_.erase(std::unique(marks_.begin(), marks_.end()), marks_.end());
        start_ = std::chrono::steady_clock::now();
    }

    bool due(int iter) const {
        if (every_ || iter == n_) return true;
        return std::binary_search(marks_.begin(), marks_.end(), iter);
    }

    double elapsed() const {
        if (!measure_) return 0.0;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count() -
               excluded_;
    }

    /// Runs fn outside the measured time window (snapshot rendering).
    template <typename Fn>
    void off_clock(Fn&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        excluded_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    void record(RunTrace& trace, int iter, double best) const {
        trace.points.push_back({iter, best, elapsed(), trace.collision_calls});
    }

    /// Checkpoint prefix sizes for batch planners: requested marks clamped to
    /// [min_card, n] plus the full size.
    std::vector<int> batch_prefixes(int min_card) const {
        std::vector<int> out;
        if (every_) {
            for (int c = min_card; c <= n_; ++c) out.push_back(c);
        } else {
            for (int m : marks_)
                if (m >= min_card && m < n_) out.push_back(m);
        }
        if (n_ >= min_card && (out.empty() || out.back() != n_)) out.push_back(n_);
        return out;
    }

private:
    bool every_;
    bool measure_;
    int n_;
    std::vector<int> marks_;
    std::chrono::steady_clock::time_point start_;
    double excluded_ = 0.0;
};

inline RoadmapGraph make_tree_graph(const std::vector<Point>& vertices,
                                    std::vector<int> parent, std::vector<double> pedge) {
    RoadmapGraph g;
    for (const Point& p : vertices) g.add_vertex(p);
    g.finalize_tree(std::move(parent), std::move(pedge));
    return g;
}

inline bool collision_free_counted(const Point& a, const Point& b, const Scenario& s, RunTrace& t) {
    ++t.collision_calls;
    if (!segment_collision_free(a, b, s)) return false;
    ++t.collision_successes;
    return true;
}

}  // namespace detail

/// Incremental roadmap (preprocessing phase). Connections are attempted in
/// order of increasing distance and skipped inside a connected component, so
/// the output is a forest. x_init is not part of the roadmap; queries attach
/// it afterwards.
inline PlannerResult build_prm(const Scenario& s, const PlannerSpec& spec, RngStream& rng,
                               const PlannerOptions& opts = {}) {
    if (spec.algorithm != Algorithm::PRM) throw std::invalid_argument("build_prm: wrong algorithm");
    spec.validate();
    const double r = *spec.fixed_radius;

    PlannerResult out;
    RunTrace& trace = out.trace;
    RoadmapGraph& g = out.graph;
    VertexIndex index(s.d);
    detail::TraceRecorder rec(opts, spec.n);

    for (int i = 1; i <= spec.n; ++i) {
        const Point x_rand = sample_free(rng, s);
        std::vector<VertexIndex::Neighbor> near;
        if (index.size() > 0) near = index.near(x_rand, r);
        const int id = g.add_vertex(x_rand);
        index.insert(x_rand, id);
        for (const auto& u : near) {  // ascending distance
            if (same_component(g, id, u.id)) continue;
            if (detail::collision_free_counted(x_rand, u.point, s, trace)) {
                g.add_edge_pair(id, u.id, line_integral_cost(x_rand, u.point, s));
                trace.edges_added += 2;
            }
        }
        if (rec.due(i)) {
            rec.record(trace, i, query_best_path(g, s, r).cost);
            if (opts.snapshot) rec.off_clock([&] { opts.snapshot(i, g); });
        }
        if (opts.inspect) opts.inspect(i, g);
    }
    trace.iterations = spec.n;
    return out;
}

namespace detail {

/// Shared batch construction for the sPRM variants and PRM*. The graph over
/// {x_init} plus the first `card` samples is built from scratch; neighbor sets
/// follow the variant rule evaluated at `card`.
inline RoadmapGraph build_batch_prefix(const Scenario& s, const PlannerSpec& spec,
                                       const std::vector<Point>& samples, int card,
                                       double mu_free, RunTrace& trace) {
    RoadmapGraph g;
    VertexIndex index(s.d);
    for (int v = 0; v <= card; ++v) {
        g.add_vertex(samples[static_cast<std::size_t>(v)]);
        index.insert(samples[static_cast<std::size_t>(v)], v);
    }

    double radius = 0.0;
    int k = 0;
    switch (spec.algorithm) {
        case Algorithm::sPRM: radius = *spec.fixed_radius; break;
        case Algorithm::kSPRM: k = spec.resolved_k(); break;
        case Algorithm::boundedDegreeSPRM:
            radius = *spec.fixed_radius;
            k = spec.resolved_k();
            break;
        case Algorithm::variableRadiusSPRM:
            radius = *spec.fixed_radius * std::pow(static_cast<double>(card), -1.0 / s.d);
            break;
        case Algorithm::PRMstar: radius = radius_prm_star(card, s.d, mu_free, spec.gamma_factor); break;
        case Algorithm::kPRMstar: k = k_of_n(card, s.d, spec.k_factor); break;
        default: throw std::logic_error("build_batch_prefix: not a batch algorithm");
    }

    std::vector<VertexIndex::Neighbor> neighbors;
    for (int v = 0; v <= card; ++v) {
        const Point& pv = g.vertices[static_cast<std::size_t>(v)];
        neighbors.clear();
        if (spec.algorithm == Algorithm::kSPRM || spec.algorithm == Algorithm::kPRMstar) {
            for (auto& nb : index.k_nearest(pv, k + 1))
                if (nb.id != v && static_cast<int>(neighbors.size()) < k) neighbors.push_back(std::move(nb));
        } else if (spec.algorithm == Algorithm::boundedDegreeSPRM) {
            std::vector<char> in_k(static_cast<std::size_t>(card) + 1, 0);
            for (const auto& nb : index.k_nearest(pv, k + 1))
                if (nb.id != v) in_k[static_cast<std::size_t>(nb.id)] = 1;
            for (auto& nb : index.near(pv, radius))
                if (nb.id != v && in_k[static_cast<std::size_t>(nb.id)]) neighbors.push_back(std::move(nb));
        } else {
            for (auto& nb : index.near(pv, radius))
                if (nb.id != v) neighbors.push_back(std::move(nb));
        }
        for (const auto& u : neighbors) {
            if (collision_free_counted(pv, u.point, s, trace)) {
                if (g.add_edge_pair(v, u.id, line_integral_cost(pv, u.point, s)))
                    trace.edges_added += 2;
            }
        }
    }
    return g;
}

}  // namespace detail

/// Batch roadmaps: sPRM and its k-nearest / bounded-degree / variable-radius
/// variants, plus PRM* and k-nearest PRM*. Checkpoints are realized by
/// rebuilding on sample prefixes with the same sample sequence.
inline PlannerResult build_sprm(const Scenario& s, const PlannerSpec& spec, RngStream& rng,
                                const PlannerOptions& opts = {}) {
    if (!is_batch(spec.algorithm)) throw std::invalid_argument("build_sprm: wrong algorithm");
    spec.validate();
    const double mu_free = free_space_measure(s);

    std::vector<Point> samples;
    samples.reserve(static_cast<std::size_t>(spec.n) + 1);
    samples.push_back(s.x_init);
    for (int i = 0; i < spec.n; ++i) samples.push_back(sample_free(rng, s));

    PlannerResult out;
    detail::TraceRecorder rec(opts, spec.n);
    // Starred radius/k rules need card >= 2 to be defined.
    const bool starred = spec.algorithm == Algorithm::PRMstar || spec.algorithm == Algorithm::kPRMstar ||
                         spec.algorithm == Algorithm::variableRadiusSPRM;
    const int min_card = starred ? 2 : 1;

    for (int card : rec.batch_prefixes(min_card)) {
        RoadmapGraph g = detail::build_batch_prefix(s, spec, samples, card, mu_free, out.trace);
        rec.record(out.trace, card, query_best_path(g, s).cost);
        if (opts.snapshot) rec.off_clock([&] { opts.snapshot(card, g); });
        if (card == spec.n) out.graph = std::move(g);
    }
    out.trace.iterations = spec.n;
    return out;
}

inline PlannerResult build_prm_star(const Scenario& s, const PlannerSpec& spec, RngStream& rng,
                                    const PlannerOptions& opts = {}) {
    if (spec.algorithm != Algorithm::PRMstar && spec.algorithm != Algorithm::kPRMstar)
        throw std::invalid_argument("build_prm_star: wrong algorithm");
    return build_sprm(s, spec, rng, opts);
}

/// Rapidly-exploring random tree rooted at x_init.
inline PlannerResult build_rrt(const Scenario& s, const PlannerSpec& spec, RngStream& rng,
                               const PlannerOptions& opts = {}) {
    if (spec.algorithm != Algorithm::RRT) throw std::invalid_argument("build_rrt: wrong algorithm");
    spec.validate();
    const double eta = spec.resolved_eta(s.d);

    PlannerResult out;
    RunTrace& trace = out.trace;
    RoadmapGraph& g = out.graph;
    VertexIndex index(s.d);
    detail::TraceRecorder rec(opts, spec.n);

    std::vector<int> parent{0};
    std::vector<double> parent_cost{0.0};
    std::vector<double> cost{0.0};
    g.add_vertex(s.x_init);
    index.insert(s.x_init, 0);
    double best = s.in_goal(s.x_init) ? 0.0 : kInf;

    for (int i = 1; i <= spec.n; ++i) {
        const Point x_rand = sample_free(rng, s);
        const auto nn = index.nearest(x_rand);
        const Point x_new = steer(nn.point, x_rand, eta);
        if (detail::collision_free_counted(nn.point, x_new, s, trace)) {
            const int id = g.add_vertex(x_new);
            index.insert(x_new, id);
            const double ec = line_integral_cost(nn.point, x_new, s);
            parent.push_back(nn.id);
            parent_cost.push_back(ec);
            cost.push_back(cost[static_cast<std::size_t>(nn.id)] + ec);
            ++trace.edges_added;
            if (s.in_goal(x_new)) best = std::min(best, cost.back());
        }
        if (rec.due(i)) {
            rec.record(trace, i, best);
            if (opts.snapshot)
                rec.off_clock([&] { opts.snapshot(i, detail::make_tree_graph(g.vertices, parent, parent_cost)); });
        }
    }
    g.finalize_tree(std::move(parent), std::move(parent_cost));
    trace.iterations = spec.n;
    return out;
}

/// Rapidly-exploring random graph: RRT vertex admission, then symmetric
/// connections to every collision-free vertex in the shrinking neighbor set.
inline PlannerResult build_rrg(const Scenario& s, const PlannerSpec& spec, RngStream& rng,
                               const PlannerOptions& opts = {}) {
    if (spec.algorithm != Algorithm::RRG && spec.algorithm != Algorithm::kRRG)
        throw std::invalid_argument("build_rrg: wrong algorithm");
    spec.validate();
    const bool k_variant = spec.algorithm == Algorithm::kRRG;
    const double eta = spec.resolved_eta(s.d);
    const double mu_free = free_space_measure(s);

    PlannerResult out;
    RunTrace& trace = out.trace;
    RoadmapGraph& g = out.graph;
    VertexIndex index(s.d);
    detail::TraceRecorder rec(opts, spec.n);

    g.add_vertex(s.x_init);
    index.insert(s.x_init, 0);
    const auto goal_pred = [&s](const Point& p) { return s.in_goal(p); };

    for (int i = 1; i <= spec.n; ++i) {
        const Point x_rand = sample_free(rng, s);
        const auto nn = index.nearest(x_rand);
        const Point x_new = steer(nn.point, x_rand, eta);
        if (detail::collision_free_counted(nn.point, x_new, s, trace)) {
            // Neighbor set uses the cardinality before x_new is inserted.
            const int card = static_cast<int>(g.vertices.size());
            std::vector<VertexIndex::Neighbor> near;
            if (k_variant) {
                near = index.k_nearest(x_new, k_of_n(card, s.d, spec.k_factor));
            } else if (card >= 2) {
                const double r = std::min(radius_prm_star(card, s.d, mu_free, spec.gamma_factor), eta);
                near = index.near(x_new, r);
            }
            const int id = g.add_vertex(x_new);
            index.insert(x_new, id);
            if (g.add_edge_pair(nn.id, id, line_integral_cost(nn.point, x_new, s)))
                trace.edges_added += 2;
            for (const auto& nb : near) {
                if (detail::collision_free_counted(nb.point, x_new, s, trace)) {
                    if (g.add_edge_pair(nb.id, id, line_integral_cost(nb.point, x_new, s)))
                        trace.edges_added += 2;
                }
            }
        }
        if (rec.due(i)) {
            rec.record(trace, i, shortest_path(g, 0, goal_pred).cost);
            if (opts.snapshot) rec.off_clock([&] { opts.snapshot(i, g); });
        }
        if (opts.inspect) opts.inspect(i, g);
    }
    trace.iterations = spec.n;
    return out;
}

/// RRT*: RRG vertex admission, minimum-cost parent choice over the neighbor
/// set, then a rewiring pass that re-parents neighbors through the new vertex
/// whenever that lowers their root cost. Root costs are cached lazily: any
/// structural change bumps an epoch counter and costs are recomputed on read
/// by walking the parent chain.
inline PlannerResult build_rrt_star(const Scenario& s, const PlannerSpec& spec, RngStream& rng,
                                    const PlannerOptions& opts = {}) {
    if (spec.algorithm != Algorithm::RRTstar && spec.algorithm != Algorithm::kRRTstar)
        throw std::invalid_argument("build_rrt_star: wrong algorithm");
    spec.validate();
    const bool k_variant = spec.algorithm == Algorithm::kRRTstar;
    const double eta = spec.resolved_eta(s.d);
    const double mu_free = free_space_measure(s);

    PlannerResult out;
    RunTrace& trace = out.trace;
    VertexIndex index(s.d);
    detail::TraceRecorder rec(opts, spec.n);

    std::vector<Point> vertices{s.x_init};
    std::vector<int> parent{0};
    std::vector<double> pedge{0.0};
    std::vector<double> cached{0.0};
    std::vector<std::uint64_t> stamp{0};
    std::uint64_t epoch = 1;
    std::vector<int> goal_ids;
    std::vector<int> chain;

    const std::function<double(int)> cost_of = [&](int v) -> double {
        chain.clear();
        int cur = v;
        while (stamp[static_cast<std::size_t>(cur)] != epoch &&
               parent[static_cast<std::size_t>(cur)] != cur) {
            chain.push_back(cur);
            cur = parent[static_cast<std::size_t>(cur)];
        }
        double c;
        if (stamp[static_cast<std::size_t>(cur)] == epoch) {
            c = cached[static_cast<std::size_t>(cur)];
        } else {
            c = 0.0;  // root
            cached[static_cast<std::size_t>(cur)] = 0.0;
            stamp[static_cast<std::size_t>(cur)] = epoch;
        }
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            c += pedge[static_cast<std::size_t>(*it)];
            cached[static_cast<std::size_t>(*it)] = c;
            stamp[static_cast<std::size_t>(*it)] = epoch;
        }
        return c;
    };

    index.insert(s.x_init, 0);
    if (s.in_goal(s.x_init)) goal_ids.push_back(0);
    std::vector<int> near_ids;

    const auto best_goal_cost = [&]() {
        double best = kInf;
        for (int v : goal_ids) best = std::min(best, cost_of(v));
        return best;
    };

    for (int i = 1; i <= spec.n; ++i) {
        const Point x_rand = sample_free(rng, s);
        const auto nn = index.nearest(x_rand);
        const Point x_new = steer(nn.point, x_rand, eta);
        int new_id = -1;
        near_ids.clear();
        std::vector<VertexIndex::Neighbor> near;
        if (detail::collision_free_counted(nn.point, x_new, s, trace)) {
            const int card = static_cast<int>(vertices.size());
            if (k_variant) {
                near = index.k_nearest(x_new, k_of_n(card, s.d, spec.k_factor));
            } else if (card >= 2) {
                const double r = std::min(radius_prm_star(card, s.d, mu_free, spec.gamma_factor), eta);
                near = index.near(x_new, r);
            }
            for (const auto& nb : near) near_ids.push_back(nb.id);

            // Connect along a minimum-cost path.
            int x_min = nn.id;
            double edge_min = line_integral_cost(nn.point, x_new, s);
            double c_min = cost_of(nn.id) + edge_min;
            for (const auto& nb : near) {
                if (nb.id == nn.id) continue;
                if (!detail::collision_free_counted(nb.point, x_new, s, trace)) continue;
                const double ec = line_integral_cost(nb.point, x_new, s);
                const double c = cost_of(nb.id) + ec;
                if (c < c_min) {
                    x_min = nb.id;
                    edge_min = ec;
                    c_min = c;
                }
            }
            new_id = static_cast<int>(vertices.size());
            vertices.push_back(x_new);
            parent.push_back(x_min);
            pedge.push_back(edge_min);
            cached.push_back(c_min);
            stamp.push_back(epoch);
            index.insert(x_new, new_id);
            ++trace.edges_added;
            if (s.in_goal(x_new)) goal_ids.push_back(new_id);

            // Rewire the tree.
            for (const auto& nb : near) {
                if (nb.id == x_min) continue;
                if (!detail::collision_free_counted(x_new, nb.point, s, trace)) continue;
                const double ec = line_integral_cost(x_new, nb.point, s);
                const double c_through_new = cost_of(new_id) + ec;
                if (c_through_new < cost_of(nb.id)) {
                    parent[static_cast<std::size_t>(nb.id)] = new_id;
                    pedge[static_cast<std::size_t>(nb.id)] = ec;
                    ++epoch;
                    cached[static_cast<std::size_t>(nb.id)] = c_through_new;
                    stamp[static_cast<std::size_t>(nb.id)] = epoch;
                    cached[static_cast<std::size_t>(new_id)] = c_min;
                    stamp[static_cast<std::size_t>(new_id)] = epoch;
                }
            }
        }
        if (rec.due(i)) {
            rec.record(trace, i, best_goal_cost());
            if (opts.snapshot)
                rec.off_clock([&] { opts.snapshot(i, detail::make_tree_graph(vertices, parent, pedge)); });
        }
        if (opts.inspect_rrt_star)
            opts.inspect_rrt_star({i, vertices, parent, pedge, new_id, near_ids, cost_of});
    }

    for (const Point& p : vertices) out.graph.add_vertex(p);
    out.graph.finalize_tree(std::move(parent), std::move(pedge));
    trace.iterations = spec.n;
    return out;
}

inline PlannerResult run_planner(const Scenario& s, const PlannerSpec& spec, RngStream& rng,
                                 const PlannerOptions& opts = {}) {
    switch (spec.algorithm) {
        case Algorithm::PRM: return build_prm(s, spec, rng, opts);
        case Algorithm::sPRM:
        case Algorithm::kSPRM:
        case Algorithm::boundedDegreeSPRM:
        case Algorithm::variableRadiusSPRM:
        case Algorithm::PRMstar:
        case Algorithm::kPRMstar: return build_sprm(s, spec, rng, opts);
        case Algorithm::RRT: return build_rrt(s, spec, rng, opts);
        case Algorithm::RRG:
        case Algorithm::kRRG: return build_rrg(s, spec, rng, opts);
        case Algorithm::RRTstar:
        case Algorithm::kRRTstar: return build_rrt_star(s, spec, rng, opts);
    }
    throw std::logic_error("run_planner: unhandled algorithm");
}

inline PlannerResult run_planner(const Scenario& s, const PlannerSpec& spec,
                                 const PlannerOptions& opts = {}) {
    RngStream rng(spec.seed);
    return run_planner(s, spec, rng, opts);
}

}  // namespace pathlab
