#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <utility>

#include "pathlab/planners.hpp"
#include "pathlab/rgg.hpp"
#include "scenarios.hpp"

using namespace pathlab;
using testlab::central_obstacle;
using testlab::cluttered;
using testlab::free_square;

namespace {

PlannerSpec make_spec(Algorithm a, int n, std::uint64_t seed = 1) {
    PlannerSpec spec;
    spec.algorithm = a;
    spec.n = n;
    spec.seed = seed;
    switch (a) {
        case Algorithm::PRM:
        case Algorithm::sPRM: spec.fixed_radius = 0.2; break;
        case Algorithm::variableRadiusSPRM: spec.fixed_radius = 0.8; break;
        case Algorithm::boundedDegreeSPRM: spec.fixed_radius = 0.2; break;
        default: break;
    }
    return spec;
}

int component_count(const RoadmapGraph& g) {
    std::set<int> roots;
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        roots.insert(g.components.find(static_cast<int>(v)));
    return static_cast<int>(roots.size());
}

bool series_nonincreasing(const RunTrace& trace) {
    for (std::size_t i = 1; i < trace.points.size(); ++i)
        if (trace.points[i].best_cost > trace.points[i - 1].best_cost) return false;
    return true;
}

}  // namespace

TEST_CASE("steer") {
    CHECK(steer({0.0, 0.0}, {1.0, 0.0}, 0.5) == Point{0.5, 0.0});
    CHECK(steer({0.0, 0.0}, {0.3, 0.0}, 0.5) == Point{0.3, 0.0});
    CHECK(steer({0.2, 0.7}, {0.2, 0.7}, 0.1) == Point{0.2, 0.7});

    // No point of the eta-ball is strictly closer to the target.
    RngStream rng(17);
    const Point x{0.2, 0.3}, y{0.9, 0.8};
    const double eta = 0.4;
    const Point z = steer(x, y, eta);
    const double best = distance(z, y);
    CHECK(distance(x, z) <= eta + 1e-12);
    for (int i = 0; i < 10000; ++i) {
        Point cand{x[0] + (2.0 * rng.next_double() - 1.0) * eta,
                   x[1] + (2.0 * rng.next_double() - 1.0) * eta};
        if (distance(x, cand) > eta) continue;
        CHECK(distance(cand, y) >= best - 1e-12);
    }
}

TEST_CASE("starred radius and neighbor schedules") {
    CHECK(gamma_star(2, 1.0) == Catch::Approx(1.3819765978853).margin(1e-9));
    CHECK(radius_prm_star(1000, 2, 1.0, 1.1) == Catch::Approx(0.12634).margin(1e-5));
    CHECK_THROWS_AS(radius_prm_star(1, 2, 1.0, 1.1), std::invalid_argument);
    double prev = radius_prm_star(3, 2, 1.0, 1.1);
    for (int n = 4; n < 400; ++n) {
        const double r = radius_prm_star(n, 2, 1.0, 1.1);
        CHECK(r < prev);
        prev = r;
    }

    CHECK(k_star_coefficient(2) == Catch::Approx(4.0774225).margin(1e-6));
    CHECK(k_factor_for_two_e(2) * k_star_coefficient(2) == Catch::Approx(5.43656365).margin(1e-7));
    CHECK(k_factor_for_two_e(5) * k_star_coefficient(5) == Catch::Approx(5.43656365).margin(1e-7));
    CHECK(k_of_n(1000, 2, 1.01) == 29);
    CHECK(k_of_n(1, 2, 1.5) == 1);
}

TEST_CASE("PRM builds a forest") {
    const Scenario s = free_square();
    RngStream rng(3);

    PlannerSpec empty_spec = make_spec(Algorithm::PRM, 0);
    CHECK(build_prm(s, empty_spec, rng).graph.vertices.empty());

    // Unbounded radius in free space: every connection attempt succeeds and the
    // same-component rule forces a single spanning tree.
    PlannerSpec spec = make_spec(Algorithm::PRM, 50);
    spec.fixed_radius = std::sqrt(2.0);
    const PlannerResult res = build_prm(s, spec, rng);
    CHECK(res.graph.vertices.size() == 50);
    CHECK(component_count(res.graph) == 1);
    CHECK(res.graph.undirected_edge_count() == 49);

    // Forest invariant on an obstacle scenario with a modest radius.
    PlannerSpec small = make_spec(Algorithm::PRM, 300);
    small.fixed_radius = 0.12;
    RngStream rng2(9);
    const PlannerResult forest = build_prm(cluttered(), small, rng2);
    CHECK(forest.graph.undirected_edge_count() ==
          forest.graph.vertices.size() - static_cast<std::size_t>(component_count(forest.graph)));
}

TEST_CASE("sPRM with unbounded radius is the complete graph") {
    const Scenario s = free_square();
    PlannerSpec spec = make_spec(Algorithm::sPRM, 20);
    spec.fixed_radius = std::sqrt(2.0);
    RngStream rng(4);
    const PlannerResult res = build_sprm(s, spec, rng);
    CHECK(res.graph.vertices.size() == 21);
    CHECK(res.graph.edges.size() == 21 * 20);
    // Bookkeeping identity for the radius rule: every successful check
    // corresponds to one directed edge.
    CHECK(res.trace.collision_successes == static_cast<long long>(res.graph.edges.size()));
    CHECK(res.trace.collision_calls == 21 * 20);
}

TEST_CASE("kSPRM collision budget is k per vertex") {
    const Scenario s = free_square();
    PlannerSpec spec = make_spec(Algorithm::kSPRM, 60);
    spec.fixed_k = 7;
    RngStream rng(5);
    const PlannerResult res = build_sprm(s, spec, rng);
    CHECK(res.trace.collision_calls == 61 * 7);
}

TEST_CASE("RRT stays a single vertex when walled in") {
    // x_init sits on the shared face of two obstacles; every outgoing segment
    // crosses an interior.
    Scenario s;
    s.d = 2;
    s.x_init = {0.5, 0.5};
    s.goal = {{0.85, 0.85}, {0.95, 0.95}};
    s.obstacles = {Box{{0.2, 0.2}, {0.5, 0.8}}, Box{{0.5, 0.2}, {0.8, 0.8}}};
    s.validate();

    PlannerSpec spec = make_spec(Algorithm::RRT, 200);
    RngStream rng(6);
    const PlannerResult res = build_rrt(s, spec, rng);
    CHECK(res.graph.vertices.size() == 1);
    CHECK(res.trace.collision_calls == 200);
    CHECK(res.trace.collision_successes == 0);
}

TEST_CASE("free-space RRT is the online nearest-neighbor graph") {
    const Scenario s = free_square();
    PlannerSpec spec = make_spec(Algorithm::RRT, 80);
    RngStream rng(7);
    const PlannerResult res = build_rrt(s, spec, rng);
    CHECK(res.graph.vertices.size() == 81);
    REQUIRE(is_valid_tree(res.graph));

    const RoadmapGraph onn = online_nn_graph(res.graph.vertices);
    REQUIRE(onn.parent.size() == res.graph.parent.size());
    for (std::size_t v = 0; v < onn.parent.size(); ++v)
        CHECK(onn.parent[v] == res.graph.parent[v]);
}

TEST_CASE("RRT, RRG and RRT* share the vertex sequence bit-exactly") {
    const Scenario s = central_obstacle();
    const int n = 600;
    const PlannerResult rrt = run_planner(s, make_spec(Algorithm::RRT, n, 11));
    const PlannerResult rrg = run_planner(s, make_spec(Algorithm::RRG, n, 11));
    const PlannerResult rrts = run_planner(s, make_spec(Algorithm::RRTstar, n, 11));
    REQUIRE(rrt.graph.vertices.size() == rrg.graph.vertices.size());
    REQUIRE(rrt.graph.vertices.size() == rrts.graph.vertices.size());
    for (std::size_t v = 0; v < rrt.graph.vertices.size(); ++v) {
        REQUIRE(rrt.graph.vertices[v] == rrg.graph.vertices[v]);
        REQUIRE(rrt.graph.vertices[v] == rrts.graph.vertices[v]);
    }
}

TEST_CASE("RRT edges are a subgraph of RRG and best costs dominate") {
    const Scenario s = central_obstacle();
    const int n = 500;
    PlannerOptions opts;
    for (int c = 25; c <= n; c += 25) opts.checkpoints.push_back(c);

    RngStream r1(21), r2(21);
    const PlannerResult rrt = build_rrt(s, make_spec(Algorithm::RRT, n), r1, opts);
    const PlannerResult rrg = build_rrg(s, make_spec(Algorithm::RRG, n), r2, opts);

    for (std::size_t v = 1; v < rrt.graph.vertices.size(); ++v)
        CHECK(rrg.graph.has_edge_pair(rrt.graph.parent[v], static_cast<int>(v)));

    REQUIRE(rrt.trace.points.size() == rrg.trace.points.size());
    for (std::size_t i = 0; i < rrt.trace.points.size(); ++i)
        CHECK(rrg.trace.points[i].best_cost <= rrt.trace.points[i].best_cost);
}

TEST_CASE("RRG never loses to RRT at any iteration on shared samples") {
    const Scenario s = central_obstacle();
    const int n = 400;
    PlannerOptions every;
    every.trace_every_iteration = true;
    every.measure_time = false;
    RngStream r1(29), r2(29);
    const PlannerResult rrt = build_rrt(s, make_spec(Algorithm::RRT, n), r1, every);
    const PlannerResult rrg = build_rrg(s, make_spec(Algorithm::RRG, n), r2, every);
    REQUIRE(rrt.trace.points.size() == static_cast<std::size_t>(n));
    REQUIRE(rrg.trace.points.size() == static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < rrt.trace.points.size(); ++i)
        REQUIRE(rrg.trace.points[i].best_cost <= rrt.trace.points[i].best_cost);
}

TEST_CASE("RRG stays connected after every iteration") {
    const Scenario s = cluttered();
    PlannerSpec spec = make_spec(Algorithm::RRG, 400);
    PlannerOptions opts;
    opts.inspect = [](int, const RoadmapGraph& g) {
        REQUIRE(largest_component_fraction(g) == 1.0);
    };
    RngStream rng(13);
    build_rrg(s, spec, rng, opts);
}

TEST_CASE("RRT* maintains a valid tree with consistent costs and local optimality") {
    const Scenario s = central_obstacle();
    PlannerSpec spec = make_spec(Algorithm::RRTstar, 1500);
    PlannerOptions opts;
    int inspected = 0;
    opts.inspect_rrt_star = [&](const RrtStarState& st) {
        ++inspected;
        // Parent structure is a tree rooted at 0.
        REQUIRE(st.parent[0] == 0);
        if (st.iteration % 50 != 0 && st.new_vertex < 0) return;
        for (std::size_t v = 0; v < st.parent.size(); ++v) {
            // Independent recompute by walking the parent chain.
            double expect = 0.0;
            std::size_t steps = 0;
            for (int cur = static_cast<int>(v); st.parent[static_cast<std::size_t>(cur)] != cur;
                 cur = st.parent[static_cast<std::size_t>(cur)]) {
                expect += st.parent_edge_cost[static_cast<std::size_t>(cur)];
                REQUIRE(++steps <= st.parent.size());
            }
            REQUIRE(st.cost_of(static_cast<int>(v)) == Catch::Approx(expect).margin(1e-9));
        }
        // Rewiring postcondition: no examined neighbor can improve through the
        // new vertex.
        if (st.new_vertex >= 0) {
            const Point& x_new = st.vertices[static_cast<std::size_t>(st.new_vertex)];
            for (int u : st.near_ids) {
                if (!segment_collision_free(x_new, st.vertices[static_cast<std::size_t>(u)], s))
                    continue;
                const double through_new =
                    st.cost_of(st.new_vertex) +
                    line_integral_cost(x_new, st.vertices[static_cast<std::size_t>(u)], s);
                REQUIRE(st.cost_of(u) <= through_new + 1e-9);
            }
        }
    };
    RngStream rng(23);
    const PlannerResult res = build_rrt_star(s, spec, rng, opts);
    CHECK(inspected == 1500);
    CHECK(is_valid_tree(res.graph));
}

TEST_CASE("paired seeds: RRT* never loses to RRT") {
    const Scenario s = free_square();
    const int n = 800;
    PlannerOptions opts;
    for (int c = 40; c <= n; c += 40) opts.checkpoints.push_back(c);
    RngStream r1(31), r2(31);
    const PlannerResult rrt = build_rrt(s, make_spec(Algorithm::RRT, n), r1, opts);
    const PlannerResult rrts = build_rrt_star(s, make_spec(Algorithm::RRTstar, n), r2, opts);
    REQUIRE(rrt.trace.points.size() == rrts.trace.points.size());
    for (std::size_t i = 0; i < rrt.trace.points.size(); ++i)
        CHECK(rrts.trace.points[i].best_cost <= rrt.trace.points[i].best_cost);
}

TEST_CASE("PRM* neighbor radius matches the schedule and degrees grow") {
    const Scenario s = free_square();

    // Mean vertex degree in the log-neighbor regime grows with N.
    auto mean_degree = [&](int n, std::uint64_t seed) {
        PlannerSpec spec = make_spec(Algorithm::PRMstar, n, seed);
        RngStream rng(seed);
        const PlannerResult res = build_sprm(s, spec, rng);
        return static_cast<double>(res.graph.edges.size()) /
               static_cast<double>(res.graph.vertices.size());
    };
    double small_sum = 0.0, large_sum = 0.0;
    for (std::uint64_t t = 0; t < 20; ++t) {
        small_sum += mean_degree(500, 100 + t);
        large_sum += mean_degree(4000, 200 + t);
    }
    CHECK(large_sum / 20.0 > small_sum / 20.0);
}

TEST_CASE("kPRM* vertices meet the minimum degree bound in free space") {
    const Scenario s = free_square();
    PlannerSpec spec = make_spec(Algorithm::kPRMstar, 300, 41);
    RngStream rng(41);
    const PlannerResult res = build_sprm(s, spec, rng);
    const int k = k_of_n(300, 2, spec.k_factor);
    std::vector<int> degree(res.graph.vertices.size(), 0);
    std::set<std::pair<int, int>> seen;
    for (const auto& e : res.graph.edges) {
        const std::pair<int, int> key{std::min(e.u, e.v), std::max(e.u, e.v)};
        if (!seen.insert(key).second) continue;
        ++degree[static_cast<std::size_t>(e.u)];
        ++degree[static_cast<std::size_t>(e.v)];
    }
    for (int deg : degree) CHECK(deg >= k);
}

TEST_CASE("collision-call counters") {
    const Scenario s = central_obstacle();

    // RRT calls the collision test exactly once per iteration.
    PlannerOptions every;
    every.trace_every_iteration = true;
    RngStream r1(51);
    const PlannerResult rrt = build_rrt(s, make_spec(Algorithm::RRT, 400), r1, every);
    CHECK(rrt.trace.collision_calls == 400);
    for (std::size_t i = 1; i < rrt.trace.points.size(); ++i)
        CHECK(rrt.trace.points[i].collision_calls - rrt.trace.points[i - 1].collision_calls == 1);

    // Starred planners: mean calls per iteration grow no faster than log N.
    auto calls_per_iter = [&](Algorithm a, int n) {
        RngStream rng(77);
        const PlannerResult res = run_planner(s, make_spec(a, n), rng);
        return static_cast<double>(res.trace.collision_calls) / n;
    };
    const double log_ratio = std::log(10000.0) / std::log(1000.0);
    CHECK(calls_per_iter(Algorithm::PRMstar, 10000) / calls_per_iter(Algorithm::PRMstar, 1000) <
          2.0 * log_ratio);
    CHECK(calls_per_iter(Algorithm::RRTstar, 10000) / calls_per_iter(Algorithm::RRTstar, 1000) <
          2.0 * log_ratio);
}

TEST_CASE("best-cost series are monotone exactly for the planners that promise it") {
    const Scenario s = central_obstacle();
    PlannerOptions every;
    every.trace_every_iteration = true;
    every.measure_time = false;

    const std::vector<std::pair<Algorithm, int>> monotone = {
        {Algorithm::PRM, 400}, {Algorithm::sPRM, 250}, {Algorithm::RRT, 2000},
        {Algorithm::RRG, 500}, {Algorithm::RRTstar, 1200}};
    for (const auto& [alg, n] : monotone) {
        RngStream rng(61);
        const PlannerResult res = run_planner(s, make_spec(alg, n), rng, every);
        INFO(algorithm_name(alg));
        CHECK(series_nonincreasing(res.trace));
    }

    // kSPRM, PRM* and k-PRM* rebuild their neighbor sets as N grows, so their
    // series may increase; deliberately no monotonicity assertion here.
    for (Algorithm alg : {Algorithm::kSPRM, Algorithm::PRMstar, Algorithm::kPRMstar}) {
        RngStream rng(61);
        const PlannerResult res = run_planner(s, make_spec(alg, 250), rng, every);
        for (std::size_t i = 1; i < res.trace.points.size(); ++i)
            CHECK(res.trace.points[i].iteration > res.trace.points[i - 1].iteration);
    }
}

TEST_CASE("subcritical variable-radius sPRM fails to connect") {
    // r(N) = gamma * N^(-1/d) with gamma^d well below the percolation window
    // keeps every component microscopic, so the start never reaches the goal.
    const Scenario s = central_obstacle();
    PlannerSpec spec;
    spec.algorithm = Algorithm::variableRadiusSPRM;
    spec.fixed_radius = 0.5;  // lambda = 0.25 in the thermodynamic limit
    int successes = 0;
    for (int t = 0; t < 10; ++t) {
        spec.n = 2000;
        RngStream rng(1000 + static_cast<std::uint64_t>(t));
        const PlannerResult res = build_sprm(s, spec, rng);
        if (query_best_path(res.graph, s).found()) ++successes;
        CHECK(largest_component_fraction(res.graph) < 0.05);
    }
    CHECK(successes == 0);
}

TEST_CASE("planner outputs are sound") {
    const Scenario s = cluttered();
    for (int a = 0; a <= static_cast<int>(Algorithm::kRRTstar); ++a) {
        const Algorithm alg = static_cast<Algorithm>(a);
        INFO(algorithm_name(alg));
        RngStream rng(71);
        const PlannerResult res = run_planner(s, make_spec(alg, 200), rng);
        for (const Point& v : res.graph.vertices) CHECK(point_in_free(v, s));
        for (const auto& e : res.graph.edges)
            CHECK(segment_collision_free(res.graph.vertices[static_cast<std::size_t>(e.u)],
                                         res.graph.vertices[static_cast<std::size_t>(e.v)], s));
        if (res.graph.is_tree) CHECK(is_valid_tree(res.graph));
    }
}

TEST_CASE("runs are deterministic functions of the seed") {
    const Scenario s = cluttered();
    PlannerOptions opts;
    opts.measure_time = false;
    opts.checkpoints = {50, 150, 300};
    for (Algorithm alg : {Algorithm::RRTstar, Algorithm::PRMstar, Algorithm::PRM}) {
        const PlannerResult a = run_planner(s, make_spec(alg, 300, 99), opts);
        const PlannerResult b = run_planner(s, make_spec(alg, 300, 99), opts);
        REQUIRE(a.graph.vertices.size() == b.graph.vertices.size());
        for (std::size_t v = 0; v < a.graph.vertices.size(); ++v)
            REQUIRE(a.graph.vertices[v] == b.graph.vertices[v]);
        REQUIRE(a.trace.points.size() == b.trace.points.size());
        for (std::size_t i = 0; i < a.trace.points.size(); ++i) {
            REQUIRE(a.trace.points[i].best_cost == b.trace.points[i].best_cost);
            REQUIRE(a.trace.points[i].collision_calls == b.trace.points[i].collision_calls);
        }
    }
}

TEST_CASE("query phase attaches x_init for PRM roadmaps") {
    const Scenario s = free_square();
    PlannerSpec spec = make_spec(Algorithm::PRM, 400, 83);
    spec.fixed_radius = 0.25;
    RngStream rng(83);
    const PlannerResult res = build_prm(s, spec, rng);
    const QueryResult q = query_best_path(res.graph, s, spec.fixed_radius);
    REQUIRE(q.found());
    CHECK(q.path->waypoints.front() == s.x_init);
    CHECK(s.in_goal(q.path->waypoints.back()));
    CHECK(q.cost >= distance_to_box(s.x_init, s.goal) - 1e-12);

    // Batch planners already contain x_init as vertex 0.
    PlannerSpec sprm = make_spec(Algorithm::sPRM, 300, 84);
    sprm.fixed_radius = 0.25;
    RngStream rng2(84);
    const PlannerResult batch = build_sprm(s, sprm, rng2);
    const QueryResult q2 = query_best_path(batch.graph, s);
    REQUIRE(q2.found());
    CHECK(q2.path->waypoints.front() == s.x_init);
}

TEST_CASE("planner spec validation") {
    PlannerSpec bad = make_spec(Algorithm::PRMstar, 100);
    bad.gamma_factor = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    PlannerSpec bad_k = make_spec(Algorithm::kRRTstar, 100);
    bad_k.k_factor = 0.9;
    CHECK_THROWS_AS(bad_k.validate(), std::invalid_argument);

    PlannerSpec no_radius;
    no_radius.algorithm = Algorithm::PRM;
    no_radius.n = 10;
    CHECK_THROWS_AS(no_radius.validate(), std::invalid_argument);

    CHECK(make_spec(Algorithm::kSPRM, 10).resolved_k() == 15);
    CHECK(make_spec(Algorithm::boundedDegreeSPRM, 10).resolved_k() == 20);
}
