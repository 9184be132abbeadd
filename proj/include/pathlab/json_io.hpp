#pragma once

// JSON schemas for scenarios, planner specs and roadmap dumps.
//
// Scenario:  {"d": 2, "obstacles": [{"lo": [..], "hi": [..]}, ...],
//             "x_init": [..], "goal": {"lo": [..], "hi": [..]},
//             "cost_regions": [{"lo": [..], "hi": [..], "weight": w}, ...],
//             "planner": {...}}            (cost_regions and planner optional)
// Planner:   {"algorithm": "RRTstar", "n": 20000, "r": 0.1, "k": 15,
//             "gamma_factor": 1.1, "k_factor": 1.1, "eta": 0.5, "seed": 1}
// Graph:     {"meta": {...}, "vertices": [[..], ...],
//             "edges": [[u, v, cost], ...], "parent": [..]}   (parent for trees)

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pathlab/geometry.hpp"
#include "pathlab/graph.hpp"
#include "pathlab/planners.hpp"

namespace pathlab {

using json = nlohmann::json;

inline json point_to_json(const Point& p) { return json(p.coords); }

inline Point point_from_json(const json& j) { return Point(j.get<std::vector<double>>()); }

inline json box_to_json(const Box& b) { return json{{"lo", point_to_json(b.lo)}, {"hi", point_to_json(b.hi)}}; }

inline Box box_from_json(const json& j) {
    return Box{point_from_json(j.at("lo")), point_from_json(j.at("hi"))};
}

inline json scenario_to_json(const Scenario& s) {
    json j{{"d", s.d}, {"x_init", point_to_json(s.x_init)}, {"goal", box_to_json(s.goal)}};
    j["obstacles"] = json::array();
    for (const Box& o : s.obstacles) j["obstacles"].push_back(box_to_json(o));
    if (!s.cost_regions.empty()) {
        j["cost_regions"] = json::array();
        for (const CostRegion& r : s.cost_regions) {
            json rj = box_to_json(r.box);
            rj["weight"] = r.weight;
            j["cost_regions"].push_back(rj);
        }
    }
    return j;
}

inline Scenario scenario_from_json(const json& j) {
    Scenario s;
    s.d = j.at("d").get<int>();
    s.x_init = point_from_json(j.at("x_init"));
    s.goal = box_from_json(j.at("goal"));
    for (const json& o : j.value("obstacles", json::array())) s.obstacles.push_back(box_from_json(o));
    for (const json& r : j.value("cost_regions", json::array()))
        s.cost_regions.push_back({box_from_json(r), r.at("weight").get<double>()});
    s.validate();
    return s;
}

inline json planner_spec_to_json(const PlannerSpec& spec) {
    json j{{"algorithm", algorithm_name(spec.algorithm)},
           {"n", spec.n},
           {"gamma_factor", spec.gamma_factor},
           {"k_factor", spec.k_factor},
           {"seed", spec.seed}};
    if (spec.fixed_radius) j["r"] = *spec.fixed_radius;
    if (spec.fixed_k) j["k"] = *spec.fixed_k;
    if (spec.eta) j["eta"] = *spec.eta;
    return j;
}

inline PlannerSpec planner_spec_from_json(const json& j) {
    PlannerSpec spec;
    spec.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
    spec.n = j.at("n").get<int>();
    if (j.contains("r")) spec.fixed_radius = j.at("r").get<double>();
    if (j.contains("k")) spec.fixed_k = j.at("k").get<int>();
    spec.gamma_factor = j.value("gamma_factor", spec.gamma_factor);
    spec.k_factor = j.value("k_factor", spec.k_factor);
    if (j.contains("eta")) spec.eta = j.at("eta").get<double>();
    spec.seed = j.value("seed", spec.seed);
    spec.validate();
    return spec;
}

inline json graph_to_json(const RoadmapGraph& g, const json& meta = json::object()) {
    json j;
    if (!meta.empty()) j["meta"] = meta;
    j["vertices"] = json::array();
    for (const Point& p : g.vertices) j["vertices"].push_back(point_to_json(p));
    j["edges"] = json::array();
    for (const auto& e : g.edges) j["edges"].push_back(json::array({e.u, e.v, e.cost}));
    if (g.is_tree) j["parent"] = g.parent;
    return j;
}

inline RoadmapGraph graph_from_json(const json& j) {
    RoadmapGraph g;
    for (const json& v : j.at("vertices")) g.add_vertex(point_from_json(v));
    for (const json& e : j.at("edges"))
        g.add_directed_edge(e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>());
    if (j.contains("parent")) {
        std::vector<int> parent = j.at("parent").get<std::vector<int>>();
        std::vector<double> pcost(parent.size(), 0.0);
        for (const auto& e : g.edges)
            if (e.v >= 0 && static_cast<std::size_t>(e.v) < parent.size() &&
                parent[static_cast<std::size_t>(e.v)] == e.u)
                pcost[static_cast<std::size_t>(e.v)] = e.cost;
        g.is_tree = true;
        g.parent = std::move(parent);
        g.parent_cost = std::move(pcost);
    }
    return g;
}

/// Parses a JSON file; parse failures are rethrown with the file name and the
/// offending line.
inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, line_start = 0;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                line_start = i + 1;
            }
        }
        const std::size_t line_end = text.find('\n', line_start);
        const std::string context = text.substr(
            line_start, (line_end == std::string::npos ? text.size() : line_end) - line_start);
        throw std::runtime_error(path + ":" + std::to_string(line) + ": " + e.what() +
                                 "\n  near: " + context);
    }
}

struct ScenarioFile {
    Scenario scenario;
    std::optional<PlannerSpec> planner;
};

inline ScenarioFile load_scenario_file(const std::string& path) {
    const json j = load_json_file(path);
    ScenarioFile out{scenario_from_json(j), std::nullopt};
    if (j.contains("planner")) out.planner = planner_spec_from_json(j.at("planner"));
    return out;
}

inline void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace pathlab
