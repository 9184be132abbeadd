#pragma once

// Roadmap storage and the query phase: union-find connectivity, Dijkstra
// shortest paths, and root-path costs for tree-shaped outputs.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "pathlab/geometry.hpp"

namespace pathlab {

class UnionFind {
public:
    int add() {
        parent_.push_back(static_cast<int>(parent_.size()));
        rank_.push_back(0);
        return parent_.back();
    }

    int find(int v) const {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }

    bool same(int a, int b) const { return find(a) == find(b); }

    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

    std::size_t size() const { return parent_.size(); }

private:
    mutable std::vector<int> parent_;
    std::vector<int> rank_;
};

/// Vertex set plus weighted directed edges. Tree-shaped outputs additionally
/// carry a parent map with parent[root] == root.
struct RoadmapGraph {
    struct Edge {
        int u;
        int v;
        double cost;
    };

    std::vector<Point> vertices;
    std::vector<Edge> edges;
    bool is_tree = false;
    std::vector<int> parent;
    std::vector<double> parent_cost;  // edge cost from parent, 0 at the root

    UnionFind components;

    int add_vertex(const Point& p) {
        vertices.push_back(p);
        return components.add();
    }

    void add_directed_edge(int u, int v, double cost) {
        edges.push_back({u, v, cost});
        components.unite(u, v);
    }

    /// Inserts (u,v) and (v,u) unless the pair is already present.
    /// Returns whether anything was added.
    bool add_edge_pair(int u, int v, double cost) {
        const std::uint64_t key = pair_key(u, v);
        if (!edge_keys_.insert(key).second) return false;
        edges.push_back({u, v, cost});
        edges.push_back({v, u, cost});
        components.unite(u, v);
        return true;
    }

    bool has_edge_pair(int u, int v) const { return edge_keys_.count(pair_key(u, v)) > 0; }

    std::size_t undirected_edge_count() const { return edge_keys_.size() + tree_edge_count_; }

    /// Turns parent/parent_cost arrays into the edge list of a directed tree.
    void finalize_tree(std::vector<int> parents, std::vector<double> costs) {
        is_tree = true;
        parent = std::move(parents);
        parent_cost = std::move(costs);
        edges.clear();
        tree_edge_count_ = 0;
        for (std::size_t v = 0; v < parent.size(); ++v) {
            if (parent[v] == static_cast<int>(v)) continue;
            edges.push_back({parent[v], static_cast<int>(v), parent_cost[v]});
            components.unite(parent[v], static_cast<int>(v));
            ++tree_edge_count_;
        }
    }

private:
    static std::uint64_t pair_key(int u, int v) {
        const std::uint64_t a = static_cast<std::uint32_t>(std::min(u, v));
        const std::uint64_t b = static_cast<std::uint32_t>(std::max(u, v));
        return (a << 32) | b;
    }

    std::unordered_set<std::uint64_t> edge_keys_;
    std::size_t tree_edge_count_ = 0;
};

inline bool same_component(const RoadmapGraph& g, int u, int v) {
    return g.components.same(u, v);
}

inline double largest_component_fraction(const RoadmapGraph& g) {
    if (g.vertices.empty()) throw std::invalid_argument("empty graph");
    std::vector<int> count(g.vertices.size(), 0);
    int best = 0;
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        best = std::max(best, ++count[static_cast<std::size_t>(g.components.find(static_cast<int>(v)))]);
    return static_cast<double>(best) / static_cast<double>(g.vertices.size());
}

/// Cost of the unique root-to-v path of a tree output. Accumulates from the
/// root downward so repeated evaluations reproduce the planner's arithmetic
/// exactly.
inline double tree_cost_of(const RoadmapGraph& g, int v) {
    if (!g.is_tree) throw std::logic_error("tree_cost_of requires a tree output");
    std::vector<int> chain;
    int cur = v;
    while (g.parent[static_cast<std::size_t>(cur)] != cur) {
        chain.push_back(cur);
        cur = g.parent[static_cast<std::size_t>(cur)];
        if (chain.size() > g.vertices.size()) throw std::logic_error("parent map contains a cycle");
    }
    double cost = 0.0;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
        cost += g.parent_cost[static_cast<std::size_t>(*it)];
    return cost;
}

/// True when the parent map forms a tree: one root with parent(root)==root,
/// every chain terminates at the root.
inline bool is_valid_tree(const RoadmapGraph& g) {
    if (!g.is_tree || g.parent.size() != g.vertices.size()) return false;
    int roots = 0;
    for (std::size_t v = 0; v < g.parent.size(); ++v)
        if (g.parent[v] == static_cast<int>(v)) ++roots;
    if (roots != 1) return false;
    for (std::size_t v = 0; v < g.parent.size(); ++v) {
        int cur = static_cast<int>(v);
        std::size_t steps = 0;
        while (g.parent[static_cast<std::size_t>(cur)] != cur) {
            cur = g.parent[static_cast<std::size_t>(cur)];
            if (++steps > g.parent.size()) return false;
        }
    }
    return true;
}

struct QueryResult {
    std::optional<PathPolyline> path;
    double cost = kInf;

    bool found() const { return path.has_value(); }
};

/// Dijkstra with a binary heap from `source`; returns the cheapest path to any
/// vertex satisfying `goal_pred`, or an absent result when unreachable.
inline QueryResult shortest_path(const RoadmapGraph& g, int source,
                                 const std::function<bool(const Point&)>& goal_pred) {
    const std::size_t n = g.vertices.size();
    if (source < 0 || static_cast<std::size_t>(source) >= n)
        throw std::invalid_argument("shortest_path: source does not exist");

    // CSR adjacency.
    std::vector<int> head(n + 1, 0);
    for (const auto& e : g.edges) ++head[static_cast<std::size_t>(e.u) + 1];
    for (std::size_t i = 1; i <= n; ++i) head[i] += head[i - 1];
    std::vector<std::pair<int, double>> adj(g.edges.size());
    {
        std::vector<int> fill = head;
        for (const auto& e : g.edges) adj[static_cast<std::size_t>(fill[static_cast<std::size_t>(e.u)]++)] = {e.v, e.cost};
    }

    std::vector<double> dist(n, kInf);
    std::vector<int> prev(n, -1);
    std::vector<char> done(n, 0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[static_cast<std::size_t>(source)] = 0.0;
    heap.push({0.0, source});

    int goal_vertex = -1;
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (done[static_cast<std::size_t>(u)]) continue;
        done[static_cast<std::size_t>(u)] = 1;
        if (goal_pred(g.vertices[static_cast<std::size_t>(u)])) {
            goal_vertex = u;
            break;
        }
        for (int i = head[static_cast<std::size_t>(u)]; i < head[static_cast<std::size_t>(u) + 1]; ++i) {
            const auto [v, w] = adj[static_cast<std::size_t>(i)];
            const double nd = d + w;
            if (nd < dist[static_cast<std::size_t>(v)]) {
                dist[static_cast<std::size_t>(v)] = nd;
                prev[static_cast<std::size_t>(v)] = u;
                heap.push({nd, v});
            }
        }
    }

    QueryResult result;
    if (goal_vertex < 0) return result;
    PathPolyline path;
    for (int cur = goal_vertex; cur != -1; cur = prev[static_cast<std::size_t>(cur)])
        path.waypoints.push_back(g.vertices[static_cast<std::size_t>(cur)]);
    std::reverse(path.waypoints.begin(), path.waypoints.end());
    result.path = std::move(path);
    result.cost = dist[static_cast<std::size_t>(goal_vertex)];
    return result;
}

}  // namespace pathlab
