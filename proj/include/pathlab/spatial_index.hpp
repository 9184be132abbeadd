#pragma once

// Exact nearest-neighbor queries over an incrementally grown point set.
// Points live in a kd-tree that is rebuilt balanced whenever the size doubles,
// which keeps insertion amortized logarithmic for the random workloads the
// planners produce. All queries are exact; distance ties break toward the
// smaller vertex id.

#include <algorithm>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "pathlab/geometry.hpp"

namespace pathlab {

class VertexIndex {
public:
    struct Neighbor {
        int id;
        Point point;
        double dist;
    };

    explicit VertexIndex(int dim) : dim_(dim) {
        if (dim < 1) throw std::invalid_argument("VertexIndex requires dim >= 1");
    }

    std::size_t size() const { return ids_.size(); }

    void insert(const Point& p, int id) {
        if (static_cast<int>(p.dim()) != dim_) throw std::invalid_argument("point dimension mismatch");
        if (!used_ids_.insert(id).second) throw std::invalid_argument("duplicate vertex id");
        const int slot = static_cast<int>(ids_.size());
        ids_.push_back(id);
        coords_.insert(coords_.end(), p.coords.begin(), p.coords.end());
        nodes_.push_back({slot, -1, -1, 0});

        if (size() >= rebuild_at_) {
            rebuild();
            rebuild_at_ = 2 * size();
            return;
        }
        if (root_ < 0) {
            root_ = slot;
            return;
        }
        // Descend to a leaf; child axes cycle through the dimensions.
        int cur = root_;
        for (;;) {
            const int axis = nodes_[cur].axis;
            const bool go_left = p[static_cast<std::size_t>(axis)] < coord(nodes_[cur].point, axis);
            int& child = go_left ? nodes_[cur].left : nodes_[cur].right;
            if (child < 0) {
                child = slot;
                nodes_[slot].axis = (axis + 1) % dim_;
                return;
            }
            cur = child;
        }
    }

    Neighbor nearest(const Point& x) const {
        if (ids_.empty()) throw std::logic_error("nearest on empty index");
        double best_d2 = kInf;
        int best = -1;
        search_stack_.clear();
        search_stack_.push_back({root_, 0.0});
        while (!search_stack_.empty()) {
            const auto [node, slab_d2] = search_stack_.back();
            search_stack_.pop_back();
            if (slab_d2 > best_d2) continue;
            int cur = node;
            while (cur >= 0) {
                const int slot = nodes_[cur].point;
                const double d2 = dist_sq_to(slot, x);
                if (d2 < best_d2 || (d2 == best_d2 && (best < 0 || ids_[slot] < ids_[best]))) {
                    best_d2 = d2;
                    best = slot;
                }
                const int axis = nodes_[cur].axis;
                const double diff = x[static_cast<std::size_t>(axis)] - coord(slot, axis);
                const int near = diff < 0 ? nodes_[cur].left : nodes_[cur].right;
                const int far = diff < 0 ? nodes_[cur].right : nodes_[cur].left;
                if (far >= 0 && diff * diff <= best_d2) search_stack_.push_back({far, diff * diff});
                cur = near;
            }
        }
        return make_neighbor(best, best_d2);
    }

    /// The k closest points in ascending (distance, id) order; everything when
    /// fewer than k points are stored.
    std::vector<Neighbor> k_nearest(const Point& x, int k) const {
        if (k < 1) throw std::invalid_argument("k_nearest requires k >= 1");
        // Max-heap of (d2, slot-ranked-by-id); the worst candidate sits on top.
        auto worse = [this](const std::pair<double, int>& a, const std::pair<double, int>& b) {
            if (a.first != b.first) return a.first < b.first;
            return ids_[a.second] < ids_[b.second];
        };
        std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>, decltype(worse)>
            heap(worse);
        search_stack_.clear();
        if (root_ >= 0) search_stack_.push_back({root_, 0.0});
        const std::size_t want = static_cast<std::size_t>(k);
        while (!search_stack_.empty()) {
            const auto [node, slab_d2] = search_stack_.back();
            search_stack_.pop_back();
            if (heap.size() == want && slab_d2 > heap.top().first) continue;
            int cur = node;
            while (cur >= 0) {
                const int slot = nodes_[cur].point;
                const double d2 = dist_sq_to(slot, x);
                if (heap.size() < want) {
                    heap.push({d2, slot});
                } else if (std::pair<double, int>{d2, ids_[slot]} <
                           std::pair<double, int>{heap.top().first, ids_[heap.top().second]}) {
                    heap.pop();
                    heap.push({d2, slot});
                }
                const int axis = nodes_[cur].axis;
                const double diff = x[static_cast<std::size_t>(axis)] - coord(slot, axis);
                const int near = diff < 0 ? nodes_[cur].left : nodes_[cur].right;
                const int far = diff < 0 ? nodes_[cur].right : nodes_[cur].left;
                if (far >= 0 && (heap.size() < want || diff * diff <= heap.top().first))
                    search_stack_.push_back({far, diff * diff});
                cur = near;
            }
        }
        std::vector<Neighbor> out;
        out.reserve(heap.size());
        while (!heap.empty()) {
            out.push_back(make_neighbor(heap.top().second, heap.top().first));
            heap.pop();
        }
        std::reverse(out.begin(), out.end());
        return out;
    }

    /// Every point with distance <= r (closed ball), ascending (distance, id).
    std::vector<Neighbor> near(const Point& x, double r) const {
        if (!(r > 0.0)) throw std::invalid_argument("near requires r > 0");
        const double r2 = r * r;
        std::vector<Neighbor> out;
        search_stack_.clear();
        if (root_ >= 0) search_stack_.push_back({root_, 0.0});
        while (!search_stack_.empty()) {
            const auto [node, slab_d2] = search_stack_.back();
            search_stack_.pop_back();
            if (slab_d2 > r2) continue;
            int cur = node;
            while (cur >= 0) {
                const int slot = nodes_[cur].point;
                const double d2 = dist_sq_to(slot, x);
                if (d2 <= r2) out.push_back(make_neighbor(slot, d2));
                const int axis = nodes_[cur].axis;
                const double diff = x[static_cast<std::size_t>(axis)] - coord(slot, axis);
                const int near_child = diff < 0 ? nodes_[cur].left : nodes_[cur].right;
                const int far_child = diff < 0 ? nodes_[cur].right : nodes_[cur].left;
                if (far_child >= 0 && diff * diff <= r2) search_stack_.push_back({far_child, diff * diff});
                cur = near_child;
            }
        }
        std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
            if (a.dist != b.dist) return a.dist < b.dist;
            return a.id < b.id;
        });
        return out;
    }

private:
    struct Node {
        int point;
        int left;
        int right;
        int axis;
    };

    double coord(int slot, int axis) const {
        return coords_[static_cast<std::size_t>(slot) * dim_ + static_cast<std::size_t>(axis)];
    }

    double dist_sq_to(int slot, const Point& x) const {
        const double* base = coords_.data() + static_cast<std::size_t>(slot) * dim_;
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) {
            const double d = x[static_cast<std::size_t>(i)] - base[i];
            s += d * d;
        }
        return s;
    }

    Neighbor make_neighbor(int slot, double d2) const {
        Point p = Point::zeros(dim_);
        for (int i = 0; i < dim_; ++i) p[static_cast<std::size_t>(i)] = coord(slot, i);
        return {ids_[slot], std::move(p), std::sqrt(d2)};
    }

    void rebuild() {
        std::vector<int> order(ids_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        root_ = build_balanced(order, 0, static_cast<int>(order.size()), 0);
    }

    int build_balanced(std::vector<int>& order, int lo, int hi, int depth) {
        if (lo >= hi) return -1;
        const int axis = depth % dim_;
        const int mid = lo + (hi - lo) / 2;
        std::nth_element(order.begin() + lo, order.begin() + mid, order.begin() + hi,
                         [&](int a, int b) {
                             const double ca = coord(a, axis), cb = coord(b, axis);
                             if (ca != cb) return ca < cb;
                             return ids_[a] < ids_[b];
                         });
        const int slot = order[mid];
        nodes_[slot] = {slot, build_balanced(order, lo, mid, depth + 1),
                        build_balanced(order, mid + 1, hi, depth + 1), axis};
        return slot;
    }

    int dim_;
    std::vector<double> coords_;
    std::vector<int> ids_;
    std::vector<Node> nodes_;
    std::unordered_set<int> used_ids_;
    int root_ = -1;
    std::size_t rebuild_at_ = 32;
    mutable std::vector<std::pair<int, double>> search_stack_;
};

}  // namespace pathlab
