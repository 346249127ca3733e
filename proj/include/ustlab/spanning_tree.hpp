#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "ustlab/error.hpp"
#include "ustlab/graph.hpp"

namespace ustlab {

inline constexpr Vertex kNoVertex = static_cast<Vertex>(-1);

/// A spanning tree of some Graph, stored as a sorted edge list with a CSR
/// tree adjacency and a degree cache. Instances are always valid: every
/// constructor checks n-1 edges, acyclicity and edges ⊆ E(G).
class SpanningTree {
public:
    SpanningTree() = default;

    static SpanningTree from_edges(const Graph& g, std::vector<Edge> edges) {
        const std::size_t n = g.order();
        if (n == 0) throw Error(ErrorKind::NotATree, "empty graph has no spanning tree");
        if (edges.size() != n - 1)
            throw Error(ErrorKind::NotATree, "expected " + std::to_string(n - 1) + " edges, got " +
                                                 std::to_string(edges.size()));
        DisjointSets ds(n);
        for (const Edge& e : edges) {
            if (e.v >= n) throw Error(ErrorKind::NotATree, "edge endpoint out of range");
            if (!g.adjacent(e.u, e.v))
                throw Error(ErrorKind::NotATree, "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                                     ") is not an edge of the graph");
            if (!ds.unite(e.u, e.v)) throw Error(ErrorKind::NotATree, "edge set contains a cycle");
        }
        std::sort(edges.begin(), edges.end());
        return SpanningTree(n, std::move(edges));
    }

    /// parent[root] must be kNoVertex; every other vertex points one step
    /// towards the root.
    static SpanningTree from_parents(const Graph& g, std::span<const Vertex> parent) {
        std::vector<Edge> edges;
        edges.reserve(parent.size());
        for (Vertex v = 0; v < parent.size(); ++v)
            if (parent[v] != kNoVertex) edges.emplace_back(v, parent[v]);
        return from_edges(g, std::move(edges));
    }

    std::size_t order() const noexcept { return n_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    std::span<const Vertex> neighbors(Vertex v) const noexcept {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
    bool is_leaf(Vertex v) const noexcept { return degree(v) == 1; }

    /// p_T(v): the unique tree neighbour of a leaf.
    Vertex leaf_parent(Vertex v) const noexcept { return adjacency_[offsets_[v]]; }

    std::vector<Vertex> leaves() const {
        std::vector<Vertex> out;
        for (Vertex v = 0; v < n_; ++v)
            if (is_leaf(v)) out.push_back(v);
        return out;
    }

    std::size_t leaf_count() const noexcept {
        std::size_t count = 0;
        for (Vertex v = 0; v < n_; ++v) count += is_leaf(v) ? 1 : 0;
        return count;
    }

    friend bool operator==(const SpanningTree& a, const SpanningTree& b) noexcept {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }
    friend auto operator<=>(const SpanningTree& a, const SpanningTree& b) noexcept {
        if (auto c = a.n_ <=> b.n_; c != 0) return c;
        return a.edges_ <=> b.edges_;
    }

private:
    SpanningTree(std::size_t n, std::vector<Edge> sorted_edges) : n_(n), edges_(std::move(sorted_edges)) {
        offsets_.assign(n_ + 1, 0);
        for (const Edge& e : edges_) {
            ++offsets_[e.u + 1];
            ++offsets_[e.v + 1];
        }
        for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
        adjacency_.resize(2 * edges_.size());
        std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (const Edge& e : edges_) {
            adjacency_[cursor[e.u]++] = e.v;
            adjacency_[cursor[e.v]++] = e.u;
        }
        for (std::size_t v = 0; v < n_; ++v)
            std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                      adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
    }

    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Vertex> adjacency_;
};

} // namespace ustlab
