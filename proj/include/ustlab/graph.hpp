#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ustlab/error.hpp"

namespace ustlab {

using Vertex = std::uint32_t;

/// Undirected edge, always stored with u < v.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    constexpr Edge() = default;
    constexpr Edge(Vertex a, Vertex b) noexcept : u(a < b ? a : b), v(a < b ? b : a) {}

    constexpr Vertex other(Vertex x) const noexcept { return x == u ? v : u; }

    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Plain union-find with path halving; used for connectivity and acyclicity.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0), components_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) noexcept {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns false when a and b were already joined.
    bool unite(std::size_t a, std::size_t b) noexcept {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        --components_;
        return true;
    }

    std::size_t components() const noexcept { return components_; }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned char> rank_;
    std::size_t components_;
};

/// Immutable simple undirected graph on vertices 0..n-1 with sorted
/// adjacency (CSR layout). Safe to share read-only across threads.
class Graph {
public:
    Graph() = default;

    /// Validated construction. Rejects self-loops, duplicate edges (in either
    /// orientation) and out-of-range endpoints.
    static Graph from_edges(std::size_t n, std::span<const Edge> edges) {
        std::vector<Edge> sorted;
        sorted.reserve(edges.size());
        for (const Edge& e : edges) {
            if (e.u >= n || e.v >= n)
                throw Error(ErrorKind::VertexOutOfRange, "edge (" + std::to_string(e.u) + "," +
                                                             std::to_string(e.v) + ") with n=" +
                                                             std::to_string(n));
            if (e.u == e.v)
                throw Error(ErrorKind::SelfLoop, "self-loop at vertex " + std::to_string(e.u));
            sorted.push_back(e);
        }
        std::sort(sorted.begin(), sorted.end());
        if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end())
            throw Error(ErrorKind::DuplicateEdge, "edge (" + std::to_string(dup->u) + "," +
                                                      std::to_string(dup->v) + ") appears twice");
        return Graph(n, std::move(sorted));
    }

    /// Builds from raw (u, v) pairs, which may be in either orientation.
    static Graph from_pairs(std::size_t n, std::span<const std::pair<std::uint64_t, std::uint64_t>> pairs) {
        std::vector<Edge> edges;
        edges.reserve(pairs.size());
        for (auto [a, b] : pairs) {
            if (a >= n || b >= n)
                throw Error(ErrorKind::VertexOutOfRange, "edge (" + std::to_string(a) + "," +
                                                             std::to_string(b) + ") with n=" +
                                                             std::to_string(n));
            edges.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
        }
        return from_edges(n, edges);
    }

    std::size_t order() const noexcept { return n_; }
    std::size_t size() const noexcept { return edges_.size(); }

    std::span<const Vertex> neighbors(Vertex v) const noexcept {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }

    std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

    bool adjacent(Vertex a, Vertex b) const noexcept {
        auto nb = neighbors(a);
        return std::binary_search(nb.begin(), nb.end(), b);
    }

    const std::vector<Edge>& edges() const noexcept { return edges_; }

    std::size_t min_degree() const noexcept {
        std::size_t best = n_ == 0 ? 0 : degree(0);
        for (Vertex v = 1; v < n_; ++v) best = std::min(best, degree(v));
        return best;
    }

    friend bool operator==(const Graph& a, const Graph& b) noexcept {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    Graph(std::size_t n, std::vector<Edge> sorted_edges) : n_(n), edges_(std::move(sorted_edges)) {
        offsets_.assign(n_ + 1, 0);
        for (const Edge& e : edges_) {
            ++offsets_[e.u + 1];
            ++offsets_[e.v + 1];
        }
        std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
        adjacency_.resize(2 * edges_.size());
        std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (const Edge& e : edges_) {
            adjacency_[cursor[e.u]++] = e.v;
            adjacency_[cursor[e.v]++] = e.u;
        }
        // Edges are sorted by (u, v), so each adjacency row is already sorted
        // for the smaller endpoint; sort all rows to cover the larger one.
        for (std::size_t v = 0; v < n_; ++v)
            std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                      adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
    }

    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Vertex> adjacency_;
};

inline Graph build_graph(std::span<const Edge> edges, std::size_t n) { return Graph::from_edges(n, edges); }

inline bool is_connected(const Graph& g) {
    if (g.order() <= 1) return true;
    DisjointSets ds(g.order());
    for (const Edge& e : g.edges()) ds.unite(e.u, e.v);
    return ds.components() == 1;
}

inline bool check_connected_min_degree(const Graph& g, std::size_t d) {
    return is_connected(g) && g.min_degree() >= d;
}

// Deterministic families used throughout the tests and experiments.

inline Graph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

/// K_{a,b} with the a-side on vertices 0..a-1.
inline Graph complete_bipartite_graph(std::size_t a, std::size_t b) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < a; ++u)
        for (Vertex v = 0; v < b; ++v) edges.emplace_back(u, static_cast<Vertex>(a + v));
    return Graph::from_edges(a + b, edges);
}

inline Graph cycle_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n; ++v) edges.emplace_back(v, static_cast<Vertex>((v + 1) % n));
    return Graph::from_edges(n, edges);
}

inline Graph path_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    return Graph::from_edges(n, edges);
}

inline Graph star_graph(std::size_t leaves) {
    std::vector<Edge> edges;
    for (Vertex v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
    return Graph::from_edges(leaves + 1, edges);
}

} // namespace ustlab
