#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <utility>
#include <vector>

#include "ustlab/error.hpp"
#include "ustlab/graph.hpp"
#include "ustlab/spanning_tree.hpp"

namespace ustlab {

using BigCount = boost::multiprecision::cpp_int;

using BigMatrix = std::vector<std::vector<BigCount>>;

/*
 * Determinant by Bareiss fraction-free elimination.
 *
 * After step k every entry of the trailing block is a (k+1)x(k+1) minor of
 * the input, so the division by the previous pivot is always exact and all
 * intermediates stay integral. A zero pivot is resolved by a row swap (which
 * flips the sign); if none exists the matrix is singular.
 */
inline BigCount bareiss_determinant(BigMatrix m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    BigCount previous = 1;
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
            if (swap_row == n) return 0;
            std::swap(m[k], m[swap_row]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / previous;
            }
            m[i][k] = 0;
        }
        previous = m[k][k];
    }
    return negate ? BigCount(-m[n - 1][n - 1]) : m[n - 1][n - 1];
}

/// Laplacian with the row and column of the last vertex removed.
inline BigMatrix reduced_laplacian(const Graph& g) {
    const std::size_t n = g.order();
    if (n <= 1) return {};
    BigMatrix lap(n - 1, std::vector<BigCount>(n - 1, 0));
    for (Vertex v = 0; v + 1 < n; ++v) lap[v][v] = static_cast<unsigned long long>(g.degree(v));
    for (const Edge& e : g.edges()) {
        if (e.v + 1 < n) {
            lap[e.u][e.v] = -1;
            lap[e.v][e.u] = -1;
        }
    }
    return lap;
}

/// τ(G) by the matrix-tree theorem; 0 for a disconnected graph.
inline BigCount count_spanning_trees(const Graph& g) {
    if (g.order() == 0 || !is_connected(g)) return 0;
    return bareiss_determinant(reduced_laplacian(g));
}

/// d(G) = Π_v d_G(v).
inline BigCount degree_product(const Graph& g) {
    BigCount product = 1;
    for (Vertex v = 0; v < g.order(); ++v) product *= static_cast<unsigned long long>(g.degree(v));
    return product;
}

/// τ(G)·(n−1) ≤ d(G), compared exactly.
inline bool check_kostochka_upper_bound(const Graph& g) {
    if (g.order() < 2) return true;
    return count_spanning_trees(g) * static_cast<unsigned long long>(g.order() - 1) <= degree_product(g);
}

namespace detail {

// Edge-by-edge contraction/deletion. Edge i is either contracted into the
// forest (kept) or deleted; deletion is only explored while the undecided
// edges can still connect the graph, so every leaf of the recursion is a tree.
class TreeEnumerator {
public:
    TreeEnumerator(const Graph& g, std::vector<SpanningTree>& out) : g_(g), out_(out) {}

    void run() {
        chosen_.clear();
        recurse(0, DisjointSets(g_.order()));
    }

private:
    bool still_connectable(std::size_t from, DisjointSets ds) const {
        for (std::size_t i = from; i < g_.size() && ds.components() > 1; ++i)
            ds.unite(g_.edges()[i].u, g_.edges()[i].v);
        return ds.components() == 1;
    }

    void recurse(std::size_t i, const DisjointSets& forest) {
        if (chosen_.size() + 1 == g_.order()) {
            out_.push_back(SpanningTree::from_edges(g_, chosen_));
            return;
        }
        if (i == g_.size()) return;
        const Edge& e = g_.edges()[i];
        DisjointSets contracted = forest;
        if (contracted.unite(e.u, e.v)) {
            chosen_.push_back(e);
            recurse(i + 1, contracted);
            chosen_.pop_back();
        }
        if (still_connectable(i + 1, forest)) recurse(i + 1, forest);
    }

    const Graph& g_;
    std::vector<SpanningTree>& out_;
    std::vector<Edge> chosen_;
};

} // namespace detail

/// Every labelled spanning tree exactly once. Throws CapExceeded when τ(G)
/// exceeds cap, before doing any enumeration work.
inline std::vector<SpanningTree> enumerate_spanning_trees(const Graph& g, std::size_t cap) {
    const BigCount total = count_spanning_trees(g);
    if (total > cap)
        throw Error(ErrorKind::CapExceeded, "graph has " + total.str() + " spanning trees, cap is " +
                                                std::to_string(cap));
    std::vector<SpanningTree> trees;
    if (total == 0) return trees;
    trees.reserve(static_cast<std::size_t>(total));
    detail::TreeEnumerator(g, trees).run();
    return trees;
}

} // namespace ustlab
