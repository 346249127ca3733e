#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ustlab/error.hpp"
#include "ustlab/exact_count.hpp"
#include "ustlab/graph.hpp"
#include "ustlab/parallel.hpp"
#include "ustlab/rng.hpp"
#include "ustlab/sampler.hpp"
#include "ustlab/spanning_tree.hpp"

namespace ustlab {

/// Isomorphism-invariant encoding of an unlabeled tree: the AHU parenthesis
/// string of the tree rooted at its center (the smaller of the two strings
/// when the tree is bicentral). Two trees are isomorphic iff codes are equal.
struct CanonicalTreeCode {
    std::string code;
    std::size_t n = 0;

    friend auto operator<=>(const CanonicalTreeCode&, const CanonicalTreeCode&) = default;
};

using DegreeHistogram = std::map<std::size_t, std::size_t>;

namespace detail {

inline std::vector<std::vector<Vertex>> tree_adjacency(std::size_t n, std::span<const Edge> edges) {
    if (n == 0) throw Error(ErrorKind::NotATree, "a tree needs at least one vertex");
    if (edges.size() + 1 != n)
        throw Error(ErrorKind::NotATree, std::to_string(edges.size()) + " edges on " + std::to_string(n) + " vertices");
    DisjointSets ds(n);
    std::vector<std::vector<Vertex>> adj(n);
    for (const Edge& e : edges) {
        if (e.v >= n || e.u == e.v) throw Error(ErrorKind::NotATree, "bad edge endpoint");
        if (!ds.unite(e.u, e.v)) throw Error(ErrorKind::NotATree, "edge set contains a cycle");
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    return adj;
}

inline std::vector<Vertex> tree_centers(const std::vector<std::vector<Vertex>>& adj) {
    const std::size_t n = adj.size();
    if (n <= 2) {
        std::vector<Vertex> all(n);
        for (Vertex v = 0; v < n; ++v) all[v] = v;
        return all;
    }
    std::vector<std::size_t> degree(n);
    std::vector<Vertex> layer;
    for (Vertex v = 0; v < n; ++v) {
        degree[v] = adj[v].size();
        if (degree[v] == 1) layer.push_back(v);
    }
    std::size_t remaining = n;
    while (remaining > 2) {
        remaining -= layer.size();
        std::vector<Vertex> next;
        for (Vertex v : layer)
            for (Vertex w : adj[v])
                if (--degree[w] == 1) next.push_back(w);
        layer = std::move(next);
    }
    return layer;
}

inline std::string rooted_code(const std::vector<std::vector<Vertex>>& adj, Vertex root) {
    const std::size_t n = adj.size();
    std::vector<Vertex> order;
    std::vector<Vertex> parent(n, kNoVertex);
    order.reserve(n);
    order.push_back(root);
    parent[root] = root;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (Vertex w : adj[order[i]])
            if (parent[w] == kNoVertex) {
                parent[w] = order[i];
                order.push_back(w);
            }
    std::vector<std::string> code(n);
    std::vector<std::vector<std::string>> pending(n);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const Vertex v = *it;
        auto& kids = pending[v];
        std::sort(kids.begin(), kids.end());
        std::size_t length = 2;
        for (const auto& k : kids) length += k.size();
        std::string& out = code[v];
        out.reserve(length);
        out.push_back('(');
        for (auto& k : kids) out += k;
        out.push_back(')');
        kids.clear();
        kids.shrink_to_fit();
        if (v != root) pending[parent[v]].push_back(std::move(out));
    }
    return std::move(code[root]);
}

} // namespace detail

inline CanonicalTreeCode canonical_code(std::size_t n, std::span<const Edge> edges) {
    const auto adj = detail::tree_adjacency(n, edges);
    const auto centers = detail::tree_centers(adj);
    CanonicalTreeCode result{detail::rooted_code(adj, centers.front()), n};
    if (centers.size() == 2) result.code = std::min(result.code, detail::rooted_code(adj, centers.back()));
    return result;
}

inline CanonicalTreeCode canonical_code(const SpanningTree& t) { return canonical_code(t.order(), t.edges()); }

inline DegreeHistogram degree_histogram(const SpanningTree& t) {
    DegreeHistogram h;
    for (Vertex v = 0; v < t.order(); ++v) ++h[t.degree(v)];
    return h;
}

inline DegreeHistogram degree_histogram(std::size_t n, std::span<const Edge> edges) {
    const auto adj = detail::tree_adjacency(n, edges);
    DegreeHistogram h;
    for (const auto& nb : adj) ++h[nb.size()];
    return h;
}

enum class CountMode { Exact, Sampled };

inline CountMode parse_count_mode(std::string_view name) {
    if (name == "exact") return CountMode::Exact;
    if (name == "sampled") return CountMode::Sampled;
    throw Error(ErrorKind::InvalidArgument, "unknown mode '" + std::string(name) + "'");
}

struct NonIsoCount {
    CountMode mode = CountMode::Exact;
    std::size_t distinct = 0;
    std::size_t examined = 0;        ///< labelled trees enumerated or sampled
    std::size_t singletons = 0;      ///< classes seen exactly once (sampled mode)
    double unseen_mass_estimate = 0; ///< Good–Turing: singletons / examined
};

/// Exact mode counts isomorphism classes over all labelled spanning trees
/// (CapExceeded if there are more than `budget`). Sampled mode counts classes
/// among `budget` Wilson samples, trial t drawn from its own derived stream so
/// a larger budget only ever extends the sample.
inline NonIsoCount count_non_iso_spanning_trees(const Graph& g, CountMode mode, std::size_t budget, Seed seed = 0,
                                                unsigned jobs = 1) {
    NonIsoCount result;
    result.mode = mode;
    std::map<std::string, std::size_t> seen;
    if (mode == CountMode::Exact) {
        const auto trees = enumerate_spanning_trees(g, budget);
        result.examined = trees.size();
        for (const auto& t : trees) ++seen[canonical_code(t).code];
    } else {
        std::vector<std::string> codes(budget);
        for_each_trial(budget, jobs, [&](std::size_t t) {
            Rng rng = Rng::stream(seed, {stream_tag::tree, t});
            codes[t] = canonical_code(sample_wilson(g, rng)).code;
        });
        result.examined = budget;
        for (auto& c : codes) ++seen[std::move(c)];
    }
    result.distinct = seen.size();
    for (const auto& [code, count] : seen) result.singletons += count == 1 ? 1 : 0;
    if (mode == CountMode::Sampled && result.examined > 0)
        result.unseen_mass_estimate = static_cast<double>(result.singletons) / static_cast<double>(result.examined);
    return result;
}

} // namespace ustlab
