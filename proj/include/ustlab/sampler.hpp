#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ustlab/error.hpp"
#include "ustlab/exact_count.hpp"
#include "ustlab/graph.hpp"
#include "ustlab/parallel.hpp"
#include "ustlab/rng.hpp"
#include "ustlab/spanning_tree.hpp"

namespace ustlab {

using Rational = boost::multiprecision::cpp_rational;

/// Tags used to derive independent per-trial streams from a master seed.
namespace stream_tag {
inline constexpr std::uint64_t tree = 0x74726565ULL;
inline constexpr std::uint64_t subset = 0x73756273ULL;
inline constexpr std::uint64_t reconfigure = 0x72636667ULL;
inline constexpr std::uint64_t bipartite = 0x62697074ULL;
inline constexpr std::uint64_t multinomial = 0x6d756c74ULL;
} // namespace stream_tag

enum class SamplerKind { Wilson, AldousBroder, Rejection };

inline std::string_view to_string(SamplerKind kind) noexcept {
    switch (kind) {
        case SamplerKind::Wilson: return "wilson";
        case SamplerKind::AldousBroder: return "ab";
        case SamplerKind::Rejection: return "reject";
    }
    return "?";
}

inline SamplerKind parse_sampler(std::string_view name) {
    if (name == "wilson") return SamplerKind::Wilson;
    if (name == "ab" || name == "aldous-broder") return SamplerKind::AldousBroder;
    if (name == "reject" || name == "rejection") return SamplerKind::Rejection;
    throw Error(ErrorKind::InvalidArgument, "unknown sampler '" + std::string(name) + "'");
}

namespace detail {
inline void require_connected(const Graph& g) {
    if (g.order() == 0 || !is_connected(g))
        throw Error(ErrorKind::InvalidArgument, "spanning trees require a connected non-empty graph");
}
inline Vertex random_neighbor(const Graph& g, Vertex v, Rng& rng) {
    auto nb = g.neighbors(v);
    return nb[rng.below(nb.size())];
}
} // namespace detail

/// Wilson's algorithm: loop-erased random walks from each vertex not yet in
/// the tree until they hit it. Rooted at vertex 0. Exactly uniform.
inline SpanningTree sample_wilson(const Graph& g, Rng& rng) {
    detail::require_connected(g);
    const std::size_t n = g.order();
    std::vector<char> in_tree(n, 0);
    std::vector<Vertex> next(n, kNoVertex);
    in_tree[0] = 1;
    for (Vertex start = 1; start < n; ++start) {
        // Overwriting next[] on revisits erases loops implicitly.
        for (Vertex u = start; !in_tree[u]; u = next[u]) next[u] = detail::random_neighbor(g, u, rng);
        for (Vertex u = start; !in_tree[u]; u = next[u]) in_tree[u] = 1;
    }
    next[0] = kNoVertex;
    return SpanningTree::from_parents(g, next);
}

/// Aldous–Broder: simple random walk until cover; keep first-entry edges.
inline SpanningTree sample_aldous_broder(const Graph& g, Rng& rng) {
    detail::require_connected(g);
    const std::size_t n = g.order();
    std::vector<Vertex> parent(n, kNoVertex);
    std::vector<char> seen(n, 0);
    Vertex u = static_cast<Vertex>(rng.below(n));
    seen[u] = 1;
    for (std::size_t visited = 1; visited < n;) {
        const Vertex w = detail::random_neighbor(g, u, rng);
        if (!seen[w]) {
            seen[w] = 1;
            parent[w] = u;
            ++visited;
        }
        u = w;
    }
    return SpanningTree::from_parents(g, parent);
}

/// One chosen out-neighbour per vertex.
struct OneOutDigraph {
    std::vector<Vertex> out;

    friend bool operator==(const OneOutDigraph&, const OneOutDigraph&) = default;
};

inline OneOutDigraph sample_one_out_digraph(const Graph& g, Rng& rng) {
    OneOutDigraph d;
    d.out.resize(g.order());
    for (Vertex v = 0; v < g.order(); ++v) {
        if (g.degree(v) == 0)
            throw Error(ErrorKind::InvalidArgument, "vertex " + std::to_string(v) + " has no neighbour");
        d.out[v] = detail::random_neighbor(g, v, rng);
    }
    return d;
}

/// U(D): the simple undirected support of the arcs.
struct UnderlyingSupport {
    std::vector<Edge> edges; ///< sorted, deduplicated
    bool is_tree = false;
};

inline UnderlyingSupport underlying(const OneOutDigraph& d) {
    const std::size_t n = d.out.size();
    UnderlyingSupport support;
    support.edges.reserve(n);
    for (Vertex v = 0; v < n; ++v) support.edges.emplace_back(v, d.out[v]);
    std::sort(support.edges.begin(), support.edges.end());
    support.edges.erase(std::unique(support.edges.begin(), support.edges.end()), support.edges.end());
    if (support.edges.size() + 1 == n) {
        DisjointSets ds(n);
        for (const Edge& e : support.edges) ds.unite(e.u, e.v);
        support.is_tree = ds.components() == 1;
    }
    return support;
}

inline constexpr std::uint64_t kDefaultMaxAttempts = 1'000'000;

struct RejectionSample {
    SpanningTree tree;
    std::uint64_t attempts = 0;
};

/// Resamples uniform 1-out digraphs until the support is a spanning tree.
/// Every tree has exactly n−1 digraphs mapping to it, so the accepted tree is
/// uniform.
inline RejectionSample sample_rejection_one_out(const Graph& g, Rng& rng,
                                                std::uint64_t max_attempts = kDefaultMaxAttempts) {
    detail::require_connected(g);
    if (g.order() == 1) return {SpanningTree::from_edges(g, {}), 1};
    for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
        UnderlyingSupport support = underlying(sample_one_out_digraph(g, rng));
        if (support.is_tree) return {SpanningTree::from_edges(g, std::move(support.edges)), attempt};
    }
    throw Error(ErrorKind::AttemptsExhausted,
                "no tree-supported 1-out digraph in " + std::to_string(max_attempts) + " attempts");
}

inline SpanningTree sample_tree(const Graph& g, SamplerKind kind, Rng& rng,
                                std::uint64_t max_attempts = kDefaultMaxAttempts) {
    switch (kind) {
        case SamplerKind::Wilson: return sample_wilson(g, rng);
        case SamplerKind::AldousBroder: return sample_aldous_broder(g, rng);
        case SamplerKind::Rejection: return sample_rejection_one_out(g, rng, max_attempts).tree;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown sampler");
}

/// Exhaustive tally of all d(G) 1-out digraphs by their support.
struct OneOutCensus {
    std::uint64_t digraphs = 0;
    std::uint64_t tree_supported = 0;
    std::map<std::vector<Edge>, std::uint64_t> per_tree;
};

inline OneOutCensus one_out_census(const Graph& g, std::uint64_t max_digraphs) {
    const BigCount total = degree_product(g);
    if (g.order() == 0 || total > max_digraphs || total == 0)
        throw Error(ErrorKind::CapExceeded, "d(G) = " + total.str() + " exceeds census cap " +
                                                std::to_string(max_digraphs));
    const std::size_t n = g.order();
    OneOutCensus census;
    census.digraphs = static_cast<std::uint64_t>(total);
    std::vector<std::size_t> digit(n, 0);
    OneOutDigraph d;
    d.out.resize(n);
    for (Vertex v = 0; v < n; ++v) d.out[v] = g.neighbors(v)[0];
    for (std::uint64_t k = 0; k < census.digraphs; ++k) {
        UnderlyingSupport support = underlying(d);
        if (support.is_tree) {
            ++census.tree_supported;
            ++census.per_tree[support.edges];
        }
        // mixed-radix increment
        for (Vertex v = 0; v < n; ++v) {
            if (++digit[v] < g.degree(v)) {
                d.out[v] = g.neighbors(v)[digit[v]];
                break;
            }
            digit[v] = 0;
            d.out[v] = g.neighbors(v)[0];
        }
    }
    return census;
}

struct LeafStatsReport {
    SamplerKind sampler = SamplerKind::Wilson;
    Seed seed = 0;
    /// P(v has in-degree 0 in a uniform 1-out digraph) = Π_{u∈N(v)} (1 − 1/d(u))
    std::vector<Rational> leaf_probability;
    /// s(v) = Σ_{u∈N(v)} 1/d(u)
    std::vector<Rational> s;
    Rational expected_digraph_leaves;   ///< Σ_v leaf_probability[v]
    bool expectation_bound_holds = false; ///< 4·expected ≥ n
    double four_pow_neg_s_sum = 0.0;    ///< Σ_v 4^{−s(v)}
    std::vector<std::size_t> leaf_counts;   ///< per trial, of the sampled spanning tree
    std::vector<std::uint64_t> attempts;    ///< per trial, rejection sampler only
    std::map<std::size_t, std::size_t> leaf_histogram;
    double mean_leaves = 0.0;
    std::size_t min_leaves = 0;
};

/// Exact digraph leaf probabilities (rational arithmetic) plus the leaf counts
/// of `trials` sampled uniform spanning trees.
inline LeafStatsReport leaf_stats(const Graph& g, std::size_t trials, SamplerKind sampler, Seed seed,
                                  unsigned jobs = 1, std::uint64_t max_attempts = kDefaultMaxAttempts) {
    detail::require_connected(g);
    if (trials == 0) throw Error(ErrorKind::InvalidArgument, "leaf statistics need at least one trial");
    const std::size_t n = g.order();
    LeafStatsReport report;
    report.sampler = sampler;
    report.seed = seed;
    report.leaf_probability.resize(n);
    report.s.resize(n);
    Rational s_total = 0;
    for (Vertex v = 0; v < n; ++v) {
        Rational product = 1;
        Rational s = 0;
        for (Vertex u : g.neighbors(v)) {
            const Rational inv(1, static_cast<long long>(g.degree(u)));
            product *= 1 - inv;
            s += inv;
        }
        report.leaf_probability[v] = product;
        report.s[v] = s;
        report.expected_digraph_leaves += product;
        report.four_pow_neg_s_sum += std::pow(4.0, -static_cast<double>(s));
        s_total += s;
    }
    if (s_total != static_cast<long long>(n))
        throw std::logic_error("Σ s(v) must equal n; adjacency is inconsistent");
    report.expectation_bound_holds = 4 * report.expected_digraph_leaves >= static_cast<long long>(n);

    report.leaf_counts.resize(trials);
    if (sampler == SamplerKind::Rejection) report.attempts.resize(trials);
    for_each_trial(trials, jobs, [&](std::size_t t) {
        Rng rng = Rng::stream(seed, {stream_tag::tree, t});
        if (sampler == SamplerKind::Rejection) {
            auto sample = sample_rejection_one_out(g, rng, max_attempts);
            report.leaf_counts[t] = sample.tree.leaf_count();
            report.attempts[t] = sample.attempts;
        } else {
            report.leaf_counts[t] = sample_tree(g, sampler, rng).leaf_count();
        }
    });
    double sum = 0;
    report.min_leaves = report.leaf_counts.front();
    for (auto c : report.leaf_counts) {
        ++report.leaf_histogram[c];
        sum += static_cast<double>(c);
        report.min_leaves = std::min(report.min_leaves, c);
    }
    report.mean_leaves = sum / static_cast<double>(trials);
    return report;
}

} // namespace ustlab
