#pragma once

// Leaf selections (L, P), uniformly random (L, P)-leaf reconfigurations, the
// two-branch selection strategy S(T, R) and an auditor for its reversibility.
//
// Every threshold is compared in exact integers:
//   d > n^{1/3}      <=>  d^3 > n
//   |L1| >= n/256    <=>  256·|L1| >= n
//   |P1(v)| >= d/2   <=>  2·|P1(v)| >= d
//   |P2(v)| >= d/4   <=>  4·|P2(v)| >= d

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "ustlab/error.hpp"
#include "ustlab/graph.hpp"
#include "ustlab/parallel.hpp"
#include "ustlab/rng.hpp"
#include "ustlab/sampler.hpp"
#include "ustlab/spanning_tree.hpp"

namespace ustlab {

/// R ⊆ V(G) as a membership mask, with the seed it was drawn from.
struct VertexSubset {
    std::vector<char> member;
    Seed seed = 0;

    bool contains(Vertex v) const noexcept { return member[v] != 0; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(std::count(member.begin(), member.end(), 1)); }

    static VertexSubset of(std::size_t n, std::initializer_list<Vertex> vertices) {
        VertexSubset r;
        r.member.assign(n, 0);
        for (Vertex v : vertices) r.member.at(v) = 1;
        return r;
    }
};

/// Each vertex independently with probability 1/2.
inline VertexSubset sample_vertex_subset(std::size_t n, Rng& rng, Seed seed_label = 0) {
    VertexSubset r;
    r.seed = seed_label;
    r.member.resize(n);
    for (auto& bit : r.member) bit = rng.coin() ? 1 : 0;
    return r;
}

/// d_G(u) > n^{1/3}, compared as d³ > n.
inline bool exceeds_cube_root(std::size_t degree, std::size_t n) noexcept {
    const auto d = static_cast<unsigned __int128>(degree);
    return d * d * d > n;
}

/// |N_T(u) \ R| >= 2
inline bool has_two_tree_neighbors_outside(const SpanningTree& t, const VertexSubset& r, Vertex u) {
    std::size_t outside = 0;
    for (Vertex w : t.neighbors(u))
        if (!r.contains(w) && ++outside >= 2) return true;
    return false;
}

/// P₁(v) = {u ∈ N_G(v) : u ∉ R or d_G(u) > n^{1/3}}
inline std::vector<Vertex> potential_parents_p1(const Graph& g, const VertexSubset& r, Vertex v) {
    std::vector<Vertex> out;
    for (Vertex u : g.neighbors(v))
        if (!r.contains(u) || exceeds_cube_root(g.degree(u), g.order())) out.push_back(u);
    return out;
}

/// P₂(v) = {u ∈ N_G(v) : u ∉ R or |N_T(u) \ R| >= 2}
inline std::vector<Vertex> potential_parents_p2(const Graph& g, const SpanningTree& t, const VertexSubset& r,
                                                Vertex v) {
    std::vector<Vertex> out;
    for (Vertex u : g.neighbors(v))
        if (!r.contains(u) || has_two_tree_neighbors_outside(t, r, u)) out.push_back(u);
    return out;
}

/// (L, P): leaves to reconfigure, sorted, with their sorted potential-parent sets.
struct LeafSelection {
    std::vector<Vertex> leaves;
    std::vector<std::vector<Vertex>> parents;

    bool empty() const noexcept { return leaves.empty(); }
    friend bool operator==(const LeafSelection&, const LeafSelection&) = default;
};

namespace detail {

inline std::string selection_problem(const Graph& g, const SpanningTree& t, const LeafSelection& sel,
                                     bool require_current_parent) {
    if (sel.parents.size() != sel.leaves.size()) return "parents and leaves differ in length";
    if (!std::is_sorted(sel.leaves.begin(), sel.leaves.end()) ||
        std::adjacent_find(sel.leaves.begin(), sel.leaves.end()) != sel.leaves.end())
        return "leaves must be sorted and distinct";
    for (std::size_t i = 0; i < sel.leaves.size(); ++i) {
        const Vertex v = sel.leaves[i];
        const auto& p = sel.parents[i];
        if (v >= t.order() || !t.is_leaf(v)) return "vertex " + std::to_string(v) + " is not a leaf of T";
        if (p.empty()) return "empty potential-parent set for " + std::to_string(v);
        for (Vertex u : p) {
            if (!g.adjacent(v, u)) return std::to_string(u) + " is not a neighbour of " + std::to_string(v);
            if (std::binary_search(sel.leaves.begin(), sel.leaves.end(), u))
                return "potential parent " + std::to_string(u) + " of " + std::to_string(v) + " lies in L";
        }
        if (require_current_parent && !std::binary_search(p.begin(), p.end(), t.leaf_parent(v)))
            return "p_T(" + std::to_string(v) + ") is not a potential parent";
    }
    return {};
}

} // namespace detail

/// Empty string when p_T(v) ∈ P(v) ⊆ N_G(v) \ L holds for every v ∈ L ⊆ L(T).
inline std::string validate_selection(const Graph& g, const SpanningTree& t, const LeafSelection& sel) {
    return detail::selection_problem(g, t, sel, true);
}

enum class Branch { L1, L2 };

inline std::string_view to_string(Branch b) noexcept { return b == Branch::L1 ? "L1" : "L2"; }

struct StrategyOutcome {
    Branch branch = Branch::L2;
    LeafSelection selection;
    std::size_t l1_size = 0;
    std::size_t l2_size = 0;
};

/// S(T, R): (L₁, P₁) when 256·|L₁| >= n, otherwise (L₂, P₂).
inline StrategyOutcome strategy_s(const Graph& g, const SpanningTree& t, const VertexSubset& r) {
    const std::size_t n = g.order();
    std::vector<char> in_p1(n), in_p2(n);
    for (Vertex u = 0; u < n; ++u) {
        in_p1[u] = !r.contains(u) || exceeds_cube_root(g.degree(u), n);
        in_p2[u] = !r.contains(u) || has_two_tree_neighbors_outside(t, r, u);
    }
    auto filter = [&](Vertex v, const std::vector<char>& mask) {
        std::vector<Vertex> out;
        for (Vertex u : g.neighbors(v))
            if (mask[u]) out.push_back(u);
        return out;
    };

    LeafSelection l1, l2;
    for (Vertex v = 0; v < n; ++v) {
        if (!t.is_leaf(v) || !r.contains(v)) continue;
        const std::size_t deg = g.degree(v);
        const Vertex parent = t.leaf_parent(v);
        if (!exceeds_cube_root(deg, n)) {
            if (!in_p1[parent]) continue;
            auto p = filter(v, in_p1);
            if (2 * p.size() >= deg) {
                l1.leaves.push_back(v);
                l1.parents.push_back(std::move(p));
            }
        } else {
            if (!in_p2[parent]) continue;
            auto p = filter(v, in_p2);
            if (4 * p.size() >= deg) {
                l2.leaves.push_back(v);
                l2.parents.push_back(std::move(p));
            }
        }
    }

    StrategyOutcome outcome;
    outcome.l1_size = l1.leaves.size();
    outcome.l2_size = l2.leaves.size();
    if (256 * outcome.l1_size >= n) {
        outcome.branch = Branch::L1;
        outcome.selection = std::move(l1);
    } else {
        outcome.branch = Branch::L2;
        outcome.selection = std::move(l2);
    }
    if (auto problem = validate_selection(g, t, outcome.selection); !problem.empty())
        throw std::logic_error("strategy produced an invalid leaf selection: " + problem);
    return outcome;
}

/// Detaches every v ∈ L from p_T(v) and reattaches it to a uniform member of
/// P(v), independently per leaf. The input tree is left untouched.
///
/// The result is a spanning tree whenever L ⊆ L(T) and P(v) ⊆ N_G(v) \ L;
/// p_T(v) ∈ P(v) is not checked here since only reversibility depends on it.
inline SpanningTree reconfigure(const Graph& g, const SpanningTree& t, const LeafSelection& sel, Rng& rng) {
    if (auto problem = detail::selection_problem(g, t, sel, false); !problem.empty())
        throw Error(ErrorKind::InvalidArgument, "invalid leaf selection: " + problem);
    if (sel.empty()) return t;
    std::vector<char> selected(t.order(), 0);
    for (Vertex v : sel.leaves) selected[v] = 1;
    std::vector<Edge> edges;
    edges.reserve(t.edges().size());
    for (const Edge& e : t.edges())
        if (!selected[e.u] && !selected[e.v]) edges.push_back(e);
    for (std::size_t i = 0; i < sel.leaves.size(); ++i) {
        const auto& p = sel.parents[i];
        edges.emplace_back(sel.leaves[i], p[rng.below(p.size())]);
    }
    return SpanningTree::from_edges(g, std::move(edges));
}

/// Every tree reachable by an (L, P)-leaf reconfiguration of t (including t).
inline std::vector<SpanningTree> enumerate_reconfigurations(const Graph& g, const SpanningTree& t,
                                                            const LeafSelection& sel, std::size_t cap) {
    if (auto problem = detail::selection_problem(g, t, sel, false); !problem.empty())
        throw Error(ErrorKind::InvalidArgument, "invalid leaf selection: " + problem);
    std::size_t total = 1;
    for (const auto& p : sel.parents) {
        if (total > cap / p.size()) throw Error(ErrorKind::CapExceeded, "too many reconfigurations");
        total *= p.size();
    }
    std::vector<char> selected(t.order(), 0);
    for (Vertex v : sel.leaves) selected[v] = 1;
    std::vector<Edge> kept;
    for (const Edge& e : t.edges())
        if (!selected[e.u] && !selected[e.v]) kept.push_back(e);

    std::vector<SpanningTree> out;
    out.reserve(total);
    std::vector<std::size_t> digit(sel.leaves.size(), 0);
    for (std::size_t k = 0; k < total; ++k) {
        std::vector<Edge> edges = kept;
        for (std::size_t i = 0; i < sel.leaves.size(); ++i)
            edges.emplace_back(sel.leaves[i], sel.parents[i][digit[i]]);
        out.push_back(SpanningTree::from_edges(g, std::move(edges)));
        for (std::size_t i = 0; i < digit.size(); ++i) {
            if (++digit[i] < sel.parents[i].size()) break;
            digit[i] = 0;
        }
    }
    return out;
}

struct Violation {
    std::size_t trial = 0;
    std::string reason;
};

struct ReversibilityReport {
    std::size_t trials = 0;
    Branch branch = Branch::L2;
    std::size_t selected = 0;
    std::vector<Violation> violations; ///< sorted by trial
};

/// Compares two strategy outcomes on the parts that define S(T, R).
inline std::string outcome_difference(const StrategyOutcome& a, const StrategyOutcome& b) {
    if (a.branch != b.branch)
        return "branch " + std::string(to_string(a.branch)) + " became " + std::string(to_string(b.branch));
    if (a.selection.leaves != b.selection.leaves)
        return "L changed from " + std::to_string(a.selection.leaves.size()) + " to " +
               std::to_string(b.selection.leaves.size()) + " leaves";
    for (std::size_t i = 0; i < a.selection.parents.size(); ++i)
        if (a.selection.parents[i] != b.selection.parents[i])
            return "P(" + std::to_string(a.selection.leaves[i]) + ") changed";
    return {};
}

/// Draws `trials` reconfigurations T′ of t under strategy(t, R) and checks
/// strategy(T′, R) == strategy(t, R) for each. The strategy is a parameter so
/// deliberately broken variants can be audited too.
template <class Strategy>
ReversibilityReport audit_reversibility(const Graph& g, const SpanningTree& t, const VertexSubset& r,
                                        std::size_t trials, Seed seed, unsigned jobs, Strategy&& strategy) {
    const StrategyOutcome base = strategy(g, t, r);
    ReversibilityReport report;
    report.trials = trials;
    report.branch = base.branch;
    report.selected = base.selection.leaves.size();
    std::vector<std::string> reasons(trials);
    for_each_trial(trials, jobs, [&](std::size_t k) {
        Rng rng = Rng::stream(seed, {stream_tag::reconfigure, k});
        const SpanningTree next = reconfigure(g, t, base.selection, rng);
        reasons[k] = outcome_difference(base, strategy(g, next, r));
    });
    for (std::size_t k = 0; k < trials; ++k)
        if (!reasons[k].empty()) report.violations.push_back({k, std::move(reasons[k])});
    return report;
}

inline ReversibilityReport audit_reversibility(const Graph& g, const SpanningTree& t, const VertexSubset& r,
                                               std::size_t trials, Seed seed, unsigned jobs = 1) {
    return audit_reversibility(g, t, r, trials, seed, jobs, strategy_s);
}

} // namespace ustlab
