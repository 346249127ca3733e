#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ustlab/error.hpp"
#include "ustlab/graph.hpp"
#include "ustlab/leaf_reconfig.hpp"
#include "ustlab/parallel.hpp"
#include "ustlab/rng.hpp"
#include "ustlab/sampler.hpp"
#include "ustlab/spanning_tree.hpp"
#include "ustlab/stats.hpp"
#include "ustlab/tree_iso.hpp"

namespace ustlab {

/// Bipartite graph on 0..n-1 with parts A and B = V \ A, where each A-vertex
/// keeps one uniformly random incident edge. offsets[v] is the shift b_v
/// added to d_H(v) before vertices are tallied by degree.
struct BipartiteOneOutInstance {
    std::size_t n = 0;
    std::vector<Vertex> a_side;               ///< sorted
    std::vector<std::vector<Vertex>> choices; ///< neighbours (in B) of each A-vertex
    std::vector<long long> offsets;           ///< b_v for every vertex

    double c() const noexcept { return n == 0 ? 0.0 : static_cast<double>(a_side.size()) / static_cast<double>(n); }

    std::size_t min_a_degree() const noexcept {
        std::size_t best = 0;
        for (std::size_t i = 0; i < choices.size(); ++i)
            best = i == 0 ? choices[i].size() : std::min(best, choices[i].size());
        return best;
    }

    void validate() const {
        auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
        if (offsets.size() != n) fail("offsets must cover every vertex");
        if (choices.size() != a_side.size()) fail("one choice list per A-vertex");
        std::vector<char> in_a(n, 0);
        for (Vertex v : a_side) {
            if (v >= n) fail("A-vertex out of range");
            if (in_a[v]) fail("A-vertex listed twice");
            in_a[v] = 1;
        }
        for (std::size_t i = 0; i < choices.size(); ++i) {
            if (choices[i].empty()) fail("A-vertex " + std::to_string(a_side[i]) + " has no incident edge");
            for (Vertex u : choices[i])
                if (u >= n || in_a[u]) fail("A-vertex " + std::to_string(a_side[i]) + " has a neighbour outside B");
        }
    }
};

/// Sorted (k, #{v : d_H(v) + b_v = k}) pairs with non-zero counts.
using DegreeVector = std::vector<std::pair<long long, std::size_t>>;

namespace detail {
inline DegreeVector tally(const std::vector<long long>& values) {
    std::vector<long long> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    DegreeVector out;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        out.emplace_back(sorted[i], j - i);
        i = j;
    }
    return out;
}
} // namespace detail

inline DegreeVector sample_h(const BipartiteOneOutInstance& inst, Rng& rng) {
    std::vector<long long> value(inst.offsets);
    for (std::size_t i = 0; i < inst.a_side.size(); ++i) {
        const auto& nb = inst.choices[i];
        ++value[inst.a_side[i]];
        ++value[nb[rng.below(nb.size())]];
    }
    return detail::tally(value);
}

inline std::uint64_t digest_of(const DegreeVector& v) {
    Digest d;
    for (auto [k, count] : v) {
        d.word(static_cast<std::uint64_t>(k));
        d.word(count);
    }
    return d.value();
}

inline std::uint64_t digest_of(const DegreeHistogram& h) {
    Digest d;
    for (auto [k, count] : h) {
        d.word(k);
        d.word(count);
    }
    return d.value();
}

inline std::uint64_t digest_of(const CanonicalTreeCode& c) {
    Digest d;
    d.word(c.n);
    d.bytes(c.code);
    return d.value();
}

/// The bipartite graph between the selected leaves L and V \ L, with
/// N(v) = P(v) and offsets b_v = d_{T[V\L]}(v). Keeping one uniform edge per
/// leaf reproduces the degree histogram of the reconfigured tree.
inline BipartiteOneOutInstance instance_from_selection(const SpanningTree& t, const LeafSelection& sel) {
    BipartiteOneOutInstance inst;
    inst.n = t.order();
    inst.a_side = sel.leaves;
    inst.choices = sel.parents;
    inst.offsets.assign(inst.n, 0);
    std::vector<char> selected(inst.n, 0);
    for (Vertex v : sel.leaves) selected[v] = 1;
    for (const Edge& e : t.edges()) {
        if (selected[e.u] || selected[e.v]) continue;
        ++inst.offsets[e.u];
        ++inst.offsets[e.v];
    }
    return inst;
}

struct CollisionReport {
    Seed seed = 0;
    CollisionEstimate estimate;
    Interval max_mass_ci95; ///< √ of the collision interval
    std::vector<std::uint64_t> digests;
};

namespace detail {
inline CollisionReport collision_report(std::vector<std::uint64_t> digests, Seed seed, unsigned jobs) {
    CollisionReport r;
    r.seed = seed;
    r.estimate = estimate_collision(digests, derive_seed(seed, {0x63690000ULL}), kBootstrapResamples, jobs);
    r.max_mass_ci95 = {std::sqrt(r.estimate.ci95.lo), std::sqrt(r.estimate.ci95.hi)};
    r.digests = std::move(digests);
    return r;
}
} // namespace detail

/// Collision statistics of the H-degree vector over `trials` draws. Since
/// (max_x p_x)² <= Σ p_x², √collision bounds the largest point mass.
inline CollisionReport estimate_max_point_mass(const BipartiteOneOutInstance& inst, std::size_t trials, Seed seed,
                                               unsigned jobs = 1) {
    inst.validate();
    if (trials < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 trials");
    std::vector<std::uint64_t> digests(trials);
    for_each_trial(trials, jobs, [&](std::size_t t) {
        Rng rng = Rng::stream(seed, {stream_tag::bipartite, t});
        digests[t] = digest_of(sample_h(inst, rng));
    });
    return detail::collision_report(std::move(digests), seed, jobs);
}

/// One run of T → R → S(T,R) → T′.
struct PipelineTrial {
    SpanningTree original;
    VertexSubset subset;
    StrategyOutcome outcome;
    SpanningTree reconfigured;
};

inline PipelineTrial run_pipeline_trial(const Graph& g, Seed seed, std::size_t t) {
    PipelineTrial trial;
    Rng tree_rng = Rng::stream(seed, {stream_tag::tree, t});
    trial.original = sample_wilson(g, tree_rng);
    Rng subset_rng = Rng::stream(seed, {stream_tag::subset, t});
    trial.subset = sample_vertex_subset(g.order(), subset_rng, derive_seed(seed, {stream_tag::subset, t}));
    trial.outcome = strategy_s(g, trial.original, trial.subset);
    Rng move_rng = Rng::stream(seed, {stream_tag::reconfigure, t});
    trial.reconfigured = reconfigure(g, trial.original, trial.outcome.selection, move_rng);
    return trial;
}

struct PipelineReport {
    Seed seed = 0;
    std::size_t trials = 0;
    CollisionReport histogram; ///< over degree histograms of T′
    CollisionReport code;      ///< over canonical codes of T′
    std::size_t l1_branch_trials = 0;
    std::vector<std::size_t> selected; ///< |L| per trial
};

/// Runs the full pipeline per trial and reports collision statistics of the
/// reconfigured trees. Equal codes imply equal histograms, so code
/// collisions never exceed histogram collisions.
inline PipelineReport pipeline_collision(const Graph& g, std::size_t trials, Seed seed, unsigned jobs = 1) {
    detail::require_connected(g);
    if (trials < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 trials");
    std::vector<std::uint64_t> hist(trials), code(trials);
    std::vector<std::size_t> selected(trials);
    std::vector<char> l1(trials);
    for_each_trial(trials, jobs, [&](std::size_t t) {
        const PipelineTrial trial = run_pipeline_trial(g, seed, t);
        hist[t] = digest_of(degree_histogram(trial.reconfigured));
        code[t] = digest_of(canonical_code(trial.reconfigured));
        selected[t] = trial.outcome.selection.leaves.size();
        l1[t] = trial.outcome.branch == Branch::L1;
    });
    PipelineReport report;
    report.seed = seed;
    report.trials = trials;
    report.histogram = detail::collision_report(std::move(hist), derive_seed(seed, {1}), jobs);
    report.code = detail::collision_report(std::move(code), derive_seed(seed, {2}), jobs);
    report.l1_branch_trials = static_cast<std::size_t>(std::count(l1.begin(), l1.end(), 1));
    report.selected = std::move(selected);
    if (report.code.estimate.colliding_pairs > report.histogram.estimate.colliding_pairs)
        throw std::logic_error("canonical-code collisions exceed degree-histogram collisions");
    return report;
}

struct ScalingRow {
    std::size_t n = 0;
    CollisionReport code;
    CollisionReport histogram;
};

struct ScalingReport {
    std::size_t d = 0;
    Seed seed = 0;
    std::size_t trials = 0;
    std::vector<ScalingRow> rows;
    SlopeFit slope; ///< log(max-mass bound of codes) against log n
    bool strictly_decreasing = false;
};

namespace detail {
inline void check_sizes(std::size_t d, const std::vector<std::size_t>& sizes) {
    if (sizes.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two sizes");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] <= 2 * d) throw Error(ErrorKind::InvalidArgument, "each n must exceed 2d");
        if (i > 0 && sizes[i] <= sizes[i - 1]) throw Error(ErrorKind::InvalidArgument, "sizes must increase");
    }
}
} // namespace detail

/// Pipeline collisions on K_{d,n−d} over increasing n. Exploratory.
inline ScalingReport conjecture_scaling(std::size_t d, const std::vector<std::size_t>& sizes, std::size_t trials,
                                        Seed seed, unsigned jobs = 1) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "d must be positive");
    detail::check_sizes(d, sizes);
    ScalingReport report;
    report.d = d;
    report.seed = seed;
    report.trials = trials;
    std::vector<double> xs, ys;
    for (std::size_t n : sizes) {
        const Graph g = complete_bipartite_graph(d, n - d);
        PipelineReport p = pipeline_collision(g, trials, derive_seed(seed, {n}), jobs);
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(p.code.estimate.max_mass_bound));
        report.rows.push_back({n, std::move(p.code), std::move(p.histogram)});
    }
    report.slope = fit_line(xs, ys);
    report.strictly_decreasing = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i)
        report.strictly_decreasing &= report.rows[i].code.estimate.max_mass_bound <
                                      report.rows[i - 1].code.estimate.max_mass_bound;
    return report;
}

struct BaselineRow {
    std::size_t n = 0;
    std::size_t balls = 0;
    double mode_frequency = 0.0; ///< empirical mass of the most frequent outcome
    double collision = 0.0;
};

struct BaselineReport {
    std::size_t d = 0;
    Seed seed = 0;
    std::size_t trials = 0;
    std::vector<BaselineRow> rows;
    SlopeFit slope; ///< log(mode frequency) against log n
};

/// Direct simulation of the K_{d,n−d} heuristic: the leaves hanging off the d
/// hubs form a multinomial with n − 2d + 1 balls in d equally likely bins,
/// observed up to permutation of the bins.
inline BaselineReport multinomial_baseline(std::size_t d, const std::vector<std::size_t>& sizes, std::size_t trials,
                                           Seed seed, unsigned jobs = 1) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "d must be positive");
    detail::check_sizes(d, sizes);
    if (trials < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 trials");
    BaselineReport report;
    report.d = d;
    report.seed = seed;
    report.trials = trials;
    std::vector<double> xs, ys;
    for (std::size_t n : sizes) {
        const std::size_t balls = n - 2 * d + 1;
        std::vector<std::uint64_t> digests(trials);
        for_each_trial(trials, jobs, [&](std::size_t t) {
            Rng rng = Rng::stream(seed, {stream_tag::multinomial, n, t});
            std::vector<std::uint64_t> bins(d, 0);
            for (std::size_t b = 0; b < balls; ++b) ++bins[rng.below(d)];
            std::sort(bins.begin(), bins.end());
            Digest dg;
            for (auto c : bins) dg.word(c);
            digests[t] = dg.value();
        });
        const CollisionEstimate est = estimate_collision(digests, seed, 0);
        report.rows.push_back({n, balls, est.max_class_frequency, est.collision});
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(est.max_class_frequency));
    }
    report.slope = fit_line(xs, ys);
    return report;
}

} // namespace ustlab
