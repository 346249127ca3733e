#pragma once

// Command-line front end: argv -> RunConfig -> library call -> JSON/CSV report.
// Depends on the vendored CLI11.hpp and json.hpp.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ustlab/ustlab.hpp"

namespace ustlab::cli {

inline constexpr std::string_view kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

enum class Format { Json, Csv };

struct RunConfig {
    std::string command;    ///< subcommand name
    std::string experiment; ///< kind, for `experiment`
    std::optional<GraphSpec> graph;
    Seed seed = 0;
    bool seed_generated = false;
    std::size_t trials = 1000;
    Format format = Format::Json;
    std::string out;
    unsigned jobs = 1;
    SamplerKind sampler = SamplerKind::Wilson;
    std::uint64_t max_attempts = kDefaultMaxAttempts;
    CountMode mode = CountMode::Exact;
    std::size_t budget = 100'000;
    std::size_t cap = 100'000;
    std::size_t audits = 10;
    bool dump_selections = false;
    bool digests = false;
    std::size_t d = 3;
    std::vector<std::size_t> sizes{50, 100, 200, 400};
    std::string help; ///< non-empty when --help or --version was requested
};

/// Aggregates for JSON plus per-trial rows for CSV. `failed` marks a run that
/// completed but found a violation (exit code 1).
struct Outcome {
    Json results;
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
    bool failed = false;
    std::string failure;
};

namespace detail {

inline bool is_usage_error(ErrorKind kind) noexcept {
    return kind == ErrorKind::UnknownFlag || kind == ErrorKind::InvalidSpec || kind == ErrorKind::MissingGraph ||
           kind == ErrorKind::Usage;
}

/// `--graph` accepts a generator spec ("complete:6") or a path to a graph file.
inline GraphSpec graph_from_flag(const std::string& text) {
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string family = text.substr(0, colon);
        if (family == "complete" || family == "bipartite" || family == "regular" || family == "gnp" ||
            family == "gnp-min-degree" || family == "file")
            return parse_graph_spec(text);
    }
    return spec::FromFile{text};
}

inline GraphSpec checked_spec(GraphSpec s) {
    try {
        validate(s);
    } catch (const Error& e) {
        throw Error(ErrorKind::InvalidSpec, std::string(e.message()));
    }
    return s;
}

inline Seed random_seed() {
    std::random_device rd;
    return (static_cast<Seed>(rd()) << 32) ^ static_cast<Seed>(rd());
}

inline std::string timestamp_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::ostringstream os;
    os << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

inline std::string edges_text(const std::vector<Edge>& edges) {
    std::string s;
    for (const Edge& e : edges) {
        if (!s.empty()) s += ';';
        s += std::to_string(e.u) + "-" + std::to_string(e.v);
    }
    return s;
}

inline Json edges_json(const std::vector<Edge>& edges) {
    Json arr = Json::array();
    for (const Edge& e : edges) arr.push_back({e.u, e.v});
    return arr;
}

inline std::string rational_text(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline Json interval_json(const Interval& i) { return Json::array({i.lo, i.hi}); }

inline Json estimate_json(const CollisionEstimate& e) {
    Json j;
    j["collision"] = e.collision;
    j["maxMassBound"] = e.max_mass_bound;
    j["ci95"] = interval_json(e.ci95);
    j["ci99"] = interval_json(e.ci99);
    j["maxMassCi95"] = Json::array({std::sqrt(e.ci95.lo), std::sqrt(e.ci95.hi)});
    j["classes"] = e.classes;
    j["collidingPairs"] = e.colliding_pairs;
    j["maxClassFrequency"] = e.max_class_frequency;
    j["ciMethod"] = std::string(e.ci_method);
    j["resamples"] = e.resamples;
    return j;
}

inline Json slope_json(const SlopeFit& f) {
    Json j;
    j["slope"] = f.slope;
    j["stderr"] = f.stderr_slope;
    if (std::isnan(f.ci95.lo))
        j["ci95"] = nullptr;
    else
        j["ci95"] = interval_json(f.ci95);
    return j;
}

inline std::string hex64(std::uint64_t x) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << x;
    return os.str();
}

inline std::string number_text(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

} // namespace detail

/// Parses argv (argv[0] is the program name). Throws Error with a usage kind
/// (UnknownFlag, InvalidSpec, MissingGraph, Usage) on bad input.
inline RunConfig parse_args(int argc, const char* const* argv) {
    CLI::App app{"Uniform spanning trees, reversible leaf reconfiguration and anticoncentration experiments",
                 "ustlab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    RunConfig cfg;
    std::string graph_text, gen_text, format_text = "json", sampler_text = "wilson", mode_text = "exact";
    Seed seed = 0;

    auto add_common = [&](CLI::App* sub) {
        auto* graph = sub->add_option("--graph", graph_text, "graph file, or a generator spec");
        auto* gen = sub->add_option("--gen", gen_text,
                                    "generator spec: complete:N | bipartite:A,B | regular:D,N | gnp:N,P,D");
        graph->excludes(gen);
        sub->add_option("--seed", seed, "master seed; random (and echoed) when omitted");
        sub->add_option("--trials", cfg.trials, "number of trials")->check(CLI::PositiveNumber);
        sub->add_option("--format", format_text, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", cfg.out, "write the report here instead of standard output");
        sub->add_option("--jobs", cfg.jobs, "worker threads; results do not depend on it")
            ->check(CLI::PositiveNumber);
    };
    auto add_sampler = [&](CLI::App* sub) {
        sub->add_option("--sampler", sampler_text, "wilson | ab | reject")
            ->check(CLI::IsMember({"wilson", "ab", "reject"}));
        sub->add_option("--max-attempts", cfg.max_attempts, "rejection sampler attempt limit")
            ->check(CLI::PositiveNumber);
    };

    auto* count_exact = app.add_subcommand("count-exact", "spanning-tree count and degree-product bound");
    add_common(count_exact);

    auto* enumerate = app.add_subcommand("enumerate", "list every spanning tree");
    add_common(enumerate);
    enumerate->add_option("--cap", cfg.cap, "fail with CapExceeded above this many trees");

    auto* sample = app.add_subcommand("sample", "sample uniform spanning trees and report leaf counts");
    add_common(sample);
    add_sampler(sample);

    auto* reconf = app.add_subcommand("reconfigure", "apply the selection strategy and audit reversibility");
    add_common(reconf);
    reconf->add_option("--audits", cfg.audits, "reconfigurations audited per trial")->check(CLI::PositiveNumber);
    reconf->add_flag("--dump-selections", cfg.dump_selections, "include L and P(v) per trial");

    auto* noniso = app.add_subcommand("count-noniso", "count spanning trees up to isomorphism");
    add_common(noniso);
    noniso->add_option("--mode", mode_text, "exact | sampled")->check(CLI::IsMember({"exact", "sampled"}));
    noniso->add_option("--budget", cfg.budget, "tree cap (exact) or sample count (sampled)")
        ->check(CLI::PositiveNumber);

    auto* experiment = app.add_subcommand("experiment", "Monte Carlo experiments");
    add_common(experiment);
    add_sampler(experiment);
    experiment->add_option("kind", cfg.experiment, "lemma35 | pipeline | conjecture | leaves | uniformity")
        ->required()
        ->check(CLI::IsMember({"lemma35", "pipeline", "conjecture", "leaves", "uniformity"}));
    experiment->add_option("--d", cfg.d, "hub count for conjecture runs")->check(CLI::PositiveNumber);
    experiment->add_option("--sizes", cfg.sizes, "increasing n values for conjecture runs")->delimiter(',');
    experiment->add_option("--cap", cfg.cap, "tree cap for uniformity runs");
    experiment->add_flag("--digests", cfg.digests, "include per-trial digests");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        cfg.help = app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help();
        return cfg;
    } catch (const CLI::CallForVersion&) {
        cfg.help = std::string(kVersion) + "\n";
        return cfg;
    } catch (const CLI::ExtrasError& e) {
        throw Error(ErrorKind::UnknownFlag, e.what());
    } catch (const CLI::ParseError& e) {
        throw Error(ErrorKind::Usage, e.what());
    }

    CLI::App* chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    cfg.format = format_text == "csv" ? Format::Csv : Format::Json;
    cfg.sampler = parse_sampler(sampler_text);
    cfg.mode = parse_count_mode(mode_text);
    if (chosen->count("--seed") > 0) {
        cfg.seed = seed;
    } else {
        cfg.seed = detail::random_seed();
        cfg.seed_generated = true;
    }
    if (!graph_text.empty()) cfg.graph = detail::checked_spec(detail::graph_from_flag(graph_text));
    if (!gen_text.empty()) {
        const GraphSpec s = parse_graph_spec(gen_text);
        if (std::holds_alternative<spec::FromFile>(s))
            throw Error(ErrorKind::InvalidSpec, "--gen takes a generator spec; use --graph for files");
        cfg.graph = detail::checked_spec(s);
    }
    const bool needs_graph = !(cfg.command == "experiment" && cfg.experiment == "conjecture");
    if (needs_graph && !cfg.graph)
        throw Error(ErrorKind::MissingGraph, "'" + cfg.command + "' needs --graph FILE|SPEC or --gen SPEC");
    if (cfg.command == "experiment" && cfg.experiment == "conjecture") {
        try {
            ustlab::detail::check_sizes(cfg.d, cfg.sizes);
        } catch (const Error& e) {
            throw Error(ErrorKind::Usage, std::string(e.message()));
        }
    }
    return cfg;
}

inline RunConfig parse_args(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"ustlab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return parse_args(static_cast<int>(argv.size()), argv.data());
}

namespace commands {

inline Outcome count_exact(const Graph& g) {
    Outcome o;
    const BigCount tau = count_spanning_trees(g);
    o.results["spanningTrees"] = tau.str();
    o.results["kostochkaUpperBoundHolds"] = check_kostochka_upper_bound(g);
    o.csv_header = {"spanningTrees", "kostochkaUpperBoundHolds"};
    o.csv_rows.push_back({tau.str(), check_kostochka_upper_bound(g) ? "true" : "false"});
    return o;
}

inline Outcome enumerate(const Graph& g, const RunConfig& cfg) {
    Outcome o;
    const auto trees = enumerate_spanning_trees(g, cfg.cap);
    o.results["count"] = std::to_string(trees.size());
    Json list = Json::array();
    o.csv_header = {"tree", "edges"};
    for (std::size_t i = 0; i < trees.size(); ++i) {
        list.push_back(detail::edges_json(trees[i].edges()));
        o.csv_rows.push_back({std::to_string(i), detail::edges_text(trees[i].edges())});
    }
    o.results["trees"] = std::move(list);
    return o;
}

inline Outcome sample(const Graph& g, const RunConfig& cfg) {
    Outcome o;
    const auto r = leaf_stats(g, cfg.trials, cfg.sampler, cfg.seed, cfg.jobs, cfg.max_attempts);
    const bool reject = cfg.sampler == SamplerKind::Rejection;
    o.results["sampler"] = std::string(to_string(cfg.sampler));
    o.results["trials"] = cfg.trials;
    o.results["meanLeaves"] = r.mean_leaves;
    o.results["meanLeafFraction"] = r.mean_leaves / static_cast<double>(g.order());
    o.results["minLeaves"] = r.min_leaves;
    Json hist = Json::object();
    for (auto [k, c] : r.leaf_histogram) hist[std::to_string(k)] = c;
    o.results["leafHistogram"] = std::move(hist);
    o.results["leafCounts"] = r.leaf_counts;
    o.csv_header = {"trial", "leaves"};
    if (reject) {
        std::uint64_t total = 0;
        for (auto a : r.attempts) total += a;
        o.results["attempts"] = r.attempts;
        o.results["acceptanceRate"] = static_cast<double>(cfg.trials) / static_cast<double>(total);
        o.csv_header.push_back("attempts");
    }
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        std::vector<std::string> row{std::to_string(t), std::to_string(r.leaf_counts[t])};
        if (reject) row.push_back(std::to_string(r.attempts[t]));
        o.csv_rows.push_back(std::move(row));
    }
    return o;
}

inline Outcome reconfigure(const Graph& g, const RunConfig& cfg) {
    struct Row {
        StrategyOutcome outcome;
        std::size_t violations = 0;
        std::string first_reason;
    };
    std::vector<Row> rows(cfg.trials);
    for_each_trial(cfg.trials, cfg.jobs, [&](std::size_t t) {
        Rng tree_rng = Rng::stream(cfg.seed, {stream_tag::tree, t});
        const SpanningTree tree = sample_wilson(g, tree_rng);
        Rng subset_rng = Rng::stream(cfg.seed, {stream_tag::subset, t});
        const VertexSubset r = sample_vertex_subset(g.order(), subset_rng);
        const auto audit = audit_reversibility(g, tree, r, cfg.audits, derive_seed(cfg.seed, {stream_tag::reconfigure, t}));
        rows[t].outcome = strategy_s(g, tree, r);
        rows[t].violations = audit.violations.size();
        if (!audit.violations.empty()) rows[t].first_reason = audit.violations.front().reason;
    });

    Outcome o;
    o.csv_header = {"trial", "branch", "selected", "l1Size", "l2Size", "minP", "medianP", "violations"};
    Json per_trial = Json::array();
    std::size_t total_violations = 0, l1_trials = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const auto& row = rows[t];
        const auto& sel = row.outcome.selection;
        std::vector<std::size_t> sizes;
        for (const auto& p : sel.parents) sizes.push_back(p.size());
        std::sort(sizes.begin(), sizes.end());
        Json j;
        j["trial"] = t;
        j["branch"] = std::string(to_string(row.outcome.branch));
        j["selected"] = sel.leaves.size();
        j["l1Size"] = row.outcome.l1_size;
        j["l2Size"] = row.outcome.l2_size;
        std::string min_p, median_p;
        if (sizes.empty()) {
            j["minP"] = nullptr;
            j["medianP"] = nullptr;
        } else {
            const std::size_t k = sizes.size();
            const double median = k % 2 ? static_cast<double>(sizes[k / 2])
                                        : (static_cast<double>(sizes[k / 2 - 1]) + static_cast<double>(sizes[k / 2])) / 2;
            j["minP"] = sizes.front();
            j["medianP"] = median;
            min_p = std::to_string(sizes.front());
            median_p = detail::number_text(median);
        }
        j["violations"] = row.violations;
        if (!row.first_reason.empty()) j["firstViolation"] = row.first_reason;
        if (cfg.dump_selections) {
            j["leaves"] = sel.leaves;
            j["parents"] = sel.parents;
        }
        per_trial.push_back(std::move(j));
        total_violations += row.violations;
        l1_trials += row.outcome.branch == Branch::L1;
        o.csv_rows.push_back({std::to_string(t), std::string(to_string(row.outcome.branch)),
                              std::to_string(sel.leaves.size()), std::to_string(row.outcome.l1_size),
                              std::to_string(row.outcome.l2_size), min_p, median_p, std::to_string(row.violations)});
    }
    o.results["trials"] = cfg.trials;
    o.results["auditsPerTrial"] = cfg.audits;
    o.results["totalViolations"] = total_violations;
    o.results["l1BranchTrials"] = l1_trials;
    o.results["perTrial"] = std::move(per_trial);
    if (total_violations > 0) {
        o.failed = true;
        o.failure = "ReversibilityViolation: " + std::to_string(total_violations) + " audited reconfigurations";
    }
    return o;
}

inline Outcome count_noniso(const Graph& g, const RunConfig& cfg) {
    Outcome o;
    const auto c = count_non_iso_spanning_trees(g, cfg.mode, cfg.budget, cfg.seed, cfg.jobs);
    o.results["mode"] = cfg.mode == CountMode::Exact ? "exact" : "sampled";
    o.results["distinct"] = c.distinct;
    o.results["examined"] = c.examined;
    if (cfg.mode == CountMode::Sampled) {
        o.results["singletons"] = c.singletons;
        o.results["unseenMassEstimate"] = c.unseen_mass_estimate;
    }
    o.csv_header = {"mode", "distinct", "examined", "singletons"};
    o.csv_rows.push_back({o.results["mode"].get<std::string>(), std::to_string(c.distinct),
                          std::to_string(c.examined), std::to_string(c.singletons)});
    return o;
}

inline Outcome lemma35(const Graph& g, const RunConfig& cfg) {
    Rng tree_rng = Rng::stream(cfg.seed, {stream_tag::tree, 0});
    const SpanningTree tree = sample_wilson(g, tree_rng);
    Rng subset_rng = Rng::stream(cfg.seed, {stream_tag::subset, 0});
    const VertexSubset r = sample_vertex_subset(g.order(), subset_rng);
    const StrategyOutcome outcome = strategy_s(g, tree, r);
    const BipartiteOneOutInstance inst = instance_from_selection(tree, outcome.selection);
    const CollisionReport report = estimate_max_point_mass(inst, cfg.trials, cfg.seed, cfg.jobs);

    Outcome o;
    o.results["seed"] = cfg.seed;
    o.results["graph"] = to_string(*cfg.graph);
    o.results["trials"] = cfg.trials;
    o.results["branch"] = std::string(to_string(outcome.branch));
    o.results["aSize"] = inst.a_side.size();
    o.results["c"] = inst.c();
    o.results["minADegree"] = inst.min_a_degree();
    o.results["estimates"] = detail::estimate_json(report.estimate);
    if (cfg.digests) {
        Json d = Json::array();
        for (auto x : report.digests) d.push_back(detail::hex64(x));
        o.results["perTrialDigests"] = std::move(d);
    }
    o.csv_header = {"trial", "digest"};
    for (std::size_t t = 0; t < report.digests.size(); ++t)
        o.csv_rows.push_back({std::to_string(t), detail::hex64(report.digests[t])});
    return o;
}

inline Outcome pipeline(const Graph& g, const RunConfig& cfg) {
    const PipelineReport report = pipeline_collision(g, cfg.trials, cfg.seed, cfg.jobs);
    Outcome o;
    double mean_selected = 0;
    for (auto s : report.selected) mean_selected += static_cast<double>(s);
    o.results["seed"] = cfg.seed;
    o.results["graph"] = to_string(*cfg.graph);
    o.results["trials"] = cfg.trials;
    o.results["l1BranchTrials"] = report.l1_branch_trials;
    o.results["meanSelected"] = mean_selected / static_cast<double>(cfg.trials);
    o.results["estimates"] = {{"code", detail::estimate_json(report.code.estimate)},
                              {"histogram", detail::estimate_json(report.histogram.estimate)}};
    if (cfg.digests) {
        Json codes = Json::array(), hists = Json::array();
        for (auto x : report.code.digests) codes.push_back(detail::hex64(x));
        for (auto x : report.histogram.digests) hists.push_back(detail::hex64(x));
        o.results["perTrialDigests"] = {{"code", std::move(codes)}, {"histogram", std::move(hists)}};
    }
    o.csv_header = {"trial", "selected", "histogramDigest", "codeDigest"};
    for (std::size_t t = 0; t < cfg.trials; ++t)
        o.csv_rows.push_back({std::to_string(t), std::to_string(report.selected[t]),
                              detail::hex64(report.histogram.digests[t]), detail::hex64(report.code.digests[t])});
    return o;
}

inline Outcome conjecture(const RunConfig& cfg) {
    const ScalingReport scaling = conjecture_scaling(cfg.d, cfg.sizes, cfg.trials, cfg.seed, cfg.jobs);
    const BaselineReport baseline =
        multinomial_baseline(cfg.d, cfg.sizes, cfg.trials, derive_seed(cfg.seed, {stream_tag::multinomial}), cfg.jobs);
    Outcome o;
    o.results["exploratory"] = true;
    o.results["seed"] = cfg.seed;
    o.results["d"] = cfg.d;
    o.results["trials"] = cfg.trials;
    Json rows = Json::array();
    o.csv_header = {"n", "codeCollision", "codeMaxMassBound", "histogramCollision", "baselineModeFrequency"};
    for (std::size_t i = 0; i < scaling.rows.size(); ++i) {
        const auto& row = scaling.rows[i];
        rows.push_back({{"n", row.n},
                        {"graph", "bipartite:" + std::to_string(cfg.d) + "," + std::to_string(row.n - cfg.d)},
                        {"code", detail::estimate_json(row.code.estimate)},
                        {"histogram", detail::estimate_json(row.histogram.estimate)},
                        {"baselineBalls", baseline.rows[i].balls},
                        {"baselineModeFrequency", baseline.rows[i].mode_frequency},
                        {"baselineCollision", baseline.rows[i].collision}});
        o.csv_rows.push_back({std::to_string(row.n), detail::number_text(row.code.estimate.collision),
                              detail::number_text(row.code.estimate.max_mass_bound),
                              detail::number_text(row.histogram.estimate.collision),
                              detail::number_text(baseline.rows[i].mode_frequency)});
    }
    o.results["rows"] = std::move(rows);
    o.results["maxMassSlope"] = detail::slope_json(scaling.slope);
    o.results["strictlyDecreasing"] = scaling.strictly_decreasing;
    o.results["baselineSlope"] = detail::slope_json(baseline.slope);
    o.results["baselineTargetSlope"] = -(static_cast<double>(cfg.d) - 1) / 2;
    return o;
}

inline Outcome leaves(const Graph& g, const RunConfig& cfg) {
    const auto r = leaf_stats(g, cfg.trials, cfg.sampler, cfg.seed, cfg.jobs, cfg.max_attempts);
    const double n = static_cast<double>(g.order());
    Outcome o;
    o.results["n"] = g.order();
    o.results["sampler"] = std::string(to_string(cfg.sampler));
    o.results["expectedDigraphLeaves"] = detail::rational_text(r.expected_digraph_leaves);
    o.results["expectedDigraphLeavesApprox"] = r.expected_digraph_leaves.convert_to<double>();
    o.results["quarterN"] = n / 4;
    o.results["expectationBoundHolds"] = r.expectation_bound_holds;
    o.results["fourPowNegSSum"] = r.four_pow_neg_s_sum;
    o.results["trials"] = cfg.trials;
    o.results["meanLeaves"] = r.mean_leaves;
    o.results["meanLeafFraction"] = r.mean_leaves / n;
    o.results["minLeaves"] = r.min_leaves;
    o.results["minLeavesAboveEighth"] = 8 * r.min_leaves > g.order();
    o.csv_header = {"trial", "leaves"};
    for (std::size_t t = 0; t < cfg.trials; ++t)
        o.csv_rows.push_back({std::to_string(t), std::to_string(r.leaf_counts[t])});
    return o;
}

inline Outcome uniformity(const Graph& g, const RunConfig& cfg) {
    const auto trees = enumerate_spanning_trees(g, cfg.cap);
    std::map<std::vector<Edge>, std::size_t> index;
    for (std::size_t i = 0; i < trees.size(); ++i) index[trees[i].edges()] = i;
    std::vector<std::size_t> direct_of(cfg.trials), pipeline_of(cfg.trials);
    for_each_trial(cfg.trials, cfg.jobs, [&](std::size_t t) {
        Rng rng = Rng::stream(cfg.seed, {stream_tag::tree, t});
        direct_of[t] = index.at(sample_tree(g, cfg.sampler, rng, cfg.max_attempts).edges());
        pipeline_of[t] = index.at(run_pipeline_trial(g, derive_seed(cfg.seed, {1}), t).reconfigured.edges());
    });
    std::vector<std::size_t> direct(trees.size(), 0), piped(trees.size(), 0);
    for (auto i : direct_of) ++direct[i];
    for (auto i : pipeline_of) ++piped[i];

    auto test_json = [](const std::vector<std::size_t>& counts) {
        const auto chi = chi_square_uniform(counts);
        return Json{{"chiSquare", chi.statistic}, {"dof", chi.dof}, {"pValue", chi.p_value},
                    {"uniformAtAlpha1e-3", chi.p_value >= 1e-3}, {"counts", counts}};
    };
    Outcome o;
    o.results["spanningTrees"] = trees.size();
    o.results["trials"] = cfg.trials;
    o.results["sampler"] = {{"name", std::string(to_string(cfg.sampler))}};
    o.results["sampler"].update(test_json(direct));
    o.results["pipeline"] = test_json(piped);
    o.csv_header = {"tree", "edges", "samplerCount", "pipelineCount"};
    for (std::size_t i = 0; i < trees.size(); ++i)
        o.csv_rows.push_back({std::to_string(i), detail::edges_text(trees[i].edges()), std::to_string(direct[i]),
                              std::to_string(piped[i])});
    return o;
}

} // namespace commands

inline Outcome run_command(const RunConfig& cfg) {
    if (cfg.command == "experiment" && cfg.experiment == "conjecture") return commands::conjecture(cfg);
    const Graph g = generate(*cfg.graph, cfg.seed);
    if (cfg.command == "count-exact") return commands::count_exact(g);
    if (cfg.command == "enumerate") return commands::enumerate(g, cfg);
    if (cfg.command == "sample") return commands::sample(g, cfg);
    if (cfg.command == "reconfigure") return commands::reconfigure(g, cfg);
    if (cfg.command == "count-noniso") return commands::count_noniso(g, cfg);
    if (cfg.experiment == "lemma35") return commands::lemma35(g, cfg);
    if (cfg.experiment == "pipeline") return commands::pipeline(g, cfg);
    if (cfg.experiment == "leaves") return commands::leaves(g, cfg);
    if (cfg.experiment == "uniformity") return commands::uniformity(g, cfg);
    throw Error(ErrorKind::Usage, "unknown command '" + cfg.command + "'");
}

inline Json config_json(const RunConfig& cfg) {
    Json j;
    j["command"] = cfg.command;
    if (!cfg.experiment.empty()) j["experiment"] = cfg.experiment;
    if (cfg.graph) j["graph"] = to_string(*cfg.graph);
    j["seed"] = cfg.seed;
    j["seedGenerated"] = cfg.seed_generated;
    j["trials"] = cfg.trials;
    j["format"] = cfg.format == Format::Csv ? "csv" : "json";
    j["jobs"] = cfg.jobs;
    if (cfg.command == "sample" || cfg.command == "experiment") {
        j["sampler"] = std::string(to_string(cfg.sampler));
        j["maxAttempts"] = cfg.max_attempts;
    }
    if (cfg.command == "enumerate" || cfg.command == "experiment") j["cap"] = cfg.cap;
    if (cfg.command == "count-noniso") {
        j["mode"] = cfg.mode == CountMode::Exact ? "exact" : "sampled";
        j["budget"] = cfg.budget;
    }
    if (cfg.command == "reconfigure") {
        j["audits"] = cfg.audits;
        j["dumpSelections"] = cfg.dump_selections;
    }
    if (cfg.experiment == "conjecture") {
        j["d"] = cfg.d;
        j["sizes"] = cfg.sizes;
    }
    return j;
}

inline void write_csv(std::ostream& os, const RunConfig& cfg, const Outcome& o) {
    os << "# seed=" << cfg.seed << "\n";
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << "\n";
    };
    line(o.csv_header);
    for (const auto& row : o.csv_rows) line(row);
}

/// Full program: exit 0 on success, 1 on a domain error or failed audit,
/// 2 on a usage error. Diagnostics go to `err` as "error: Kind: message".
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_args(argc, argv);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    if (!cfg.help.empty()) {
        out << cfg.help;
        return 0;
    }

    const std::string started = detail::timestamp_now();
    Outcome outcome;
    try {
        outcome = run_command(cfg);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return detail::is_usage_error(e.kind()) ? 2 : 1;
    }

    std::ostringstream body;
    if (cfg.format == Format::Csv) {
        write_csv(body, cfg, outcome);
    } else {
        Json report;
        report["version"] = std::string(kVersion);
        report["command"] = cfg.experiment.empty() ? cfg.command : cfg.command + " " + cfg.experiment;
        report["seed"] = cfg.seed;
        report["config"] = config_json(cfg);
        report["results"] = std::move(outcome.results);
        report["timestamps"] = {{"started", started}, {"finished", detail::timestamp_now()}};
        body << report.dump(2) << "\n";
    }

    if (cfg.out.empty()) {
        out << body.str();
    } else {
        std::ofstream file(cfg.out);
        if (!file) {
            err << "error: cannot open '" << cfg.out << "' for writing\n";
            return 1;
        }
        file << body.str();
    }
    if (outcome.failed) {
        err << "error: " << outcome.failure << "\n";
        return 1;
    }
    return 0;
}

} // namespace ustlab::cli
