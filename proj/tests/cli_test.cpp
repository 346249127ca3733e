#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ustlab/cli.hpp"

using namespace ustlab;
using namespace ustlab::cli;

namespace {

struct Invocation {
    int code = 0;
    std::string out;
    std::string err;
};

Invocation run(std::vector<std::string> args) {
    std::vector<const char*> argv{"ustlab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

Json results_of(const Invocation& r) { return Json::parse(r.out).at("results"); }

ErrorKind parse_error(std::vector<std::string> args) {
    try {
        parse_args(args);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected a parse error";
    return ErrorKind::InvalidArgument;
}

} // namespace

TEST(ParseArgs, Examples) {
    const RunConfig a = parse_args({"count-exact", "--gen", "complete:6"});
    EXPECT_EQ(a.command, "count-exact");
    ASSERT_TRUE(a.graph.has_value());
    EXPECT_EQ(to_string(*a.graph), "complete:6");
    EXPECT_TRUE(a.seed_generated);

    const RunConfig b = parse_args({"sample", "--gen", "bipartite:3,40", "--trials", "1000", "--seed", "42"});
    EXPECT_EQ(b.seed, 42u);
    EXPECT_FALSE(b.seed_generated);
    EXPECT_EQ(b.trials, 1000u);

    const RunConfig c = parse_args({"experiment", "conjecture", "--d", "2", "--sizes", "10,20,40"});
    EXPECT_EQ(c.experiment, "conjecture");
    EXPECT_EQ(c.sizes, (std::vector<std::size_t>{10, 20, 40}));
    EXPECT_FALSE(c.graph.has_value());

    const RunConfig d = parse_args({"count-noniso", "--graph", "regular:3,10", "--mode", "sampled"});
    EXPECT_EQ(to_string(*d.graph), "regular:3,10");
    EXPECT_EQ(d.mode, CountMode::Sampled);
    EXPECT_EQ(to_string(*parse_args({"sample", "--graph", "g.txt"}).graph), "file:g.txt");
}

TEST(ParseArgs, UsageErrors) {
    EXPECT_EQ(parse_error({"sample", "--gen", "regular:3,5"}), ErrorKind::InvalidSpec);
    EXPECT_EQ(parse_error({"sample", "--gen", "torus:4"}), ErrorKind::InvalidSpec);
    EXPECT_EQ(parse_error({"sample", "--gen", "complete:4", "--frobnicate"}), ErrorKind::UnknownFlag);
    EXPECT_EQ(parse_error({"sample", "--trials", "5"}), ErrorKind::MissingGraph);
    EXPECT_EQ(parse_error({"sample", "--gen", "complete:4", "--trials", "0"}), ErrorKind::Usage);
    EXPECT_EQ(parse_error({"sample", "--gen", "complete:4", "--graph", "complete:5"}), ErrorKind::Usage);
    EXPECT_EQ(parse_error({"experiment", "conjecture", "--d", "3", "--sizes", "40,20"}), ErrorKind::Usage);
    EXPECT_EQ(parse_error({}), ErrorKind::Usage);
}

TEST(RunCli, CountExactPayload) {
    const Invocation r = run({"count-exact", "--gen", "complete:4", "--seed", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(results_of(r).dump(), R"({"spanningTrees":"16","kostochkaUpperBoundHolds":true})");
    const Json report = Json::parse(r.out);
    EXPECT_EQ(report.at("seed"), 1u);
    EXPECT_TRUE(report.contains("timestamps"));
    EXPECT_TRUE(report.contains("version"));
}

TEST(RunCli, LargeCountsStayExact) {
    const Invocation r = run({"count-exact", "--gen", "complete:30", "--seed", "1"});
    EXPECT_EQ(results_of(r).at("spanningTrees"),
              BigCount(boost::multiprecision::pow(BigCount(30), 28)).str());
}

TEST(RunCli, ExitCodes) {
    EXPECT_EQ(run({"reconfigure", "--gen", "bipartite:3,20", "--trials", "5", "--seed", "3"}).code, 0);
    const Invocation cap = run({"enumerate", "--gen", "complete:5", "--cap", "10", "--seed", "1"});
    EXPECT_EQ(cap.code, 1);
    EXPECT_NE(cap.err.find("CapExceeded"), std::string::npos);
    const Invocation usage = run({"sample", "--gen", "regular:3,5"});
    EXPECT_EQ(usage.code, 2);
    EXPECT_NE(usage.err.find("InvalidSpec"), std::string::npos);
    EXPECT_EQ(run({"sample", "--bogus"}).code, 2);
    EXPECT_EQ(run({"sample", "--graph", "/nonexistent/graph.txt"}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(RunCli, SeedIsEchoedWhenGenerated) {
    const Invocation r = run({"sample", "--gen", "complete:5", "--trials", "3"});
    ASSERT_EQ(r.code, 0);
    const Json report = Json::parse(r.out);
    EXPECT_TRUE(report.at("config").at("seedGenerated").get<bool>());
    const Seed seed = report.at("seed").get<Seed>();
    const Invocation again = run({"sample", "--gen", "complete:5", "--trials", "3", "--seed", std::to_string(seed)});
    EXPECT_EQ(results_of(again), results_of(r));
}

TEST(RunCli, ResultsAreReproducible) {
    const std::vector<std::vector<std::string>> commands{
        {"sample", "--gen", "regular:3,20", "--trials", "20", "--sampler", "reject"},
        {"reconfigure", "--gen", "gnp:40,0.2,3", "--trials", "6", "--dump-selections"},
        {"count-noniso", "--gen", "complete:6", "--mode", "sampled", "--budget", "200"},
        {"experiment", "lemma35", "--gen", "bipartite:3,30", "--trials", "300", "--digests"},
        {"experiment", "pipeline", "--gen", "bipartite:3,30", "--trials", "300"},
        {"experiment", "leaves", "--gen", "complete:10", "--trials", "50"},
        {"experiment", "uniformity", "--gen", "complete:4", "--trials", "500"},
        {"experiment", "conjecture", "--d", "2", "--sizes", "10,20", "--trials", "200"},
    };
    for (auto args : commands) {
        args.insert(args.end(), {"--seed", "77"});
        const Invocation a = run(args);
        ASSERT_EQ(a.code, 0) << args[0] << " " << a.err;
        auto parallel = args;
        parallel.insert(parallel.end(), {"--jobs", "3"});
        const Invocation b = run(parallel);
        EXPECT_EQ(results_of(a).dump(), results_of(b).dump()) << args[0] << " " << args[1];
    }
}

TEST(RunCli, CsvHasSeedLineAndOneRowPerTrial) {
    const Invocation r = run({"sample", "--gen", "complete:6", "--trials", "4", "--seed", "5", "--format", "csv"});
    ASSERT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    ASSERT_EQ(lines.size(), 6u);
    EXPECT_EQ(lines[0], "# seed=5");
    EXPECT_EQ(lines[1], "trial,leaves");
    EXPECT_EQ(lines[2].rfind("0,", 0), 0u);
}

TEST(RunCli, ReadsGraphFilesAndWritesOutFile) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto graph = dir / "ustlab_cli_k4.txt";
    const auto report = dir / "ustlab_cli_report.json";
    {
        std::ofstream f(graph);
        f << "# K4\n4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
    }
    const Invocation r = run({"count-exact", "--graph", graph.string(), "--out", report.string(), "--seed", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(report);
    const Json j = Json::parse(in);
    EXPECT_EQ(j.at("results").at("spanningTrees"), "16");
    EXPECT_EQ(j.at("config").at("graph"), "file:" + graph.string());
    std::filesystem::remove(graph);
    std::filesystem::remove(report);
}

TEST(RunCli, SamplePayloadCarriesRejectionAttempts) {
    const Json res = results_of(run({"sample", "--gen", "complete:3", "--trials", "400", "--seed", "8",
                                     "--sampler", "reject"}));
    EXPECT_EQ(res.at("attempts").size(), 400u);
    EXPECT_NEAR(res.at("acceptanceRate").get<double>(), 0.75, 0.07);
    EXPECT_EQ(res.at("leafCounts").size(), 400u);
}
