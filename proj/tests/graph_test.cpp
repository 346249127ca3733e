#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ustlab/graph.hpp"
#include "ustlab/graph_io.hpp"
#include "ustlab/graph_spec.hpp"

using namespace ustlab;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an ustlab::Error";
    return ErrorKind::Usage;
}

} // namespace

TEST(BuildGraph, Triangle) {
    const std::vector<Edge> edges{{0, 1}, {1, 2}, {0, 2}};
    const Graph g = build_graph(edges, 3);
    EXPECT_EQ(g.order(), 3u);
    EXPECT_EQ(g.size(), 3u);
    for (Vertex v = 0; v < 3; ++v) EXPECT_EQ(g.degree(v), 2u);
    EXPECT_TRUE(g.adjacent(2, 0));
}

TEST(BuildGraph, RejectsInvalidEdges) {
    const std::vector<Edge> dup{{0, 1}, {1, 0}};
    EXPECT_EQ(kind_of([&] { build_graph(dup, 2); }), ErrorKind::DuplicateEdge);
    const std::vector<Edge> loop{{1, 1}};
    EXPECT_EQ(kind_of([&] { build_graph(loop, 2); }), ErrorKind::SelfLoop);
    const std::vector<Edge> range{{0, 5}};
    EXPECT_EQ(kind_of([&] { build_graph(range, 3); }), ErrorKind::VertexOutOfRange);
}

TEST(BuildGraph, CompleteGraphDegrees) {
    const Graph k4 = complete_graph(4);
    EXPECT_EQ(k4.size(), 6u);
    for (Vertex v = 0; v < 4; ++v) EXPECT_EQ(k4.degree(v), 3u);
}

TEST(BuildGraph, AdjacencyIsSymmetricAndSorted) {
    const Graph g = generate(spec::GnpMinDegree{40, 0.2, 2}, 5);
    std::size_t half_sum = 0;
    for (Vertex v = 0; v < g.order(); ++v) {
        auto nb = g.neighbors(v);
        EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
        for (Vertex u : nb) EXPECT_TRUE(g.adjacent(u, v));
        half_sum += nb.size();
    }
    EXPECT_EQ(half_sum, 2 * g.size());
}

TEST(CheckConnectedMinDegree, Examples) {
    EXPECT_TRUE(check_connected_min_degree(complete_graph(4), 3));
    const std::vector<Edge> triangles{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
    EXPECT_FALSE(check_connected_min_degree(build_graph(triangles, 6), 2));
    EXPECT_FALSE(check_connected_min_degree(path_graph(3), 2));
}

TEST(Generate, BipartiteIsCompleteBipartite) {
    const Graph g = generate(spec::Bipartite{2, 3}, 0);
    EXPECT_EQ(g.order(), 5u);
    EXPECT_EQ(g.size(), 6u);
    std::vector<std::size_t> degrees;
    for (Vertex v = 0; v < 5; ++v) degrees.push_back(g.degree(v));
    EXPECT_EQ(degrees, (std::vector<std::size_t>{3, 3, 2, 2, 2}));
}

TEST(Generate, RegularThreeOnFourIsK4) {
    for (Seed seed : {1u, 2u, 3u}) EXPECT_EQ(generate(spec::Regular{3, 4}, seed), complete_graph(4));
}

TEST(Generate, InfeasibleSpecs) {
    EXPECT_EQ(kind_of([] { generate(spec::Regular{3, 5}, 0); }), ErrorKind::InfeasibleSpec);
    EXPECT_EQ(kind_of([] { generate(spec::Regular{5, 5}, 0); }), ErrorKind::InfeasibleSpec);
    EXPECT_EQ(kind_of([] { generate(spec::GnpMinDegree{10, 0.0, 1}, 0); }), ErrorKind::InfeasibleSpec);
    EXPECT_EQ(kind_of([] { generate(spec::Bipartite{0, 3}, 0); }), ErrorKind::InfeasibleSpec);
}

TEST(Generate, RetriesExhausted) {
    // Minimum degree 20 in G(30, 0.05) never happens.
    EXPECT_EQ(kind_of([] { generate(spec::GnpMinDegree{30, 0.05, 20}, 0); }),
              ErrorKind::GenerationRetriesExhausted);
}

TEST(Generate, RegularDegreeAuditAndDeterminism) {
    for (auto [d, n] : {std::pair{3u, 20u}, {4u, 31u}, {8u, 200u}, {16u, 2048u}}) {
        const spec::Regular s{d, n};
        const Graph g = generate(s, 99);
        for (Vertex v = 0; v < n; ++v) ASSERT_EQ(g.degree(v), d);
        EXPECT_TRUE(check_connected_min_degree(g, implied_min_degree(s)));
        EXPECT_EQ(g, generate(s, 99));
    }
    EXPECT_FALSE(generate(spec::Regular{4, 40}, 1) == generate(spec::Regular{4, 40}, 2));
}

TEST(Generate, GeneratedFamiliesMeetImpliedMinimumDegree) {
    const std::vector<std::string> specs{"complete:7", "bipartite:3,9", "regular:5,30", "gnp:60,0.3,6",
                                         "gnp:300,0.05,8"};
    for (const auto& text : specs) {
        const GraphSpec s = parse_graph_spec(text);
        const Graph g = generate(s, 7);
        EXPECT_TRUE(check_connected_min_degree(g, implied_min_degree(s))) << text;
        EXPECT_EQ(g, generate(s, 7)) << text;
    }
}

TEST(GraphSpecText, RoundTripAndErrors) {
    for (const std::string text : {"complete:6", "bipartite:3,40", "regular:3,10", "file:/tmp/x.txt"})
        EXPECT_EQ(to_string(parse_graph_spec(text)), text);
    EXPECT_EQ(kind_of([] { parse_graph_spec("complete"); }), ErrorKind::InvalidSpec);
    EXPECT_EQ(kind_of([] { parse_graph_spec("torus:3"); }), ErrorKind::InvalidSpec);
    EXPECT_EQ(kind_of([] { parse_graph_spec("regular:3"); }), ErrorKind::InvalidSpec);
    EXPECT_EQ(kind_of([] { parse_graph_spec("bipartite:3,x"); }), ErrorKind::InvalidSpec);
}

TEST(GraphFile, ParsesCommentsAndRoundTrips) {
    std::istringstream in("# a comment\n4 3\n0 1\n# inline comment line\n1 2\n2 3\n");
    const Graph g = read_graph(in);
    EXPECT_EQ(g, path_graph(4));

    std::ostringstream out;
    write_graph(out, complete_bipartite_graph(2, 3));
    std::istringstream back(out.str());
    EXPECT_EQ(read_graph(back), complete_bipartite_graph(2, 3));
}

TEST(GraphFile, MalformedInput) {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_graph(in);
    };
    EXPECT_EQ(kind_of([&] { parse(""); }), ErrorKind::GraphFormat);
    EXPECT_EQ(kind_of([&] { parse("3 2\n0 1\n"); }), ErrorKind::GraphFormat);
    EXPECT_EQ(kind_of([&] { parse("3 1\n0 x\n"); }), ErrorKind::GraphFormat);
    EXPECT_EQ(kind_of([&] { parse("3 1\n0 1\n1 2\n"); }), ErrorKind::GraphFormat);
    EXPECT_EQ(kind_of([&] { parse("3 2\n0 1\n1 0\n"); }), ErrorKind::DuplicateEdge);
}

TEST(GraphFile, DisconnectedFileIsInfeasible) {
    const auto path = std::filesystem::temp_directory_path() / "ustlab_disconnected.txt";
    {
        std::ofstream f(path);
        f << "4 2\n0 1\n2 3\n";
    }
    EXPECT_EQ(kind_of([&] { generate(spec::FromFile{path.string()}, 0); }), ErrorKind::InfeasibleSpec);
    std::filesystem::remove(path);
}
