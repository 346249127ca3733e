#pragma once

// Graph families for experiments and their deterministic seeded generators.
//
// Textual form (used by the CLI's --gen flag):
//   complete:N  bipartite:A,B  regular:D,N  gnp:N,P,D  file:PATH

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "ustlab/error.hpp"
#include "ustlab/graph.hpp"
#include "ustlab/graph_io.hpp"
#include "ustlab/rng.hpp"

namespace ustlab {

namespace spec {
struct Complete {
    std::size_t n = 0;
};
struct Bipartite {
    std::size_t a = 0;
    std::size_t b = 0;
};
struct Regular {
    std::size_t d = 0;
    std::size_t n = 0;
};
struct GnpMinDegree {
    std::size_t n = 0;
    double p = 0.0;
    std::size_t d = 0;
};
struct FromFile {
    std::string path;
};
} // namespace spec

using GraphSpec = std::variant<spec::Complete, spec::Bipartite, spec::Regular, spec::GnpMinDegree, spec::FromFile>;

inline constexpr std::size_t kMaxGenerationRetries = 1000;
inline constexpr std::size_t kSwitchesPerEdge = 100;

namespace detail {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

inline std::size_t parse_count(std::string_view text, std::string_view what) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw Error(ErrorKind::InvalidSpec, "bad " + std::string(what) + " '" + std::string(text) + "'");
    return value;
}

inline double parse_probability(std::string_view text) {
    try {
        std::size_t used = 0;
        const std::string owned(text);
        double p = std::stod(owned, &used);
        if (used != owned.size()) throw std::invalid_argument("trailing");
        return p;
    } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidSpec, "bad probability '" + std::string(text) + "'");
    }
}

} // namespace detail

/// Throws InfeasibleSpec when the parameters cannot describe a connected graph.
inline void validate(const GraphSpec& s) {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::InfeasibleSpec, msg); };
    std::visit(detail::overloaded{
                   [&](const spec::Complete& c) {
                       if (c.n < 1) fail("complete graph needs n >= 1");
                   },
                   [&](const spec::Bipartite& b) {
                       if (b.a < 1 || b.b < 1) fail("bipartite graph needs both parts non-empty");
                   },
                   [&](const spec::Regular& r) {
                       if (r.d < 1 || r.d >= r.n) fail("regular graph needs 1 <= d < n");
                       if ((r.d * r.n) % 2 != 0) fail("regular graph needs d*n even");
                       if (r.d == 1 && r.n != 2) fail("1-regular graph on more than 2 vertices is disconnected");
                   },
                   [&](const spec::GnpMinDegree& g) {
                       if (g.n < 1) fail("gnp needs n >= 1");
                       if (!(g.p > 0.0 && g.p <= 1.0)) fail("gnp needs 0 < p <= 1");
                       if (g.d >= g.n && g.n > 1) fail("gnp needs d < n");
                   },
                   [&](const spec::FromFile& f) {
                       if (f.path.empty()) fail("empty graph file path");
                   },
               },
               s);
}

inline GraphSpec parse_graph_spec(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw Error(ErrorKind::InvalidSpec, "graph spec '" + std::string(text) + "' lacks 'family:params'");
    const auto family = text.substr(0, colon);
    const auto params = text.substr(colon + 1);
    if (family == "file") return spec::FromFile{std::string(params)};
    const auto args = detail::split(params, ',');
    auto expect = [&](std::size_t count) {
        if (args.size() != count)
            throw Error(ErrorKind::InvalidSpec, "family '" + std::string(family) + "' takes " +
                                                    std::to_string(count) + " parameter(s)");
    };
    if (family == "complete") {
        expect(1);
        return spec::Complete{detail::parse_count(args[0], "n")};
    }
    if (family == "bipartite") {
        expect(2);
        return spec::Bipartite{detail::parse_count(args[0], "a"), detail::parse_count(args[1], "b")};
    }
    if (family == "regular") {
        expect(2);
        return spec::Regular{detail::parse_count(args[0], "d"), detail::parse_count(args[1], "n")};
    }
    if (family == "gnp" || family == "gnp-min-degree") {
        expect(3);
        return spec::GnpMinDegree{detail::parse_count(args[0], "n"), detail::parse_probability(args[1]),
                                  detail::parse_count(args[2], "d")};
    }
    throw Error(ErrorKind::InvalidSpec, "unknown graph family '" + std::string(family) + "'");
}

inline std::string to_string(const GraphSpec& s) {
    return std::visit(detail::overloaded{
                          [](const spec::Complete& c) { return "complete:" + std::to_string(c.n); },
                          [](const spec::Bipartite& b) {
                              return "bipartite:" + std::to_string(b.a) + "," + std::to_string(b.b);
                          },
                          [](const spec::Regular& r) {
                              return "regular:" + std::to_string(r.d) + "," + std::to_string(r.n);
                          },
                          [](const spec::GnpMinDegree& g) {
                              std::ostringstream p;
                              p << g.p;
                              return "gnp:" + std::to_string(g.n) + "," + p.str() + "," + std::to_string(g.d);
                          },
                          [](const spec::FromFile& f) { return "file:" + f.path; },
                      },
                      s);
}

/// The minimum degree every graph of this family is guaranteed to have.
inline std::size_t implied_min_degree(const GraphSpec& s) {
    return std::visit(detail::overloaded{
                          [](const spec::Complete& c) { return c.n - 1; },
                          [](const spec::Bipartite& b) { return std::min(b.a, b.b); },
                          [](const spec::Regular& r) { return r.d; },
                          [](const spec::GnpMinDegree& g) { return g.d; },
                          [](const spec::FromFile&) { return std::size_t{0}; },
                      },
                      s);
}

namespace detail {

inline std::uint64_t edge_key(Vertex a, Vertex b) noexcept {
    const Edge e(a, b);
    return (static_cast<std::uint64_t>(e.u) << 32) | e.v;
}

/// Pairs stubs one pair at a time, rejecting pairs that would form a loop or
/// a multi-edge, and restarts from scratch if the remaining stubs admit no
/// valid pair. Returns false on a dead end.
inline bool pair_stubs(std::size_t d, std::size_t n, Rng& rng, std::vector<Edge>& edges,
                       std::unordered_set<std::uint64_t>& present) {
    std::vector<Vertex> stubs;
    stubs.reserve(d * n);
    for (Vertex v = 0; v < n; ++v)
        for (std::size_t k = 0; k < d; ++k) stubs.push_back(v);
    edges.clear();
    present.clear();
    std::size_t failures = 0;
    while (!stubs.empty()) {
        const std::size_t i = rng.below(stubs.size());
        std::size_t j = rng.below(stubs.size() - 1);
        if (j >= i) ++j;
        const Vertex a = stubs[i];
        const Vertex b = stubs[j];
        if (a != b && !present.contains(edge_key(a, b))) {
            edges.emplace_back(a, b);
            present.insert(edge_key(a, b));
            for (std::size_t idx : {std::max(i, j), std::min(i, j)}) {
                stubs[idx] = stubs.back();
                stubs.pop_back();
            }
            failures = 0;
            continue;
        }
        if (++failures < 64) continue;
        std::vector<Vertex> distinct(stubs);
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        bool any = false;
        for (std::size_t x = 0; x < distinct.size() && !any; ++x)
            for (std::size_t y = x + 1; y < distinct.size() && !any; ++y)
                any = !present.contains(edge_key(distinct[x], distinct[y]));
        if (!any) return false;
        failures = 0;
    }
    return true;
}

inline void switch_edges(std::vector<Edge>& edges, std::unordered_set<std::uint64_t>& present,
                         std::size_t attempts, Rng& rng) {
    if (edges.size() < 2) return;
    for (std::size_t s = 0; s < attempts; ++s) {
        const std::size_t i = rng.below(edges.size());
        const std::size_t j = rng.below(edges.size());
        if (i == j) continue;
        Vertex a = edges[i].u, b = edges[i].v;
        Vertex c = edges[j].u, d = edges[j].v;
        if (rng.coin()) std::swap(c, d);
        // {a,b},{c,d} -> {a,c},{b,d}
        if (a == c || b == d || a == d || b == c) continue;
        if (present.contains(edge_key(a, c)) || present.contains(edge_key(b, d))) continue;
        present.erase(edge_key(a, b));
        present.erase(edge_key(c, d));
        present.insert(edge_key(a, c));
        present.insert(edge_key(b, d));
        edges[i] = Edge(a, c);
        edges[j] = Edge(b, d);
    }
}

inline Graph generate_regular(const spec::Regular& r, Rng& rng) {
    std::vector<Edge> edges;
    std::unordered_set<std::uint64_t> present;
    for (std::size_t attempt = 0; attempt < kMaxGenerationRetries; ++attempt) {
        if (!pair_stubs(r.d, r.n, rng, edges, present)) continue;
        switch_edges(edges, present, kSwitchesPerEdge * edges.size(), rng);
        Graph g = Graph::from_edges(r.n, edges);
        if (is_connected(g)) return g;
    }
    throw Error(ErrorKind::GenerationRetriesExhausted,
                "no connected " + std::to_string(r.d) + "-regular graph after " +
                    std::to_string(kMaxGenerationRetries) + " attempts");
}

inline Graph generate_gnp(const spec::GnpMinDegree& s, Rng& rng) {
    std::vector<Edge> edges;
    std::vector<std::size_t> degree(s.n);
    for (std::size_t attempt = 0; attempt < kMaxGenerationRetries; ++attempt) {
        edges.clear();
        std::fill(degree.begin(), degree.end(), 0);
        for (Vertex u = 0; u < s.n; ++u)
            for (Vertex v = u + 1; v < s.n; ++v)
                if (rng.bernoulli(s.p)) {
                    edges.emplace_back(u, v);
                    ++degree[u];
                    ++degree[v];
                }
        if (*std::min_element(degree.begin(), degree.end()) < s.d) continue;
        Graph g = Graph::from_edges(s.n, edges);
        if (is_connected(g)) return g;
    }
    throw Error(ErrorKind::GenerationRetriesExhausted,
                "no connected G(n,p) sample with minimum degree " + std::to_string(s.d) + " after " +
                    std::to_string(kMaxGenerationRetries) + " attempts");
}

} // namespace detail

/// Deterministic in (spec, seed). The result is always connected and meets
/// implied_min_degree(spec).
inline Graph generate(const GraphSpec& s, Seed seed) {
    validate(s);
    Rng rng(derive_seed(seed, {0x67656eULL}));
    return std::visit(detail::overloaded{
                          [](const spec::Complete& c) { return complete_graph(c.n); },
                          [](const spec::Bipartite& b) { return complete_bipartite_graph(b.a, b.b); },
                          [&](const spec::Regular& r) { return detail::generate_regular(r, rng); },
                          [&](const spec::GnpMinDegree& g) { return detail::generate_gnp(g, rng); },
                          [](const spec::FromFile& f) {
                              Graph g = read_graph_file(f.path);
                              if (!is_connected(g))
                                  throw Error(ErrorKind::InfeasibleSpec, "graph in '" + f.path + "' is disconnected");
                              return g;
                          },
                      },
                      s);
}

} // namespace ustlab
