#pragma once

// Graph text format:
//   line 1:      n m
//   next m lines: u v      (0-indexed, whitespace separated)
// Lines whose first non-blank character is '#' and blank lines are ignored.

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ustlab/error.hpp"
#include "ustlab/graph.hpp"

namespace ustlab {

namespace detail {

inline bool next_data_line(std::istream& in, std::string& line, std::size_t& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        return true;
    }
    return false;
}

inline std::pair<std::uint64_t, std::uint64_t> parse_pair(const std::string& line, std::size_t lineno) {
    std::istringstream ss(line);
    long long a = -1;
    long long b = -1;
    std::string rest;
    if (!(ss >> a >> b) || (ss >> rest) || a < 0 || b < 0)
        throw Error(ErrorKind::GraphFormat, "line " + std::to_string(lineno) +
                                                ": expected two non-negative integers, got '" + line + "'");
    return {static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)};
}

} // namespace detail

inline Graph read_graph(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!detail::next_data_line(in, line, lineno)) throw Error(ErrorKind::GraphFormat, "missing 'n m' header");
    const auto [n, m] = detail::parse_pair(line, lineno);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    pairs.reserve(m);
    while (pairs.size() < m) {
        if (!detail::next_data_line(in, line, lineno))
            throw Error(ErrorKind::GraphFormat, "expected " + std::to_string(m) + " edges, found " +
                                                    std::to_string(pairs.size()));
        pairs.push_back(detail::parse_pair(line, lineno));
    }
    if (detail::next_data_line(in, line, lineno))
        throw Error(ErrorKind::GraphFormat, "line " + std::to_string(lineno) + ": trailing data after " +
                                                std::to_string(m) + " edges");
    return Graph::from_pairs(n, pairs);
}

inline Graph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::GraphFormat, "cannot open graph file '" + path + "'");
    return read_graph(in);
}

inline void write_graph(std::ostream& out, const Graph& g) {
    out << g.order() << ' ' << g.size() << '\n';
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

} // namespace ustlab
