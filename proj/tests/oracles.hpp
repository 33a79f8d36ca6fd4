#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>

#include "netstat/graph.hpp"

namespace netstat::testing {

/// 0/1 adjacency of the simple loopless view.
inline Eigen::MatrixXi adjacency01(const Graph& g) {
    const auto& s = g.simple();
    const auto n = static_cast<Eigen::Index>(s.node_count());
    Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n, n);
    for (NodeId u = 0; u < s.node_count(); ++u)
        for (NodeId v : s.neighbors(u)) a(u, v) = 1;
    return a;
}

inline std::uint64_t brute_triangles(const Eigen::MatrixXi& a) {
    std::uint64_t t = 0;
    for (Eigen::Index u = 0; u < a.rows(); ++u)
        for (Eigen::Index v = u + 1; v < a.rows(); ++v)
            for (Eigen::Index w = v + 1; w < a.rows(); ++w) t += a(u, v) && a(v, w) && a(u, w);
    return t;
}

/// Each 4-cycle has two diagonals; each diagonal pair sees C(common, 2) cycles.
inline std::uint64_t brute_squares(const Eigen::MatrixXi& a) {
    std::uint64_t q2 = 0;
    for (Eigen::Index u = 0; u < a.rows(); ++u)
        for (Eigen::Index w = u + 1; w < a.rows(); ++w) {
            std::uint64_t c = 0;
            for (Eigen::Index v = 0; v < a.rows(); ++v) c += a(u, v) && a(v, w);
            q2 += c * (c - (c > 0)) / 2;
        }
    return q2 / 2;
}

inline constexpr int kInf = std::numeric_limits<int>::max() / 4;

inline Eigen::MatrixXi floyd_warshall(const Eigen::MatrixXi& a) {
    const auto n = a.rows();
    Eigen::MatrixXi d = Eigen::MatrixXi::Constant(n, n, kInf);
    for (Eigen::Index u = 0; u < n; ++u) {
        d(u, u) = 0;
        for (Eigen::Index v = 0; v < n; ++v)
            if (a(u, v)) d(u, v) = 1;
    }
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
    return d;
}

/// Minimum number of monochromatic edges over all 2-colorings.
inline std::uint64_t brute_frustration(const Graph& g) {
    const auto a = adjacency01(g);
    const auto n = static_cast<std::size_t>(a.rows());
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::uint64_t c = 0;
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = u + 1; v < n; ++v)
                if (a(u, v) && ((mask >> u) & 1) == ((mask >> v) & 1)) ++c;
        best = std::min(best, c);
    }
    return best;
}

/// Random graph of the given type with valid weights and optional timestamps.
inline Graph random_typed(Format format, WeightType type, std::uint64_t seed, bool timestamps, TagSet& tags) {
    std::mt19937_64 rng(seed);
    const std::size_t n1 = 5 + rng() % 30;
    const std::size_t n2 = format == Format::Bipartite ? 3 + rng() % 20 : 0;
    const std::size_t m = rng() % 80;
    const bool multi = allows_multiple_edges(type);
    const bool loops = format != Format::Bipartite && rng() % 2 == 0;
    tags.clear();
    if (loops) tags.insert("#loop");
    std::set<std::pair<NodeId, NodeId>> seen;
    std::vector<EdgeRecord> edges;
    for (std::size_t i = 0; i < m; ++i) {
        NodeId u = static_cast<NodeId>(rng() % n1);
        NodeId v = format == Format::Bipartite ? static_cast<NodeId>(n1 + rng() % n2) : static_cast<NodeId>(rng() % n1);
        if (u == v && !loops) continue;
        auto key = format == Format::Undirected ? std::make_pair(std::min(u, v), std::max(u, v)) : std::make_pair(u, v);
        if (!multi && !seen.insert(key).second) continue;
        double w = 1.0;
        switch (type) {
            case WeightType::Positive:
                w = timestamps ? 1.0 : static_cast<double>(1 + rng() % 4);
                break;
            case WeightType::Posweighted:
            case WeightType::Multiposweighted:
                w = 0.125 * static_cast<double>(1 + rng() % 100);
                break;
            case WeightType::Signed:
            case WeightType::Multisigned:
                w = rng() % 2 ? 1.0 : -0.3;
                break;
            case WeightType::Weighted:
            case WeightType::Multiweighted:
                w = static_cast<double>(rng() % 1000) / 7.0 - 20.0;
                break;
            case WeightType::Dynamic:
                w = rng() % 3 ? 1.0 : -1.0;
                break;
            default:
                break;
        }
        std::optional<double> ts;
        if (timestamps) ts = 1.0e9 + static_cast<double>(rng() % 100000) + (rng() % 2 ? 0.5 : 0.0);
        edges.push_back({u, v, w, ts});
    }
    return Graph(format, type, n1, n2, std::move(edges), tags);
}

/// Same records with node counts shrunk to the largest ids in use.
inline Graph tighten(const Graph& g) {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    for (const auto& e : g.edges()) {
        if (g.is_bipartite()) {
            n1 = std::max<std::size_t>(n1, e.src + 1);
            n2 = std::max<std::size_t>(n2, e.dst - g.left_count() + 1);
        } else {
            n1 = std::max<std::size_t>(n1, std::max(e.src, e.dst) + 1);
        }
    }
    std::vector<EdgeRecord> edges(g.edges().begin(), g.edges().end());
    if (g.is_bipartite())
        for (auto& e : edges) e.dst = static_cast<NodeId>(e.dst - g.left_count() + n1);
    return Graph(g.format(), g.weights(), n1, n2, std::move(edges), g.tags());
}

}  // namespace netstat::testing
