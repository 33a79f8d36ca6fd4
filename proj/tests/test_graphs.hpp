#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "netstat/graph.hpp"

namespace netstat::testing {

/// Edge list from 1-based pairs, weight 1.
inline std::vector<EdgeRecord> pairs(std::initializer_list<std::pair<NodeId, NodeId>> list) {
    std::vector<EdgeRecord> out;
    for (auto [u, v] : list) out.push_back({static_cast<NodeId>(u - 1), static_cast<NodeId>(v - 1), 1.0, {}});
    return out;
}

inline Graph undirected(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> list) {
    return Graph(Format::Undirected, WeightType::Unweighted, n, pairs(list));
}

inline Graph complete(std::size_t n) {
    std::vector<EdgeRecord> e;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) e.push_back({u, v, 1.0, {}});
    return Graph(Format::Undirected, WeightType::Unweighted, n, std::move(e));
}

inline Graph cycle(std::size_t n) {
    std::vector<EdgeRecord> e;
    for (NodeId u = 0; u < n; ++u) e.push_back({u, static_cast<NodeId>((u + 1) % n), 1.0, {}});
    return Graph(Format::Undirected, WeightType::Unweighted, n, std::move(e));
}

inline Graph path(std::size_t n) {
    std::vector<EdgeRecord> e;
    for (NodeId u = 0; u + 1 < n; ++u) e.push_back({u, u + 1, 1.0, {}});
    return Graph(Format::Undirected, WeightType::Unweighted, n, std::move(e));
}

/// Star with center 0 and `leaves` leaves.
inline Graph star(std::size_t leaves) {
    std::vector<EdgeRecord> e;
    for (NodeId v = 1; v <= leaves; ++v) e.push_back({0, v, 1.0, {}});
    return Graph(Format::Undirected, WeightType::Unweighted, leaves + 1, std::move(e));
}

/// Erdos-Renyi style simple graph with about `m` distinct edges.
inline std::vector<std::pair<NodeId, NodeId>> random_pairs(std::size_t n, std::size_t m, std::uint64_t seed,
                                                           bool directed = false) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    std::set<std::pair<NodeId, NodeId>> seen;
    std::vector<std::pair<NodeId, NodeId>> out;
    std::size_t attempts = 0;
    while (out.size() < m && attempts < 50 * m + 100) {
        ++attempts;
        NodeId u = pick(rng);
        NodeId v = pick(rng);
        if (u == v) continue;
        auto key = directed ? std::make_pair(u, v) : std::make_pair(std::min(u, v), std::max(u, v));
        if (!seen.insert(key).second) continue;
        out.push_back({u, v});
    }
    return out;
}

inline Graph random_graph(std::size_t n, std::size_t m, std::uint64_t seed,
                          Format format = Format::Undirected) {
    std::vector<EdgeRecord> e;
    for (auto [u, v] : random_pairs(n, m, seed, format == Format::Directed)) e.push_back({u, v, 1.0, {}});
    return Graph(format, WeightType::Unweighted, n, std::move(e));
}

/// Random signed graph with weights +-1.
inline Graph random_signed(std::size_t n, std::size_t m, std::uint64_t seed, double negative_share = 0.3) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::bernoulli_distribution neg(negative_share);
    std::vector<EdgeRecord> e;
    for (auto [u, v] : random_pairs(n, m, seed)) e.push_back({u, v, neg(rng) ? -1.0 : 1.0, {}});
    return Graph(Format::Undirected, WeightType::Signed, n, std::move(e));
}

inline Graph random_bipartite(std::size_t n1, std::size_t n2, std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<NodeId> pl(0, static_cast<NodeId>(n1 - 1));
    std::uniform_int_distribution<NodeId> pr(0, static_cast<NodeId>(n2 - 1));
    std::set<std::pair<NodeId, NodeId>> seen;
    std::vector<EdgeRecord> e;
    std::size_t attempts = 0;
    while (e.size() < m && attempts++ < 50 * m + 100) {
        NodeId u = pl(rng);
        NodeId v = static_cast<NodeId>(n1 + pr(rng));
        if (seen.insert({u, v}).second) e.push_back({u, v, 1.0, {}});
    }
    return Graph(Format::Bipartite, WeightType::Unweighted, n1, n2, std::move(e));
}

}  // namespace netstat::testing
