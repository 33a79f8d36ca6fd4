#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "netstat/graph.hpp"

namespace netstat {

/// G-bar: weights dropped, edge multiset kept. Result is `unweighted` or,
/// when the source type allows multiple edges, `positive`.
Graph strip_weights(const Graph& g);

/// G-double-bar: one unweighted edge per node pair. Types that already
/// forbid multiple edges are returned unchanged.
Graph dedupe(const Graph& g);

/// |G| for signed and rating networks; ratings are centered first.
Graph absolute(const Graph& g);

/// -G. Unweighted and positively weighted inputs become signed.
Graph negate(const Graph& g);

/// Unweighted graph of the edges whose event sequence ends in an addition.
Graph latest_state(const Graph& g);

/// Weakly connected components of the undirected view; label per node,
/// labels numbered by smallest member id.
struct Components {
    std::vector<std::size_t> label;
    std::vector<std::size_t> sizes;
    std::size_t largest() const;  ///< label of the largest, ties to the lowest label
};
Components connected_components(const Graph& g);

/// Largest strongly connected component size of a directed graph.
std::size_t largest_strong_component_size(const Graph& g);

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct Subgraph {
    Graph graph;
    std::vector<NodeId> original;  ///< new id -> old id
    std::vector<NodeId> index;     ///< old id -> new id, kNoNode when dropped
};

/// Induced subgraph on the nodes with keep[u] set; node order is preserved
/// and bipartite sides stay separate.
Subgraph induced_subgraph(const Graph& g, const std::vector<bool>& keep);

/// Induced subgraph on the largest weakly connected component.
Subgraph largest_connected_component(const Graph& g);

}  // namespace netstat
