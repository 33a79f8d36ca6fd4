#include "netstat/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "netstat/error.hpp"

namespace netstat {

namespace {

std::pair<NodeId, NodeId> undirected_key(const Graph& g, const EdgeRecord& e) {
    if (g.is_directed()) return {e.src, e.dst};
    return {std::min(e.src, e.dst), std::max(e.src, e.dst)};
}

Graph rebuild(const Graph& g, WeightType weights, std::vector<EdgeRecord> edges, TagSet tags) {
    return Graph(g.format(), weights, g.left_count(), g.right_count(), std::move(edges), std::move(tags));
}

}  // namespace

Graph strip_weights(const Graph& g) {
    if (g.weights() == WeightType::Dynamic) return latest_state(g);
    if (g.weights() == WeightType::Unweighted || g.weights() == WeightType::Positive) return g;
    const WeightType target = allows_multiple_edges(g.weights()) ? WeightType::Positive : WeightType::Unweighted;
    std::vector<EdgeRecord> edges(g.edges().begin(), g.edges().end());
    for (auto& e : edges) e.weight = 1.0;
    TagSet tags = g.tags();
    tags.erase("#zeroweight");
    return rebuild(g, target, std::move(edges), std::move(tags));
}

Graph dedupe(const Graph& g) {
    if (g.weights() == WeightType::Dynamic) return latest_state(g);
    if (!allows_multiple_edges(g.weights())) return g;
    std::vector<std::pair<std::pair<NodeId, NodeId>, std::size_t>> keys;
    keys.reserve(g.edges().size());
    for (std::size_t i = 0; i < g.edges().size(); ++i) keys.push_back({undirected_key(g, g.edges()[i]), i});
    std::stable_sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::size_t> first;
    for (std::size_t i = 0; i < keys.size(); ++i)
        if (i == 0 || keys[i].first != keys[i - 1].first) first.push_back(keys[i].second);
    std::sort(first.begin(), first.end());
    std::vector<EdgeRecord> edges;
    edges.reserve(first.size());
    for (std::size_t i : first) {
        EdgeRecord e = g.edges()[i];
        e.weight = 1.0;
        edges.push_back(e);
    }
    TagSet tags = g.tags();
    tags.erase("#zeroweight");
    return rebuild(g, WeightType::Unweighted, std::move(edges), std::move(tags));
}

Graph absolute(const Graph& g) {
    WeightType target;
    switch (g.weights()) {
        case WeightType::Signed:
        case WeightType::Weighted:
            target = WeightType::Posweighted;
            break;
        case WeightType::Multisigned:
        case WeightType::Multiweighted:
            target = WeightType::Multiposweighted;
            break;
        default:
            throw UsageError("absolute value transform requires a signed or rating network, got " +
                             std::string(internal_name(g.weights())));
    }
    std::vector<EdgeRecord> edges(g.edges().begin(), g.edges().end());
    bool zero = false;
    for (auto& e : edges) {
        e.weight = std::abs(g.edge_weight(e));
        zero = zero || e.weight == 0.0;
    }
    TagSet tags = g.tags();
    if (zero) tags.insert("#zeroweight");
    return rebuild(g, target, std::move(edges), std::move(tags));
}

Graph negate(const Graph& g) {
    if (g.weights() == WeightType::Dynamic) return negate(latest_state(g));
    std::vector<EdgeRecord> edges;
    edges.reserve(g.edges().size());
    WeightType target = g.weights();
    switch (g.weights()) {
        case WeightType::Unweighted:
            target = WeightType::Signed;
            break;
        case WeightType::Positive:
        case WeightType::Multiposweighted:
            target = WeightType::Multisigned;
            break;
        case WeightType::Posweighted:
            target = WeightType::Signed;
            break;
        default:
            break;
    }
    for (const auto& e : g.edges()) {
        EdgeRecord r = e;
        if (g.weights() == WeightType::Positive) {
            // one record per aggregated edge
            r.weight = -1.0;
            for (std::uint64_t k = 0; k < g.edge_multiplicity(e); ++k) edges.push_back(r);
            continue;
        }
        r.weight = g.weights() == WeightType::Unweighted ? -1.0 : -e.weight;
        edges.push_back(r);
    }
    return rebuild(g, target, std::move(edges), g.tags());
}

Graph latest_state(const Graph& g) {
    if (g.weights() != WeightType::Dynamic)
        throw UsageError("latest_state requires a dynamic network, got " + std::string(internal_name(g.weights())));
    return rebuild(g, WeightType::Unweighted, replay_events(g), g.tags());
}

std::size_t Components::largest() const {
    std::size_t best = 0;
    for (std::size_t c = 1; c < sizes.size(); ++c)
        if (sizes[c] > sizes[best]) best = c;
    return best;
}

Components connected_components(const Graph& g) {
    const auto& s = g.simple();
    const std::size_t n = g.node_count();
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    Components out;
    out.label.assign(n, kUnset);
    std::vector<NodeId> queue;
    queue.reserve(n);
    for (NodeId root = 0; root < n; ++root) {
        if (out.label[root] != kUnset) continue;
        const std::size_t c = out.sizes.size();
        out.sizes.push_back(0);
        queue.clear();
        queue.push_back(root);
        out.label[root] = c;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (NodeId v : s.neighbors(queue[head])) {
                if (out.label[v] == kUnset) {
                    out.label[v] = c;
                    queue.push_back(v);
                }
            }
        }
        out.sizes[c] = queue.size();
    }
    return out;
}

std::size_t largest_strong_component_size(const Graph& g) {
    if (!g.is_directed()) throw UsageError("strongly connected components require a directed graph");
    const std::size_t n = g.node_count();
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, kUnset);
    std::vector<std::size_t> low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<NodeId> stack;
    std::vector<std::pair<NodeId, std::size_t>> call;  // node, next neighbor position
    std::size_t counter = 0;
    std::size_t best = 0;
    for (NodeId root = 0; root < n; ++root) {
        if (index[root] != kUnset) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [u, pos] = call.back();
            auto out = g.out_neighbors(u);
            if (pos < out.size()) {
                const NodeId v = out[pos++].node;
                if (index[v] == kUnset) {
                    index[v] = low[v] = counter++;
                    stack.push_back(v);
                    on_stack[v] = true;
                    call.push_back({v, 0});
                } else if (on_stack[v]) {
                    low[u] = std::min(low[u], index[v]);
                }
                continue;
            }
            const NodeId done = u;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
            if (low[done] == index[done]) {
                std::size_t size = 0;
                NodeId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    ++size;
                } while (w != done);
                best = std::max(best, size);
            }
        }
    }
    return best;
}

Subgraph induced_subgraph(const Graph& g, const std::vector<bool>& keep) {
    const std::size_t n = g.node_count();
    if (keep.size() != n) throw DomainError("node mask size does not match the graph");
    std::vector<NodeId> index(n, kNoNode);
    std::vector<NodeId> original;
    std::size_t left = 0;
    for (NodeId u = 0; u < n; ++u) {
        if (!keep[u]) continue;
        index[u] = static_cast<NodeId>(original.size());
        original.push_back(u);
        if (g.is_left(u)) ++left;
    }
    std::vector<EdgeRecord> edges;
    for (const auto& e : g.edges()) {
        if (index[e.src] == kNoNode || index[e.dst] == kNoNode) continue;
        EdgeRecord r = e;
        r.src = index[e.src];
        r.dst = index[e.dst];
        edges.push_back(r);
    }
    const std::size_t left_count = g.is_bipartite() ? left : original.size();
    const std::size_t right_count = g.is_bipartite() ? original.size() - left : 0;
    return Subgraph{Graph(g.format(), g.weights(), left_count, right_count, std::move(edges), g.tags()),
                    std::move(original), std::move(index)};
}

Subgraph largest_connected_component(const Graph& g) {
    if (g.node_count() == 0) throw DomainError("largest connected component of an empty graph");
    const auto comps = connected_components(g);
    const std::size_t best = comps.largest();
    std::vector<bool> keep(g.node_count());
    for (std::size_t u = 0; u < keep.size(); ++u) keep[u] = comps.label[u] == best;
    return induced_subgraph(g, keep);
}

}  // namespace netstat
