#include "netstat/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>

#include "netstat/error.hpp"

namespace netstat {

namespace {

constexpr std::array kFormats{Format::Undirected, Format::Directed, Format::Bipartite};

constexpr std::array kWeightTypes{
    WeightType::Unweighted, WeightType::Positive,      WeightType::Posweighted,
    WeightType::Signed,     WeightType::Multisigned,   WeightType::Weighted,
    WeightType::Multiweighted, WeightType::Dynamic,    WeightType::Multiposweighted,
};

struct HalfEdge {
    NodeId u;
    NodeId v;
    double weight;
    double abs_weight;
    std::uint64_t multiplicity;
};

// Bucket by u (stable), sort each bucket by v (stable), merge equal pairs.
void build_csr(std::size_t n, const std::vector<HalfEdge>& halves, std::vector<std::size_t>& offsets,
               std::vector<Neighbor>& out) {
    std::vector<std::size_t> start(n + 1, 0);
    for (const auto& h : halves) ++start[h.u + 1];
    std::partial_sum(start.begin(), start.end(), start.begin());
    std::vector<HalfEdge> sorted(halves.size());
    {
        std::vector<std::size_t> fill(start.begin(), start.end() - 1);
        for (const auto& h : halves) sorted[fill[h.u]++] = h;
    }
    offsets.assign(n + 1, 0);
    out.clear();
    out.reserve(halves.size());
    for (std::size_t u = 0; u < n; ++u) {
        auto first = sorted.begin() + static_cast<std::ptrdiff_t>(start[u]);
        auto last = sorted.begin() + static_cast<std::ptrdiff_t>(start[u + 1]);
        std::stable_sort(first, last, [](const HalfEdge& a, const HalfEdge& b) { return a.v < b.v; });
        for (auto it = first; it != last; ++it) {
            if (!out.empty() && out.size() > offsets[u] && out.back().node == it->v) {
                out.back().weight += it->weight;
                out.back().abs_weight += it->abs_weight;
                out.back().multiplicity += it->multiplicity;
            } else {
                out.push_back({it->v, it->weight, it->abs_weight, it->multiplicity});
            }
        }
        offsets[u + 1] = out.size();
    }
}

std::pair<NodeId, NodeId> pair_key(const Graph& g, const EdgeRecord& e) {
    if (g.format() == Format::Directed) return {e.src, e.dst};
    return {std::min(e.src, e.dst), std::max(e.src, e.dst)};
}

}  // namespace

namespace detail {

struct GraphIndex {
    std::once_flag sym_once;
    std::vector<std::size_t> sym_offsets;
    std::vector<Neighbor> sym;
    std::vector<std::uint64_t> degree;
    std::vector<double> node_weight;
    std::uint64_t volume = 0;

    std::once_flag dir_once;
    std::vector<std::size_t> out_offsets;
    std::vector<Neighbor> out;
    std::vector<std::size_t> in_offsets;
    std::vector<Neighbor> in;
    std::vector<std::uint64_t> out_degree;
    std::vector<std::uint64_t> in_degree;

    std::once_flag simple_once;
    SimpleGraph simple;
};

}  // namespace detail

std::string_view internal_name(Format format) {
    switch (format) {
        case Format::Undirected: return "sym";
        case Format::Directed: return "asym";
        case Format::Bipartite: return "bip";
    }
    return "?";
}

std::string_view internal_name(WeightType weights) {
    switch (weights) {
        case WeightType::Unweighted: return "unweighted";
        case WeightType::Positive: return "positive";
        case WeightType::Posweighted: return "posweighted";
        case WeightType::Signed: return "signed";
        case WeightType::Multisigned: return "multisigned";
        case WeightType::Weighted: return "weighted";
        case WeightType::Multiweighted: return "multiweighted";
        case WeightType::Dynamic: return "dynamic";
        case WeightType::Multiposweighted: return "multiposweighted";
    }
    return "?";
}

std::optional<Format> parse_format(std::string_view name) {
    for (Format f : kFormats)
        if (internal_name(f) == name) return f;
    return std::nullopt;
}

std::optional<WeightType> parse_weight_type(std::string_view name) {
    for (WeightType w : kWeightTypes)
        if (internal_name(w) == name) return w;
    return std::nullopt;
}

std::span<const Format> all_formats() { return kFormats; }
std::span<const WeightType> all_weight_types() { return kWeightTypes; }

bool allows_multiple_edges(WeightType weights) {
    switch (weights) {
        case WeightType::Positive:
        case WeightType::Multisigned:
        case WeightType::Multiweighted:
        case WeightType::Dynamic:
        case WeightType::Multiposweighted:
            return true;
        default:
            return false;
    }
}

bool is_rating(WeightType weights) {
    return weights == WeightType::Weighted || weights == WeightType::Multiweighted;
}

bool allows_negative(WeightType weights) {
    return weights == WeightType::Signed || weights == WeightType::Multisigned || is_rating(weights);
}

bool carries_weight_values(WeightType weights) {
    switch (weights) {
        case WeightType::Unweighted:
        case WeightType::Positive:
        case WeightType::Dynamic:
            return false;
        default:
            return true;
    }
}

bool SimpleGraph::adjacent(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

Graph::Graph(Format format, WeightType weights, std::size_t left_count, std::size_t right_count,
             std::vector<EdgeRecord> edges, TagSet tags)
    : format_(format),
      weights_(weights),
      left_count_(left_count),
      right_count_(format == Format::Bipartite ? right_count : 0),
      edges_(std::move(edges)),
      tags_(std::move(tags)),
      index_(std::make_shared<detail::GraphIndex>()) {
    if (format != Format::Bipartite && right_count != 0)
        throw DomainError("unipartite graph given a right-side node count");
    if (node_count() > std::numeric_limits<NodeId>::max())
        throw DomainError("node count exceeds the supported id range");
    has_timestamps_ = !edges_.empty() && edges_.front().timestamp.has_value();
    validate_records();
    if (is_rating(weights_) && !edges_.empty()) {
        double sum = 0.0;
        for (const auto& e : edges_) sum += e.weight;
        rating_mean_ = sum / static_cast<double>(edges_.size());
    }
}

Graph::Graph(Format format, WeightType weights, std::size_t node_count,
             std::vector<EdgeRecord> edges, TagSet tags)
    : Graph(format, weights, node_count, 0, std::move(edges), std::move(tags)) {}

void Graph::validate_records() const {
    const bool zero_ok = has_tag("#zeroweight");
    const bool loops_ok = has_tag("#loop");
    auto fail = [](std::size_t i, const std::string& msg) {
        std::ostringstream os;
        os << "edge record " << i << ": " << msg;
        throw DomainError(os.str());
    };
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        if (e.timestamp.has_value() != has_timestamps_) fail(i, "timestamps must be given for all records or none");
        if (e.timestamp && !std::isfinite(*e.timestamp)) fail(i, "non-finite timestamp");
        if (e.src >= node_count() || e.dst >= node_count()) fail(i, "node id out of range");
        if (format_ == Format::Bipartite && (e.src >= left_count_ || e.dst < left_count_))
            fail(i, "bipartite edge must connect a left node to a right node");
        if (e.src == e.dst && !loops_ok) fail(i, "loop without #loop tag");
        const double w = e.weight;
        if (!std::isfinite(w)) fail(i, "non-finite weight");
        switch (weights_) {
            case WeightType::Unweighted:
                if (w != 1.0) fail(i, "unweighted edge must have weight 1");
                break;
            case WeightType::Positive:
                if (w < 1.0 || w != std::floor(w)) fail(i, "multiplicity must be a positive integer");
                if (has_timestamps_ && w != 1.0) fail(i, "temporal multigraph records cannot aggregate edges");
                break;
            case WeightType::Posweighted:
            case WeightType::Multiposweighted:
                if (w < 0.0 || (w == 0.0 && !zero_ok)) fail(i, "weight must be strictly positive");
                break;
            case WeightType::Signed:
            case WeightType::Multisigned:
                if (w == 0.0 && !zero_ok) fail(i, "zero weight without #zeroweight");
                break;
            case WeightType::Weighted:
            case WeightType::Multiweighted:
                break;
            case WeightType::Dynamic:
                if (w != 1.0 && w != -1.0) fail(i, "dynamic event must be +1 or -1");
                break;
        }
    }
    if (!allows_multiple_edges(weights_)) {
        std::vector<std::pair<std::pair<NodeId, NodeId>, std::size_t>> keys;
        keys.reserve(edges_.size());
        for (std::size_t i = 0; i < edges_.size(); ++i) keys.push_back({pair_key(*this, edges_[i]), i});
        std::sort(keys.begin(), keys.end());
        for (std::size_t i = 1; i < keys.size(); ++i)
            if (keys[i].first == keys[i - 1].first) fail(keys[i].second, "duplicate node pair");
    }
}

bool Graph::has_loops() const {
    return std::any_of(edges_.begin(), edges_.end(), [](const EdgeRecord& e) { return e.src == e.dst; });
}

std::uint64_t Graph::edge_multiplicity(const EdgeRecord& e) const {
    if (weights_ == WeightType::Unweighted || weights_ == WeightType::Positive)
        return static_cast<std::uint64_t>(e.weight);
    return 1;
}

double Graph::edge_weight(const EdgeRecord& e) const {
    switch (weights_) {
        case WeightType::Unweighted:
        case WeightType::Positive:
        case WeightType::Dynamic:
            return 1.0;
        case WeightType::Weighted:
        case WeightType::Multiweighted:
            return e.weight - rating_mean_;
        default:
            return e.weight;
    }
}

namespace {

void build_symmetric(const Graph& g, detail::GraphIndex& ix) {
    const std::size_t n = g.node_count();
    std::vector<EdgeRecord> replayed;
    std::span<const EdgeRecord> records = g.edges();
    if (g.weights() == WeightType::Dynamic) {
        replayed = replay_events(g);
        records = replayed;
    }
    std::vector<HalfEdge> halves;
    halves.reserve(records.size() * 2);
    std::uint64_t volume = 0;
    for (const auto& e : records) {
        const std::uint64_t k = g.weights() == WeightType::Dynamic ? 1 : g.edge_multiplicity(e);
        const double w = g.weights() == WeightType::Dynamic ? 1.0 : g.edge_weight(e);
        const double kw = static_cast<double>(k) * w;
        const double kabs = static_cast<double>(k) * std::abs(w);
        volume += k;
        halves.push_back({e.src, e.dst, kw, kabs, k});
        if (e.src != e.dst) halves.push_back({e.dst, e.src, kw, kabs, k});
    }
    build_csr(n, halves, ix.sym_offsets, ix.sym);
    ix.volume = volume;
    ix.degree.assign(n, 0);
    ix.node_weight.assign(n, 0.0);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t i = ix.sym_offsets[u]; i < ix.sym_offsets[u + 1]; ++i) {
            const auto& nb = ix.sym[i];
            const std::uint64_t times = nb.node == u ? 2 : 1;
            ix.degree[u] += times * nb.multiplicity;
            ix.node_weight[u] += static_cast<double>(times) * nb.abs_weight;
        }
    }
}

void build_directed(const Graph& g, detail::GraphIndex& ix) {
    const std::size_t n = g.node_count();
    std::vector<EdgeRecord> replayed;
    std::span<const EdgeRecord> records = g.edges();
    if (g.weights() == WeightType::Dynamic) {
        replayed = replay_events(g);
        records = replayed;
    }
    std::vector<HalfEdge> outs;
    std::vector<HalfEdge> ins;
    outs.reserve(records.size());
    ins.reserve(records.size());
    for (const auto& e : records) {
        const std::uint64_t k = g.weights() == WeightType::Dynamic ? 1 : g.edge_multiplicity(e);
        const double w = g.weights() == WeightType::Dynamic ? 1.0 : g.edge_weight(e);
        const double kw = static_cast<double>(k) * w;
        const double kabs = static_cast<double>(k) * std::abs(w);
        outs.push_back({e.src, e.dst, kw, kabs, k});
        ins.push_back({e.dst, e.src, kw, kabs, k});
    }
    build_csr(n, outs, ix.out_offsets, ix.out);
    build_csr(n, ins, ix.in_offsets, ix.in);
    ix.out_degree.assign(n, 0);
    ix.in_degree.assign(n, 0);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t i = ix.out_offsets[u]; i < ix.out_offsets[u + 1]; ++i)
            ix.out_degree[u] += ix.out[i].multiplicity;
        for (std::size_t i = ix.in_offsets[u]; i < ix.in_offsets[u + 1]; ++i)
            ix.in_degree[u] += ix.in[i].multiplicity;
    }
}

}  // namespace

void Graph::check_node(NodeId u) const {
    if (u >= node_count()) throw DomainError("unknown node id " + std::to_string(u));
}

std::uint64_t Graph::volume() const {
    std::call_once(index_->sym_once, [this] { build_symmetric(*this, *index_); });
    return index_->volume;
}

std::uint64_t Graph::degree(NodeId u) const {
    check_node(u);
    return degrees()[u];
}

std::pair<std::uint64_t, std::uint64_t> Graph::in_out_degree(NodeId u) const {
    if (!is_directed()) throw UsageError("outdegree/indegree are defined for directed graphs only");
    check_node(u);
    std::call_once(index_->dir_once, [this] { build_directed(*this, *index_); });
    return {index_->out_degree[u], index_->in_degree[u]};
}

double Graph::node_weight(NodeId u) const {
    check_node(u);
    return node_weights()[u];
}

double Graph::pair_weight(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    auto nb = is_directed() ? out_neighbors(u) : neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v,
                               [](const Neighbor& a, NodeId x) { return a.node < x; });
    return it != nb.end() && it->node == v ? it->weight : 0.0;
}

std::span<const std::uint64_t> Graph::degrees() const {
    std::call_once(index_->sym_once, [this] { build_symmetric(*this, *index_); });
    return index_->degree;
}

std::span<const double> Graph::node_weights() const {
    std::call_once(index_->sym_once, [this] { build_symmetric(*this, *index_); });
    return index_->node_weight;
}

std::span<const Neighbor> Graph::neighbors(NodeId u) const {
    check_node(u);
    std::call_once(index_->sym_once, [this] { build_symmetric(*this, *index_); });
    return {index_->sym.data() + index_->sym_offsets[u], index_->sym_offsets[u + 1] - index_->sym_offsets[u]};
}

std::span<const Neighbor> Graph::out_neighbors(NodeId u) const {
    if (!is_directed()) return neighbors(u);
    check_node(u);
    std::call_once(index_->dir_once, [this] { build_directed(*this, *index_); });
    return {index_->out.data() + index_->out_offsets[u], index_->out_offsets[u + 1] - index_->out_offsets[u]};
}

std::span<const Neighbor> Graph::in_neighbors(NodeId u) const {
    if (!is_directed()) return neighbors(u);
    check_node(u);
    std::call_once(index_->dir_once, [this] { build_directed(*this, *index_); });
    return {index_->in.data() + index_->in_offsets[u], index_->in_offsets[u + 1] - index_->in_offsets[u]};
}

const SimpleGraph& Graph::simple() const {
    std::call_once(index_->simple_once, [this] {
        const std::size_t n = node_count();
        auto& s = index_->simple;
        s.offsets.assign(n + 1, 0);
        s.targets.clear();
        for (NodeId u = 0; u < n; ++u) {
            for (const auto& nb : neighbors(u))
                if (nb.node != u) s.targets.push_back(nb.node);
            s.offsets[u + 1] = s.targets.size();
        }
    });
    return index_->simple;
}

std::uint64_t Graph::external_id(NodeId u) const {
    check_node(u);
    return u < left_count_ ? std::uint64_t{u} + 1 : std::uint64_t{u} - left_count_ + 1;
}

std::vector<EdgeRecord> replay_events(const Graph& g) {
    if (g.weights() != WeightType::Dynamic) throw UsageError("event replay requires a dynamic network");
    auto records = g.edges();
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (g.has_timestamps()) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return *records[a].timestamp < *records[b].timestamp;
        });
    }
    // last event per pair decides presence
    std::vector<std::pair<std::pair<NodeId, NodeId>, std::size_t>> last;
    last.reserve(records.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank)
        last.push_back({pair_key(g, records[order[rank]]), rank});
    std::stable_sort(last.begin(), last.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::size_t> present;  // ranks of final add events
    for (std::size_t i = 0; i < last.size(); ++i) {
        if (i + 1 < last.size() && last[i + 1].first == last[i].first) continue;
        const auto& e = records[order[last[i].second]];
        if (e.weight > 0) present.push_back(last[i].second);
    }
    std::sort(present.begin(), present.end());
    std::vector<EdgeRecord> out;
    out.reserve(present.size());
    for (std::size_t rank : present) {
        EdgeRecord e = records[order[rank]];
        e.weight = 1.0;
        out.push_back(e);
    }
    return out;
}

}  // namespace netstat
