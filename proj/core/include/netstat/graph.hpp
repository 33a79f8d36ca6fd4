#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace netstat {

/// Network format. Internal names: sym, asym, bip.
enum class Format { Undirected, Directed, Bipartite };

/// Edge weight and multiplicity type. Internal names follow the dataset
/// convention, so `Positive` is the multigraph type ("positive") and
/// `Posweighted` carries strictly positive weights.
enum class WeightType {
    Unweighted,
    Positive,
    Posweighted,
    Signed,
    Multisigned,
    Weighted,
    Multiweighted,
    Dynamic,
    Multiposweighted,
};

std::string_view internal_name(Format format);
std::string_view internal_name(WeightType weights);
std::optional<Format> parse_format(std::string_view name);
std::optional<WeightType> parse_weight_type(std::string_view name);

std::span<const Format> all_formats();
std::span<const WeightType> all_weight_types();

/// Types allowing more than one edge per node pair.
bool allows_multiple_edges(WeightType weights);
/// Interval-scale weights (`weighted`, `multiweighted`), centered by the mean rating.
bool is_rating(WeightType weights);
/// Types whose effective edge weight can be negative.
bool allows_negative(WeightType weights);
/// Types whose weight column carries a real value instead of a count or event marker.
bool carries_weight_values(WeightType weights);

using NodeId = std::uint32_t;
using TagSet = std::set<std::string, std::less<>>;

/// One line of the edge table. Node ids are 0-based and global: in a
/// bipartite graph right-side nodes occupy [left_count, left_count + right_count).
struct EdgeRecord {
    NodeId src = 0;
    NodeId dst = 0;
    /// Multiplicity (unweighted, positive), event marker +-1 (dynamic), weight or rating otherwise.
    double weight = 1.0;
    std::optional<double> timestamp;

    bool operator==(const EdgeRecord&) const = default;
};

/// Aggregated adjacency entry for one node pair.
struct Neighbor {
    NodeId node = 0;
    double weight = 0.0;      ///< w(u,v)
    double abs_weight = 0.0;  ///< sum of |w(e)| over the pair's edges
    std::uint64_t multiplicity = 0;
};

/// Simple loopless undirected view (edge directions and multiplicities dropped).
struct SimpleGraph {
    std::vector<std::size_t> offsets;
    std::vector<NodeId> targets;  // sorted per node

    std::size_t node_count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
    std::size_t edge_count() const { return targets.size() / 2; }
    std::size_t degree(NodeId u) const { return offsets[u + 1] - offsets[u]; }
    std::span<const NodeId> neighbors(NodeId u) const {
        return {targets.data() + offsets[u], offsets[u + 1] - offsets[u]};
    }
    bool adjacent(NodeId u, NodeId v) const;
};

namespace detail {
struct GraphIndex;
}

/// Immutable network. Aggregate views (degrees, adjacency, volume) of a
/// dynamic network describe its state at the latest known time point; the
/// raw event log stays available through edges().
class Graph {
public:
    /// Throws DomainError when records violate the format/weight-type
    /// invariants (node range, bipartite sides, loops without `#loop`,
    /// duplicate pairs for single-edge types, weight ranges).
    Graph(Format format, WeightType weights, std::size_t left_count, std::size_t right_count,
          std::vector<EdgeRecord> edges, TagSet tags = {});

    /// Unipartite shorthand.
    Graph(Format format, WeightType weights, std::size_t node_count,
          std::vector<EdgeRecord> edges, TagSet tags = {});

    Format format() const { return format_; }
    WeightType weights() const { return weights_; }
    bool is_directed() const { return format_ == Format::Directed; }
    bool is_bipartite() const { return format_ == Format::Bipartite; }

    std::size_t node_count() const { return left_count_ + right_count_; }
    std::size_t left_count() const { return left_count_; }
    std::size_t right_count() const { return right_count_; }
    bool is_left(NodeId u) const { return u < left_count_; }

    std::span<const EdgeRecord> edges() const { return edges_; }
    const TagSet& tags() const { return tags_; }
    bool has_tag(std::string_view tag) const { return tags_.find(tag) != tags_.end(); }
    bool has_timestamps() const { return has_timestamps_; }
    bool has_loops() const;

    /// Mean rating mu over all edges; zero for non-rating types.
    double rating_mean() const { return rating_mean_; }
    /// Number of edges represented by one record.
    std::uint64_t edge_multiplicity(const EdgeRecord& e) const;
    /// Effective weight w(e) of each edge of the record (r - mu for ratings).
    double edge_weight(const EdgeRecord& e) const;

    /// m, counting multiplicities.
    std::uint64_t volume() const;

    std::uint64_t degree(NodeId u) const;
    /// (outdegree, indegree); directed graphs only.
    std::pair<std::uint64_t, std::uint64_t> in_out_degree(NodeId u) const;
    double node_weight(NodeId u) const;
    /// w(u,v); directed graphs use the orientation u -> v.
    double pair_weight(NodeId u, NodeId v) const;

    std::span<const std::uint64_t> degrees() const;
    std::span<const double> node_weights() const;

    /// Aggregated neighbors with directions ignored; a loop appears once.
    std::span<const Neighbor> neighbors(NodeId u) const;
    std::span<const Neighbor> out_neighbors(NodeId u) const;
    std::span<const Neighbor> in_neighbors(NodeId u) const;

    const SimpleGraph& simple() const;

    /// 1-based id as written in the edge file (right side restarts at 1).
    std::uint64_t external_id(NodeId u) const;

private:
    void check_node(NodeId u) const;
    void validate_records() const;

    Format format_;
    WeightType weights_;
    std::size_t left_count_;
    std::size_t right_count_;
    std::vector<EdgeRecord> edges_;
    TagSet tags_;
    bool has_timestamps_ = false;
    double rating_mean_ = 0.0;
    std::shared_ptr<detail::GraphIndex> index_;
};

/// Records of the edges present after replaying a dynamic event log.
/// Events are ordered by timestamp, ties by record order.
std::vector<EdgeRecord> replay_events(const Graph& g);

}  // namespace netstat
