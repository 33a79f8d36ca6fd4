#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netstat/graph.hpp"

namespace netstat {

enum class ComputedOn { Full, LargestComponent, Simple };
enum class Method { Exact, Estimated };

std::string_view internal_name(ComputedOn on);
std::string_view internal_name(Method method);

struct StatisticValue {
    std::string name;
    double value = 0.0;
    ComputedOn computed_on = ComputedOn::Full;
    Method method = Method::Exact;
    /// Sorted by key; side counts of bipartite networks, sample sizes, tolerances.
    std::map<std::string, std::string> parameters;
    /// Set when no value could be produced; written as an NA row.
    std::string unavailable;
};

struct StatsOptions {
    /// Exact all-pairs BFS up to this many nodes in the largest component.
    std::size_t exact_threshold = 20000;
    /// BFS sources used above the threshold.
    std::size_t sample_sources = 1000;
    std::uint64_t seed = 42;
    double tol = 1e-8;
    /// Worker threads for BFS sweeps and local clustering.
    unsigned jobs = 1;
    /// Exhaustive frustration search up to this many nodes per component.
    std::size_t frustration_exhaustive = 20;
    /// Search-tree nodes the frustration branch-and-bound may expand.
    std::uint64_t frustration_budget = 2'000'000;
    /// Average local clustering only over nodes of degree >= 2.
    bool clustering_degree_two = false;
};

/// Names of all statistics, in output order.
std::span<const std::string_view> statistic_names();

/// Memoizing evaluator for one graph. Intermediate results (components,
/// triangle counts, distance histogram, spectra) are shared between
/// statistics. The graph must outlive the session. Not thread safe.
class StatisticsSession {
public:
    StatisticsSession(const Graph& g, StatsOptions options = {});
    ~StatisticsSession();
    StatisticsSession(const StatisticsSession&) = delete;
    StatisticsSession& operator=(const StatisticsSession&) = delete;

    /// Throws UsageError for unknown names or statistics undefined for the
    /// graph's format/weight type, DomainError for an empty graph.
    StatisticValue compute(std::string_view name);
    /// Empty string when applicable, else the reason.
    std::string inapplicable_reason(std::string_view name) const;
    /// Never throws for a known name: inapplicable or failed statistics come
    /// back with `unavailable` set, non-convergence as NaN marked estimated.
    StatisticValue evaluate(std::string_view name);
    /// Every applicable statistic, or every statistic with NA rows.
    std::vector<StatisticValue> compute_all(bool include_inapplicable = false);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

StatisticValue compute_statistic(const Graph& g, std::string_view name, const StatsOptions& options = {});

StatisticValue stat_size(const Graph& g);
StatisticValue stat_volume(const Graph& g);
StatisticValue stat_uniquevolume(const Graph& g);
StatisticValue stat_weight(const Graph& g);
StatisticValue stat_avgdegree(const Graph& g);
StatisticValue stat_fill(const Graph& g);
StatisticValue stat_maxdegree(const Graph& g);
StatisticValue stat_relmaxdegree(const Graph& g);
StatisticValue stat_reciprocity(const Graph& g);
StatisticValue stat_negativity(const Graph& g);
StatisticValue stat_coco(const Graph& g);
StatisticValue stat_cocorel(const Graph& g);
StatisticValue stat_cocorelinv(const Graph& g);
StatisticValue stat_cocos(const Graph& g);
StatisticValue stat_twostars(const Graph& g);
StatisticValue stat_threestars(const Graph& g);
StatisticValue stat_fourstars(const Graph& g);
StatisticValue stat_triangles(const Graph& g);
StatisticValue stat_squares(const Graph& g);
StatisticValue stat_tour4(const Graph& g);
StatisticValue stat_power(const Graph& g);
StatisticValue stat_gini(const Graph& g);
StatisticValue stat_dentropyn(const Graph& g);
StatisticValue stat_own(const Graph& g);
StatisticValue stat_assortativity(const Graph& g);
StatisticValue stat_clusco(const Graph& g);
StatisticValue stat_clusco2(const Graph& g, const StatsOptions& options = {});
StatisticValue stat_clusco_signed(const Graph& g);
StatisticValue stat_clusco_signed_rel(const Graph& g);
StatisticValue stat_diam(const Graph& g, const StatsOptions& options = {});
StatisticValue stat_radius(const Graph& g, const StatsOptions& options = {});
StatisticValue stat_meandist(const Graph& g, const StatsOptions& options = {});
StatisticValue stat_mediandist(const Graph& g, const StatsOptions& options = {});
StatisticValue stat_diam_eff(const Graph& g, const StatsOptions& options = {});
StatisticValue stat_snorm(const Graph& g, const StatsOptions& options = {});
StatisticValue stat_alcon(const Graph& g, const StatsOptions& options = {});
StatisticValue stat_conflict(const Graph& g, const StatsOptions& options = {});
StatisticValue stat_frustration(const Graph& g, const StatsOptions& options = {});
StatisticValue stat_anticonflict(const Graph& g, const StatsOptions& options = {});
StatisticValue stat_nonbip(const Graph& g, const StatsOptions& options = {});
StatisticValue stat_nonbipn(const Graph& g, const StatsOptions& options = {});

/// Per-node triangle counts of the simple loopless view, plus the total.
struct TriangleCounts {
    std::vector<std::uint64_t> per_node;
    std::uint64_t total = 0;
};
TriangleCounts count_triangles(const SimpleGraph& s, unsigned jobs = 1);
/// 4-cycles of the simple loopless view.
std::uint64_t count_squares(const SimpleGraph& s);

/// c(u) on the simple loopless view; zero when d(u) <= 1.
double local_clustering(const Graph& g, NodeId u);
std::vector<double> local_clustering_all(const Graph& g, unsigned jobs = 1);

/// Largest distance from u to a node of its own connected component.
std::uint32_t eccentricity(const Graph& g, NodeId u);

/// Ordered pair counts by hop on the largest connected component, self
/// pairs at hop 0. In sampled mode counts come from `sources` BFS roots and
/// cover sources * component_size pairs.
struct DistanceHistogram {
    std::vector<std::uint64_t> counts;
    std::size_t component_size = 0;
    std::size_t sources = 0;
    Method method = Method::Exact;
    /// Smallest and largest eccentricity among the BFS roots.
    std::uint32_t min_eccentricity = 0;
    std::uint32_t max_eccentricity = 0;
    std::uint64_t pairs() const;
};
DistanceHistogram distance_histogram(const Graph& g, const StatsOptions& options = {});

/// Points (x_i, y_i), i = 0..n, of the Lorenz curve of a value list.
struct LorenzCurve {
    std::vector<double> x;
    std::vector<double> y;
    double area_to_diagonal() const;
};
LorenzCurve lorenz_curve(std::vector<double> values);
double gini_coefficient(std::vector<double> values);

/// Rows: name, value, computed_on, method, parameters.
void write_statistics_tsv(std::ostream& out, std::span<const StatisticValue> values);

}  // namespace netstat
