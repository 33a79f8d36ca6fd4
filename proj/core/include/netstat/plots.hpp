#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netstat/graph.hpp"
#include "netstat/spectral.hpp"
#include "netstat/stats.hpp"

namespace netstat {

enum class PlotKind {
    TemporalDistribution,
    WeightDistribution,
    MultiplicityDistribution,
    DegreeDistribution,
    CumulativeDegreeDistribution,
    Lorenz,
    OutInComparison,
    AssortativityPlot,
    ClusteringDistribution,
    SpectrumTopk,
    SpectrumCumulative,
    ComplexEigenvalues,
    DistanceDistribution,
    TemporalDistanceDistribution,
    DrawingA,
    DrawingN,
    DrawingL,
};

/// `degree-distribution`, `drawing-L`, ...
std::string_view internal_name(PlotKind kind);
std::optional<PlotKind> plot_kind_from_name(std::string_view name);
std::span<const PlotKind> all_plot_kinds();

enum class AxisScale { Linear, Log };
enum class PlotStyle { Points, Line, Steps, Bars, Drawing };

struct PlotColumn {
    std::string name;
    std::vector<double> values;
};

/// Named columns of equal length plus rendering hints. `x` and `y` name the
/// plotted columns; several y columns give several curves.
struct PlotSeries {
    PlotKind kind = PlotKind::DegreeDistribution;
    /// Distinguishes series of one kind, e.g. the matrix of a spectrum plot.
    std::string variant;
    std::vector<PlotColumn> columns;
    std::string x;
    std::vector<std::string> y;
    AxisScale x_scale = AxisScale::Linear;
    AxisScale y_scale = AxisScale::Linear;
    PlotStyle style = PlotStyle::Points;
    std::map<std::string, std::string> annotations;
    /// Row index pairs drawn as segments (graph drawings).
    std::vector<std::pair<std::size_t, std::size_t>> links;

    std::size_t rows() const;
    /// Throws std::out_of_range for unknown names.
    const std::vector<double>& column(std::string_view name) const;
    void add_column(std::string name, std::vector<double> values);
    /// `plot.<kind>[.<variant>].<network>`
    std::string file_stem(std::string_view network) const;
    /// Throws DomainError on ragged columns, unknown axis columns or
    /// non-positive values on a log axis.
    void check() const;
};

struct PlotOptions {
    std::size_t temporal_bins = 100;
    /// Eigenvalues in top-k and complex plots; 0 means min(dim, 49).
    std::size_t k = 0;
    std::size_t spectrum_bins = 49;
    /// Full dense spectrum up to this dimension, stochastic quadrature above.
    std::size_t dense_threshold = 500;
    std::size_t quadrature_probes = 20;
    std::size_t quadrature_steps = 60;
    /// Cut times of the temporal distance plot; empty means evenly spaced.
    std::vector<double> snapshots;
    std::size_t snapshot_count = 10;
    /// Seed, tolerance, distance sampling and threads.
    StatsOptions stats;
};

/// Empty when the plot kind is defined for g, else the reason.
std::string plot_inapplicable_reason(const Graph& g, PlotKind kind);

PlotSeries plot_temporal(const Graph& g, const PlotOptions& options = {});
PlotSeries plot_weights(const Graph& g);
PlotSeries plot_multiplicities(const Graph& g);
PlotSeries plot_degree(const Graph& g);
/// Share of nodes with degree strictly greater than n.
PlotSeries plot_cumulative_degree(const Graph& g);
PlotSeries plot_lorenz(const Graph& g);
PlotSeries plot_out_in(const Graph& g);
PlotSeries plot_assortativity(const Graph& g);
PlotSeries plot_clustering_distribution(const Graph& g, const PlotOptions& options = {});
/// `matrix` is A, N or L; directed graphs use the symmetrized view.
PlotSeries plot_spectrum_topk(const Graph& g, MatrixKind matrix, const PlotOptions& options = {});
PlotSeries plot_spectrum_cumulative(const Graph& g, MatrixKind matrix, const PlotOptions& options = {});
PlotSeries plot_complex_eigenvalues(const Graph& g, const PlotOptions& options = {});
PlotSeries plot_distance_distribution(const Graph& g, const PlotOptions& options = {});
PlotSeries plot_temporal_distance(const Graph& g, const PlotOptions& options = {});
/// Coordinates (node, x, y) on the largest connected component.
PlotSeries draw_graph(const Graph& g, MatrixKind matrix, const PlotOptions& options = {});

/// Every series of one kind; spectrum kinds give one series per matrix.
std::vector<PlotSeries> make_plots(const Graph& g, PlotKind kind, const PlotOptions& options = {});

/// `#` line of `name:scale` column labels, `%` annotation lines, then rows.
void write_plot_tsv(std::ostream& out, const PlotSeries& series);
/// Standalone SVG; identical series give identical bytes.
void render_svg(std::ostream& out, const PlotSeries& series);

}  // namespace netstat
