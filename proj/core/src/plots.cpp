#include "netstat/plots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#include "netstat/error.hpp"
#include "netstat/numeric_text.hpp"
#include "netstat/transforms.hpp"

namespace netstat {

namespace {

struct KindName {
    PlotKind kind;
    std::string_view name;
};

constexpr std::array<KindName, 17> kKinds = {{
    {PlotKind::TemporalDistribution, "temporal-distribution"},
    {PlotKind::WeightDistribution, "weight-distribution"},
    {PlotKind::MultiplicityDistribution, "multiplicity-distribution"},
    {PlotKind::DegreeDistribution, "degree-distribution"},
    {PlotKind::CumulativeDegreeDistribution, "cumulative-degree-distribution"},
    {PlotKind::Lorenz, "lorenz"},
    {PlotKind::OutInComparison, "out-in-comparison"},
    {PlotKind::AssortativityPlot, "assortativity-plot"},
    {PlotKind::ClusteringDistribution, "clustering-distribution"},
    {PlotKind::SpectrumTopk, "spectrum-topk"},
    {PlotKind::SpectrumCumulative, "spectrum-cumulative"},
    {PlotKind::ComplexEigenvalues, "complex-eigenvalues"},
    {PlotKind::DistanceDistribution, "distance-distribution"},
    {PlotKind::TemporalDistanceDistribution, "temporal-distance-distribution"},
    {PlotKind::DrawingA, "drawing-A"},
    {PlotKind::DrawingN, "drawing-N"},
    {PlotKind::DrawingL, "drawing-L"},
}};

constexpr std::array<PlotKind, 17> kAllKinds = [] {
    std::array<PlotKind, 17> out{};
    for (std::size_t i = 0; i < kKinds.size(); ++i) out[i] = kKinds[i].kind;
    return out;
}();

PlotSeries start(PlotKind kind, std::string x, std::vector<std::string> y, PlotStyle style,
                 AxisScale xs = AxisScale::Linear, AxisScale ys = AxisScale::Linear) {
    PlotSeries s;
    s.kind = kind;
    s.x = std::move(x);
    s.y = std::move(y);
    s.style = style;
    s.x_scale = xs;
    s.y_scale = ys;
    return s;
}

std::vector<double> as_doubles(std::span<const std::uint64_t> values) { return {values.begin(), values.end()}; }

Graph current(const Graph& g) { return g.weights() == WeightType::Dynamic ? latest_state(g) : g; }

/// Symmetric operator of A, N or L; directed adjacency is symmetrized.
Operator spectral_operator(const Graph& g, MatrixKind matrix, const std::vector<bool>& keep = {}) {
    OperatorOptions opts;
    opts.keep = keep;
    Operator op = build_operator(g, matrix, opts);
    if (op.symmetric()) return op;
    Operator::Sparse sym = op.matrix();
    sym = Operator::Sparse(sym + Operator::Sparse(sym.transpose()));
    std::vector<NodeId> nodes(op.nodes().begin(), op.nodes().end());
    return Operator(matrix, std::move(sym), nodes, nodes, true);
}

SpectrumOrder order_for(MatrixKind matrix) {
    return matrix == MatrixKind::L ? SpectrumOrder::Smallest : SpectrumOrder::LargestAbsolute;
}

SolverOptions solver(const PlotOptions& o) {
    SolverOptions s;
    s.tol = o.stats.tol;
    s.seed = o.stats.seed;
    return s;
}

void check_matrix(MatrixKind matrix) {
    if (matrix != MatrixKind::A && matrix != MatrixKind::N && matrix != MatrixKind::L)
        throw UsageError("spectrum plots use A, N or L, not " + std::string(internal_name(matrix)));
}

std::string svg_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string tick_label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

/// Maps data values to pixels along one axis.
struct Axis {
    AxisScale scale;
    double lo;
    double hi;
    double p0;
    double p1;

    static Axis make(AxisScale scale, double lo, double hi, double p0, double p1) {
        if (scale == AxisScale::Log) {
            lo = std::log10(lo);
            hi = std::log10(hi);
        }
        if (!(hi > lo)) {
            lo -= 0.5;
            hi += 0.5;
        }
        return {scale, lo, hi, p0, p1};
    }
    double operator()(double v) const {
        const double t = scale == AxisScale::Log ? std::log10(v) : v;
        return p0 + (t - lo) / (hi - lo) * (p1 - p0);
    }
    std::vector<double> ticks() const {
        std::vector<double> out;
        if (scale == AxisScale::Log) {
            for (double e = std::ceil(lo); e <= std::floor(hi) + 1e-9; ++e) out.push_back(std::pow(10.0, e));
            if (out.empty()) out.push_back(std::pow(10.0, lo));
        } else {
            for (int i = 0; i <= 4; ++i) out.push_back(lo + (hi - lo) * i / 4.0);
        }
        return out;
    }
};

constexpr std::array<std::string_view, 10> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                                       "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

/// Cumulative shares of pairs within each hop, sources x targets in `members`.
std::vector<std::uint64_t> hop_counts(const SimpleGraph& s, std::span<const NodeId> sources,
                                      const std::vector<bool>& member) {
    constexpr auto kUnseen = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> dist(s.node_count(), kUnseen);
    std::vector<NodeId> queue;
    std::vector<std::uint64_t> counts;
    for (NodeId root : sources) {
        queue.assign(1, root);
        dist[root] = 0;
        for (std::size_t h = 0; h < queue.size(); ++h) {
            const NodeId u = queue[h];
            if (member[u]) {
                if (counts.size() <= dist[u]) counts.resize(dist[u] + 1, 0);
                ++counts[dist[u]];
            }
            for (NodeId v : s.neighbors(u))
                if (dist[v] == kUnseen) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
        }
        for (NodeId u : queue) dist[u] = kUnseen;
    }
    return counts;
}

}  // namespace

std::string_view internal_name(PlotKind kind) {
    for (const auto& k : kKinds)
        if (k.kind == kind) return k.name;
    return "?";
}

std::optional<PlotKind> plot_kind_from_name(std::string_view name) {
    for (const auto& k : kKinds)
        if (k.name == name) return k.kind;
    return std::nullopt;
}

std::span<const PlotKind> all_plot_kinds() { return kAllKinds; }

std::size_t PlotSeries::rows() const { return columns.empty() ? 0 : columns.front().values.size(); }

const std::vector<double>& PlotSeries::column(std::string_view name) const {
    for (const auto& c : columns)
        if (c.name == name) return c.values;
    throw std::out_of_range("no column '" + std::string(name) + "'");
}

void PlotSeries::add_column(std::string name, std::vector<double> values) {
    columns.push_back({std::move(name), std::move(values)});
}

std::string PlotSeries::file_stem(std::string_view network) const {
    std::string stem = "plot.";
    stem += internal_name(kind);
    if (!variant.empty()) stem += "." + variant;
    stem += ".";
    stem += network;
    return stem;
}

void PlotSeries::check() const {
    for (const auto& c : columns)
        if (c.values.size() != rows()) throw DomainError("column '" + c.name + "' has a different length");
    auto axis = [&](const std::string& name, AxisScale scale) {
        const auto& values = column(name);
        for (double v : values) {
            if (!std::isfinite(v)) throw DomainError("column '" + name + "' holds a non-finite value");
            if (scale == AxisScale::Log && v <= 0.0)
                throw DomainError("column '" + name + "' holds a non-positive value on a log axis");
        }
    };
    try {
        axis(x, x_scale);
        for (const auto& name : y) axis(name, y_scale);
    } catch (const std::out_of_range& e) {
        throw DomainError(e.what());
    }
}

std::string plot_inapplicable_reason(const Graph& g, PlotKind kind) {
    if (g.node_count() == 0 || g.volume() == 0) return "network has no edges";
    switch (kind) {
        case PlotKind::TemporalDistribution:
        case PlotKind::TemporalDistanceDistribution:
            if (!g.has_timestamps()) return "requires edge timestamps";
            break;
        case PlotKind::WeightDistribution:
            if (!carries_weight_values(g.weights()))
                return "requires edge weights, network is " + std::string(internal_name(g.weights()));
            break;
        case PlotKind::MultiplicityDistribution:
            if (!allows_multiple_edges(g.weights()))
                return "requires multiple edges, network is " + std::string(internal_name(g.weights()));
            break;
        case PlotKind::OutInComparison:
        case PlotKind::ComplexEigenvalues:
            if (!g.is_directed()) return "requires a directed network";
            break;
        case PlotKind::CumulativeDegreeDistribution: {
            const auto d = g.degrees();
            if (*std::max_element(d.begin(), d.end()) <= 1) return "every node has degree at most 1";
            break;
        }
        case PlotKind::ClusteringDistribution:
            if (g.is_bipartite()) return "undefined for bipartite networks";
            break;
        case PlotKind::DrawingA:
        case PlotKind::DrawingN:
        case PlotKind::DrawingL: {
            const auto c = connected_components(g);
            if (c.sizes[c.largest()] < 3) return "largest component has fewer than 3 nodes";
            break;
        }
        default: break;
    }
    return {};
}

PlotSeries plot_temporal(const Graph& g, const PlotOptions& options) {
    if (!g.has_timestamps()) throw UsageError("temporal distribution requires edge timestamps");
    if (options.temporal_bins == 0) throw UsageError("temporal bins must be positive");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& e : g.edges()) {
        lo = std::min(lo, *e.timestamp);
        hi = std::max(hi, *e.timestamp);
    }
    const std::size_t bins = hi > lo ? options.temporal_bins : 1;
    const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
    std::vector<double> counts(bins, 0.0);
    for (const auto& e : g.edges()) {
        auto b = static_cast<std::size_t>((*e.timestamp - lo) / width);
        counts[std::min(b, bins - 1)] += static_cast<double>(g.edge_multiplicity(e));
    }
    std::vector<double> begin(bins);
    std::vector<double> end(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        begin[i] = lo + width * static_cast<double>(i);
        end[i] = i + 1 == bins ? std::max(hi, lo + width) : lo + width * static_cast<double>(i + 1);
    }
    auto s = start(PlotKind::TemporalDistribution, "time", {"edges"}, PlotStyle::Bars);
    s.add_column("time", std::move(begin));
    s.add_column("end", std::move(end));
    s.add_column("edges", std::move(counts));
    s.annotations["bins"] = std::to_string(bins);
    s.annotations["first"] = format_number(lo);
    s.annotations["last"] = format_number(hi);
    return s;
}

PlotSeries plot_weights(const Graph& g) {
    if (!carries_weight_values(g.weights())) throw UsageError("weight distribution requires edge weights");
    std::map<double, double> freq;
    for (const auto& e : g.edges()) ++freq[e.weight];
    auto s = start(PlotKind::WeightDistribution, "weight", {"edges"}, PlotStyle::Bars);
    std::vector<double> w;
    std::vector<double> c;
    for (auto [k, v] : freq) {
        w.push_back(k);
        c.push_back(v);
    }
    s.add_column("weight", std::move(w));
    s.add_column("edges", std::move(c));
    return s;
}

PlotSeries plot_multiplicities(const Graph& g) {
    if (!allows_multiple_edges(g.weights())) throw UsageError("multiplicity distribution requires multiple edges");
    const Graph h = current(g);
    std::map<std::pair<NodeId, NodeId>, std::uint64_t> pairs;
    for (const auto& e : h.edges()) {
        auto key = h.is_directed() ? std::make_pair(e.src, e.dst)
                                   : std::make_pair(std::min(e.src, e.dst), std::max(e.src, e.dst));
        pairs[key] += h.edge_multiplicity(e);
    }
    std::map<std::uint64_t, double> freq;
    for (const auto& [key, k] : pairs) ++freq[k];
    auto s = start(PlotKind::MultiplicityDistribution, "multiplicity", {"pairs"}, PlotStyle::Points, AxisScale::Log,
                   AxisScale::Log);
    std::vector<double> m;
    std::vector<double> c;
    for (auto [k, v] : freq) {
        m.push_back(static_cast<double>(k));
        c.push_back(v);
    }
    s.add_column("multiplicity", std::move(m));
    s.add_column("pairs", std::move(c));
    return s;
}

PlotSeries plot_degree(const Graph& g) {
    std::map<std::uint64_t, double> freq;
    std::uint64_t isolated = 0;
    for (auto d : g.degrees()) {
        if (d == 0) ++isolated;
        else ++freq[d];
    }
    auto s = start(PlotKind::DegreeDistribution, "degree", {"nodes"}, PlotStyle::Points, AxisScale::Log,
                   AxisScale::Log);
    std::vector<double> d;
    std::vector<double> c;
    for (auto [k, v] : freq) {
        d.push_back(static_cast<double>(k));
        c.push_back(v);
    }
    s.add_column("degree", std::move(d));
    s.add_column("nodes", std::move(c));
    s.annotations["dropped_zero_degree"] = std::to_string(isolated);
    return s;
}

PlotSeries plot_cumulative_degree(const Graph& g) {
    std::map<std::uint64_t, std::uint64_t> freq;
    for (auto d : g.degrees()) ++freq[d];
    const double n = static_cast<double>(g.node_count());
    std::uint64_t above = g.node_count();
    std::vector<double> d;
    std::vector<double> p;
    std::size_t dropped = 0;
    for (auto [k, v] : freq) {
        if (k > 1 && d.empty()) {
            d.push_back(static_cast<double>(k - 1));
            p.push_back(static_cast<double>(above) / n);
        }
        above -= v;
        if (k == 0 || above == 0) {
            ++dropped;
            continue;
        }
        d.push_back(static_cast<double>(k));
        p.push_back(static_cast<double>(above) / n);
    }
    auto s = start(PlotKind::CumulativeDegreeDistribution, "degree", {"share_greater"}, PlotStyle::Steps,
                   AxisScale::Log, AxisScale::Log);
    s.add_column("degree", std::move(d));
    s.add_column("share_greater", std::move(p));
    s.annotations["semantics"] = "share of nodes with degree strictly greater than x";
    s.annotations["dropped_points"] = std::to_string(dropped);
    return s;
}

PlotSeries plot_lorenz(const Graph& g) {
    const auto d = g.degrees();
    auto c = lorenz_curve(as_doubles(d));
    auto s = start(PlotKind::Lorenz, "node_share", {"edge_share"}, PlotStyle::Line);
    s.annotations["area_to_diagonal"] = format_number(c.area_to_diagonal());
    s.annotations["gini"] = format_number(gini_coefficient(as_doubles(d)));
    s.add_column("node_share", std::move(c.x));
    s.add_column("edge_share", std::move(c.y));
    return s;
}

PlotSeries plot_out_in(const Graph& g) {
    if (!g.is_directed()) throw UsageError("out/indegree comparison requires a directed network");
    std::vector<double> out;
    std::vector<double> in;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto [o, i] = g.in_out_degree(u);
        out.push_back(static_cast<double>(o));
        in.push_back(static_cast<double>(i));
    }
    auto s = start(PlotKind::OutInComparison, "outdegree", {"indegree"}, PlotStyle::Points);
    s.add_column("outdegree", std::move(out));
    s.add_column("indegree", std::move(in));
    return s;
}

PlotSeries plot_assortativity(const Graph& g) {
    const auto deg = g.degrees();
    std::vector<double> x;
    std::vector<double> y;
    std::size_t isolated = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (deg[u] == 0) {
            ++isolated;
            continue;
        }
        double sum = 0.0;
        for (const Neighbor& nb : g.neighbors(u))
            sum += static_cast<double>(nb.multiplicity) * (nb.node == u ? 2.0 : 1.0) * static_cast<double>(deg[nb.node]);
        x.push_back(static_cast<double>(deg[u]));
        y.push_back(sum / static_cast<double>(deg[u]));
    }
    auto s = start(PlotKind::AssortativityPlot, "degree", {"neighbor_degree"}, PlotStyle::Points, AxisScale::Log,
                   AxisScale::Log);
    s.add_column("degree", std::move(x));
    s.add_column("neighbor_degree", std::move(y));
    s.annotations["dropped_isolated"] = std::to_string(isolated);
    return s;
}

PlotSeries plot_clustering_distribution(const Graph& g, const PlotOptions& options) {
    if (g.is_bipartite()) throw UsageError("clustering distribution is undefined for bipartite networks");
    auto c = local_clustering_all(g, options.stats.jobs);
    std::sort(c.begin(), c.end());
    std::vector<double> value;
    std::vector<double> share;
    const double n = static_cast<double>(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i + 1 < c.size() && c[i + 1] == c[i]) continue;
        value.push_back(c[i]);
        share.push_back(static_cast<double>(i + 1) / n);
    }
    auto s = start(PlotKind::ClusteringDistribution, "clustering", {"share_at_most"}, PlotStyle::Steps);
    s.add_column("clustering", std::move(value));
    s.add_column("share_at_most", std::move(share));
    return s;
}

PlotSeries plot_spectrum_topk(const Graph& g, MatrixKind matrix, const PlotOptions& options) {
    check_matrix(matrix);
    const Operator op = spectral_operator(g, matrix);
    if (op.rows() == 0) throw DomainError("operator has dimension zero");
    const std::size_t k = std::min(op.rows(), options.k ? options.k : std::size_t{49});
    const auto r = eig_symmetric(op, k, order_for(matrix), solver(options));
    std::vector<double> index;
    std::vector<double> value;
    std::vector<double> absolute;
    std::vector<double> sign;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        const double v = r.values[i].real();
        index.push_back(static_cast<double>(i + 1));
        value.push_back(v);
        absolute.push_back(std::abs(v));
        sign.push_back(v < 0 ? -1.0 : 1.0);
    }
    auto s = start(PlotKind::SpectrumTopk, "index", {"abs_value"}, PlotStyle::Points);
    s.variant = std::string(internal_name(matrix));
    s.add_column("index", std::move(index));
    s.add_column("value", std::move(value));
    s.add_column("abs_value", std::move(absolute));
    s.add_column("sign", std::move(sign));
    s.annotations["matrix"] = s.variant;
    s.annotations["solver"] = r.method == SolveMethod::Dense ? "dense" : "iterative";
    s.annotations["order"] = matrix == MatrixKind::L ? "smallest" : "largest-absolute";
    double worst = 0.0;
    for (double x : r.residuals) worst = std::max(worst, x);
    s.annotations["residual"] = format_number(worst);
    return s;
}

PlotSeries plot_spectrum_cumulative(const Graph& g, MatrixKind matrix, const PlotOptions& options) {
    check_matrix(matrix);
    if (options.spectrum_bins == 0) throw UsageError("spectrum bins must be positive");
    const Operator op = spectral_operator(g, matrix);
    const std::size_t dim = op.rows();
    if (dim == 0) throw DomainError("operator has dimension zero");
    const std::size_t bins = options.spectrum_bins;
    const bool exact = dim <= options.dense_threshold;

    auto s = start(PlotKind::SpectrumCumulative, "upper", {"cumulative"}, PlotStyle::Steps);
    s.variant = std::string(internal_name(matrix));
    s.annotations["matrix"] = s.variant;
    s.annotations["dimension"] = std::to_string(dim);
    s.annotations["bins"] = std::to_string(bins);

    std::vector<double> values;
    std::vector<QuadratureProbe> probes;
    double lo = 0.0;
    double hi = 0.0;
    if (exact) {
        values = dense_symmetric_spectrum(op);
        lo = values.front();
        hi = values.back();
        s.annotations["method"] = "exact";
    } else {
        const auto top = eig_symmetric(op, 1, SpectrumOrder::Largest, solver(options));
        const auto bottom = eig_symmetric(op, 1, SpectrumOrder::Smallest, solver(options));
        hi = top.values[0].real();
        lo = bottom.values[0].real();
        probes = spectral_quadrature(op, options.quadrature_probes, options.quadrature_steps, options.stats.seed);
        s.annotations["method"] = "estimated";
        s.annotations["probes"] = std::to_string(options.quadrature_probes);
        s.annotations["steps"] = std::to_string(options.quadrature_steps);
        s.annotations["seed"] = std::to_string(options.stats.seed);
    }
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    auto bin_of = [&](double v) {
        const double t = std::floor((v - lo) / width);
        return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(bins - 1)));
    };
    std::vector<double> lower(bins);
    std::vector<double> upper(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        lower[i] = lo + width * static_cast<double>(i);
        upper[i] = i + 1 == bins ? hi : lo + width * static_cast<double>(i + 1);
    }
    std::vector<double> count(bins, 0.0);
    std::vector<double> cumulative(bins, 0.0);
    const double n = static_cast<double>(dim);
    if (exact) {
        for (double v : values) ++count[bin_of(v)];
        double run = 0.0;
        for (std::size_t i = 0; i < bins; ++i) {
            run += count[i];
            cumulative[i] = run / n;
        }
    } else {
        std::vector<double> low(bins, 1.0);
        std::vector<double> high(bins, 0.0);
        for (const auto& p : probes) {
            std::vector<double> mass(bins, 0.0);
            for (std::size_t j = 0; j < p.nodes.size(); ++j) mass[bin_of(p.nodes[j])] += p.weights[j];
            double run = 0.0;
            for (std::size_t i = 0; i < bins; ++i) {
                run += mass[i];
                count[i] += mass[i] * n / static_cast<double>(probes.size());
                low[i] = std::min(low[i], run);
                high[i] = std::max(high[i], run);
            }
        }
        double run = 0.0;
        for (std::size_t i = 0; i < bins; ++i) {
            run += count[i];
            cumulative[i] = std::min(1.0, run / n);
        }
        s.add_column("lower", std::move(lower));
        s.add_column("upper", std::move(upper));
        s.add_column("count", std::move(count));
        s.add_column("cumulative", std::move(cumulative));
        s.add_column("cumulative_low", std::move(low));
        s.add_column("cumulative_high", std::move(high));
        return s;
    }
    s.add_column("lower", std::move(lower));
    s.add_column("upper", std::move(upper));
    s.add_column("count", std::move(count));
    s.add_column("cumulative", std::move(cumulative));
    return s;
}

PlotSeries plot_complex_eigenvalues(const Graph& g, const PlotOptions& options) {
    if (!g.is_directed()) throw UsageError("complex eigenvalues require a directed network");
    const Operator op = build_operator(g, MatrixKind::A);
    if (op.rows() == 0) throw DomainError("operator has dimension zero");
    const std::size_t k = std::min(op.rows(), options.k ? options.k : std::size_t{49});
    const auto r = eig_general(op, k, solver(options));
    std::vector<double> re;
    std::vector<double> im;
    std::vector<double> ab;
    for (const auto& v : r.values) {
        re.push_back(v.real());
        im.push_back(v.imag());
        ab.push_back(std::abs(v));
    }
    auto s = start(PlotKind::ComplexEigenvalues, "real", {"imag"}, PlotStyle::Points);
    s.add_column("real", std::move(re));
    s.add_column("imag", std::move(im));
    s.add_column("abs", std::move(ab));
    s.annotations["solver"] = r.method == SolveMethod::Dense ? "dense" : "iterative";
    s.annotations["k"] = std::to_string(r.values.size());
    return s;
}

PlotSeries plot_distance_distribution(const Graph& g, const PlotOptions& options) {
    const auto h = distance_histogram(g, options.stats);
    const double total = static_cast<double>(h.pairs());
    std::vector<double> hop;
    std::vector<double> pairs;
    std::vector<double> share;
    std::vector<double> cumulative;
    double run = 0.0;
    for (std::size_t d = 0; d < h.counts.size(); ++d) {
        run += static_cast<double>(h.counts[d]);
        hop.push_back(static_cast<double>(d));
        pairs.push_back(static_cast<double>(h.counts[d]));
        share.push_back(static_cast<double>(h.counts[d]) / total);
        cumulative.push_back(run / total);
    }
    auto s = start(PlotKind::DistanceDistribution, "distance", {"cumulative"}, PlotStyle::Steps);
    s.add_column("distance", std::move(hop));
    s.add_column("pairs", std::move(pairs));
    s.add_column("share", std::move(share));
    s.add_column("cumulative", std::move(cumulative));
    s.annotations["self_pairs"] = "included";
    s.annotations["component"] = "largest";
    s.annotations["component_size"] = std::to_string(h.component_size);
    s.annotations["method"] = std::string(internal_name(h.method));
    if (h.method == Method::Estimated) {
        s.annotations["sources"] = std::to_string(h.sources);
        s.annotations["seed"] = std::to_string(options.stats.seed);
    }
    return s;
}

PlotSeries plot_temporal_distance(const Graph& g, const PlotOptions& options) {
    if (!g.has_timestamps()) throw UsageError("temporal distance distribution requires edge timestamps");
    std::vector<double> cuts = options.snapshots;
    double first = std::numeric_limits<double>::infinity();
    double last = -first;
    for (const auto& e : g.edges()) {
        first = std::min(first, *e.timestamp);
        last = std::max(last, *e.timestamp);
    }
    if (cuts.empty()) {
        const std::size_t count = std::max<std::size_t>(1, options.snapshot_count);
        for (std::size_t i = 1; i <= count; ++i)
            cuts.push_back(i == count ? last
                                      : first + (last - first) * static_cast<double>(i) / static_cast<double>(count));
    }
    std::sort(cuts.begin(), cuts.end());

    // node set and sources are fixed by the largest component of the full network
    const Graph full = current(g);
    const auto comps = connected_components(full);
    const std::size_t big = comps.largest();
    std::vector<bool> member(g.node_count(), false);
    std::vector<NodeId> sources;
    for (NodeId u = 0; u < g.node_count(); ++u)
        if (comps.label[u] == big) {
            member[u] = true;
            sources.push_back(u);
        }
    const std::size_t size = sources.size();
    bool sampled = false;
    if (size > options.stats.exact_threshold && options.stats.sample_sources < size) {
        sampled = true;
        std::mt19937_64 rng(options.stats.seed);
        const std::size_t k = std::max<std::size_t>(1, options.stats.sample_sources);
        for (std::size_t i = 0; i < k; ++i) std::swap(sources[i], sources[i + rng() % (size - i)]);
        sources.resize(k);
        std::sort(sources.begin(), sources.end());
    }
    const double total = static_cast<double>(sources.size()) * static_cast<double>(size);

    std::vector<std::vector<std::uint64_t>> per_cut;
    std::size_t longest = 0;
    for (double t : cuts) {
        std::vector<EdgeRecord> edges;
        for (const auto& e : g.edges())
            if (*e.timestamp <= t) edges.push_back(e);
        Graph snap(g.format(), g.weights(), g.is_bipartite() ? g.left_count() : g.node_count(),
                   g.is_bipartite() ? g.right_count() : 0, std::move(edges), g.tags());
        if (snap.weights() == WeightType::Dynamic) snap = latest_state(snap);
        per_cut.push_back(hop_counts(snap.simple(), sources, member));
        longest = std::max(longest, per_cut.back().size());
    }
    auto s = start(PlotKind::TemporalDistanceDistribution, "time", {}, PlotStyle::Line);
    s.add_column("time", cuts);
    for (std::size_t d = 0; d < longest; ++d) {
        std::vector<double> col;
        for (const auto& counts : per_cut) {
            std::uint64_t within = 0;
            for (std::size_t j = 0; j <= d && j < counts.size(); ++j) within += counts[j];
            col.push_back(static_cast<double>(within) / total);
        }
        s.y.push_back("within_" + std::to_string(d));
        s.add_column(s.y.back(), std::move(col));
    }
    s.annotations["self_pairs"] = "included";
    s.annotations["component"] = "largest of the full network";
    s.annotations["component_size"] = std::to_string(size);
    s.annotations["method"] = sampled ? "estimated" : "exact";
    if (sampled) {
        s.annotations["sources"] = std::to_string(sources.size());
        s.annotations["seed"] = std::to_string(options.stats.seed);
    }
    return s;
}

PlotSeries draw_graph(const Graph& g, MatrixKind matrix, const PlotOptions& options) {
    check_matrix(matrix);
    const auto comps = connected_components(g);
    const std::size_t big = comps.largest();
    std::vector<bool> keep(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) keep[u] = comps.label[u] == big;
    const Operator op = spectral_operator(g, matrix, keep);
    if (op.rows() < 3) throw UsageError("graph drawing needs at least 3 nodes in the largest component");

    std::size_t first = 0;
    SpectralResult r;
    if (matrix == MatrixKind::L) {
        r = eig_symmetric(op, 3, SpectrumOrder::Smallest, solver(options));
        // skip the zero eigenvalue of a connected unsigned component
        first = std::abs(r.values[0].real()) <= 1e-8 * op.norm_estimate() ? 1 : 0;
    } else {
        r = eig_symmetric(op, 2, SpectrumOrder::LargestAbsolute, solver(options));
    }
    const auto ix = static_cast<Eigen::Index>(first);
    std::vector<double> node;
    std::vector<double> side;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<std::size_t> row(g.node_count(), std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < op.nodes().size(); ++i) {
        const NodeId u = op.nodes()[i];
        row[u] = i;
        node.push_back(static_cast<double>(g.external_id(u)));
        side.push_back(g.is_bipartite() && !g.is_left(u) ? 2.0 : 1.0);
        x.push_back(r.vectors(static_cast<Eigen::Index>(i), ix));
        y.push_back(r.vectors(static_cast<Eigen::Index>(i), ix + 1));
    }
    auto s = start(PlotKind::DrawingA, "x", {"y"}, PlotStyle::Drawing);
    s.kind = matrix == MatrixKind::A ? PlotKind::DrawingA : matrix == MatrixKind::N ? PlotKind::DrawingN : PlotKind::DrawingL;
    if (g.is_bipartite()) s.add_column("side", std::move(side));
    s.add_column("node", std::move(node));
    s.add_column("x", std::move(x));
    s.add_column("y", std::move(y));
    const auto& simple = g.simple();
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (row[u] == std::numeric_limits<std::size_t>::max()) continue;
        for (NodeId v : simple.neighbors(u))
            if (u < v && row[v] != std::numeric_limits<std::size_t>::max()) s.links.emplace_back(row[u], row[v]);
    }
    s.annotations["matrix"] = std::string(internal_name(matrix));
    s.annotations["eigenvalue_x"] = format_number(r.values[first].real());
    s.annotations["eigenvalue_y"] = format_number(r.values[first + 1].real());
    s.annotations["component"] = comps.sizes.size() == 1 ? "full" : "largest";
    double worst = 0.0;
    for (double v : r.residuals) worst = std::max(worst, v);
    s.annotations["residual"] = format_number(worst);
    return s;
}

std::vector<PlotSeries> make_plots(const Graph& g, PlotKind kind, const PlotOptions& options) {
    if (const auto why = plot_inapplicable_reason(g, kind); !why.empty())
        throw UsageError(std::string(internal_name(kind)) + ": " + why);
    switch (kind) {
        case PlotKind::TemporalDistribution: return {plot_temporal(g, options)};
        case PlotKind::WeightDistribution: return {plot_weights(g)};
        case PlotKind::MultiplicityDistribution: return {plot_multiplicities(g)};
        case PlotKind::DegreeDistribution: return {plot_degree(g)};
        case PlotKind::CumulativeDegreeDistribution: return {plot_cumulative_degree(g)};
        case PlotKind::Lorenz: return {plot_lorenz(g)};
        case PlotKind::OutInComparison: return {plot_out_in(g)};
        case PlotKind::AssortativityPlot: return {plot_assortativity(g)};
        case PlotKind::ClusteringDistribution: return {plot_clustering_distribution(g, options)};
        case PlotKind::SpectrumTopk:
        case PlotKind::SpectrumCumulative: {
            std::vector<PlotSeries> out;
            for (MatrixKind m : {MatrixKind::A, MatrixKind::N, MatrixKind::L})
                out.push_back(kind == PlotKind::SpectrumTopk ? plot_spectrum_topk(g, m, options)
                                                             : plot_spectrum_cumulative(g, m, options));
            return out;
        }
        case PlotKind::ComplexEigenvalues: return {plot_complex_eigenvalues(g, options)};
        case PlotKind::DistanceDistribution: return {plot_distance_distribution(g, options)};
        case PlotKind::TemporalDistanceDistribution: return {plot_temporal_distance(g, options)};
        case PlotKind::DrawingA: return {draw_graph(g, MatrixKind::A, options)};
        case PlotKind::DrawingN: return {draw_graph(g, MatrixKind::N, options)};
        case PlotKind::DrawingL: return {draw_graph(g, MatrixKind::L, options)};
    }
    return {};
}

void write_plot_tsv(std::ostream& out, const PlotSeries& series) {
    series.check();
    out << '#';
    for (std::size_t i = 0; i < series.columns.size(); ++i) {
        const auto& name = series.columns[i].name;
        out << (i ? '\t' : ' ') << name;
        if (name == series.x) out << (series.x_scale == AxisScale::Log ? ":log" : ":linear");
        else if (std::find(series.y.begin(), series.y.end(), name) != series.y.end())
            out << (series.y_scale == AxisScale::Log ? ":log" : ":linear");
    }
    out << '\n';
    for (const auto& [key, value] : series.annotations) out << "% " << key << '=' << value << '\n';
    for (std::size_t r = 0; r < series.rows(); ++r) {
        for (std::size_t i = 0; i < series.columns.size(); ++i)
            out << (i ? "\t" : "") << format_number(series.columns[i].values[r]);
        out << '\n';
    }
}

void render_svg(std::ostream& out, const PlotSeries& series) {
    series.check();
    if (series.rows() == 0) throw DomainError("empty plot series");
    constexpr double kWidth = 640;
    constexpr double kHeight = 480;
    constexpr double kLeft = 80;
    constexpr double kRight = 24;
    constexpr double kTop = 40;
    constexpr double kBottom = 56;

    const auto& xs = series.column(series.x);
    double xlo = *std::min_element(xs.begin(), xs.end());
    double xhi = *std::max_element(xs.begin(), xs.end());
    double ylo = std::numeric_limits<double>::infinity();
    double yhi = -ylo;
    for (const auto& name : series.y) {
        const auto& ys = series.column(name);
        ylo = std::min(ylo, *std::min_element(ys.begin(), ys.end()));
        yhi = std::max(yhi, *std::max_element(ys.begin(), ys.end()));
    }
    const bool boxes = series.kind == PlotKind::SpectrumCumulative &&
                       std::any_of(series.columns.begin(), series.columns.end(),
                                   [](const PlotColumn& c) { return c.name == "cumulative_low"; });
    if (series.style == PlotStyle::Bars && series.y_scale == AxisScale::Linear) ylo = std::min(ylo, 0.0);
    if (boxes) {
        xlo = std::min(xlo, series.column("lower").front());
        ylo = std::min(ylo, 0.0);
    }
    const Axis ax = Axis::make(series.x_scale, xlo, xhi, kLeft, kWidth - kRight);
    const Axis ay = Axis::make(series.y_scale, ylo, yhi, kHeight - kBottom, kTop);

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    std::string title(internal_name(series.kind));
    if (!series.variant.empty()) title += " (" + series.variant + ")";
    out << "<title>" << escape(title) << "</title>\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << svg_number(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(title) << "</text>\n";

    // axes and ticks
    out << "<g stroke=\"black\" fill=\"none\">\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
        << kHeight - kBottom << "\"/>\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
        << "\"/>\n</g>\n";
    out << "<g fill=\"black\">\n";
    for (double t : ax.ticks()) {
        const double px = ax(t);
        out << "<line x1=\"" << svg_number(px) << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << svg_number(px)
            << "\" y2=\"" << kHeight - kBottom + 5 << "\" stroke=\"black\"/>"
            << "<text x=\"" << svg_number(px) << "\" y=\"" << kHeight - kBottom + 18
            << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
    }
    for (double t : ay.ticks()) {
        const double py = ay(t);
        out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << svg_number(py) << "\" x2=\"" << kLeft << "\" y2=\""
            << svg_number(py) << "\" stroke=\"black\"/>"
            << "<text x=\"" << kLeft - 8 << "\" y=\"" << svg_number(py + 4) << "\" text-anchor=\"end\">"
            << tick_label(t) << "</text>\n";
    }
    std::string ylabel;
    for (const auto& name : series.y) ylabel += (ylabel.empty() ? "" : ", ") + name;
    if (series.y.size() > 4) ylabel = series.y.front() + " .. " + series.y.back();
    out << "<text x=\"" << svg_number((kLeft + kWidth - kRight) / 2) << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\">" << escape(series.x) << (series.x_scale == AxisScale::Log ? " (log)" : "")
        << "</text>\n"
        << "<text x=\"16\" y=\"" << svg_number((kTop + kHeight - kBottom) / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << svg_number((kTop + kHeight - kBottom) / 2)
        << ")\">" << escape(ylabel) << (series.y_scale == AxisScale::Log ? " (log)" : "") << "</text>\n";
    out << "</g>\n";

    if (boxes) {
        const auto& lower = series.column("lower");
        const auto& upper = series.column("upper");
        const auto& low = series.column("cumulative_low");
        const auto& high = series.column("cumulative_high");
        out << "<g fill=\"#cccccc\" stroke=\"none\">\n";
        for (std::size_t i = 0; i < series.rows(); ++i) {
            const double x0 = ax(lower[i]);
            const double x1 = ax(upper[i]);
            const double y0 = ay(high[i]);
            const double y1 = ay(low[i]);
            out << "<rect x=\"" << svg_number(x0) << "\" y=\"" << svg_number(y0) << "\" width=\""
                << svg_number(x1 - x0) << "\" height=\"" << svg_number(std::max(0.0, y1 - y0)) << "\"/>\n";
        }
        out << "</g>\n";
    }

    if (series.style == PlotStyle::Drawing) {
        const auto& ys = series.column(series.y.front());
        out << "<g stroke=\"#999999\" stroke-width=\"0.6\">\n";
        for (auto [a, b] : series.links)
            out << "<line x1=\"" << svg_number(ax(xs[a])) << "\" y1=\"" << svg_number(ay(ys[a])) << "\" x2=\""
                << svg_number(ax(xs[b])) << "\" y2=\"" << svg_number(ay(ys[b])) << "\"/>\n";
        out << "</g>\n";
    }

    const bool by_sign = std::any_of(series.columns.begin(), series.columns.end(),
                                     [](const PlotColumn& c) { return c.name == "sign"; });
    for (std::size_t c = 0; c < series.y.size(); ++c) {
        const auto& ys = series.column(series.y[c]);
        const std::string color(kPalette[c % kPalette.size()]);
        switch (series.style) {
            case PlotStyle::Points:
            case PlotStyle::Drawing: {
                out << "<g fill=\"" << color << "\">\n";
                for (std::size_t i = 0; i < series.rows(); ++i) {
                    out << "<circle cx=\"" << svg_number(ax(xs[i])) << "\" cy=\"" << svg_number(ay(ys[i]))
                        << "\" r=\"2.5\"";
                    if (by_sign) out << " fill=\"" << (series.column("sign")[i] < 0 ? "#d62728" : "#2ca02c") << '"';
                    out << "/>\n";
                }
                out << "</g>\n";
                break;
            }
            case PlotStyle::Line:
            case PlotStyle::Steps: {
                out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
                for (std::size_t i = 0; i < series.rows(); ++i) {
                    if (series.style == PlotStyle::Steps && i > 0)
                        out << svg_number(ax(xs[i])) << ',' << svg_number(ay(ys[i - 1])) << ' ';
                    out << svg_number(ax(xs[i])) << ',' << svg_number(ay(ys[i])) << (i + 1 < series.rows() ? " " : "");
                }
                out << "\"/>\n";
                break;
            }
            case PlotStyle::Bars: {
                double gap = std::numeric_limits<double>::infinity();
                for (std::size_t i = 1; i < series.rows(); ++i) gap = std::min(gap, std::abs(ax(xs[i]) - ax(xs[i - 1])));
                const double w = std::isfinite(gap) ? std::max(1.0, 0.8 * gap) : 12.0;
                const double base = series.y_scale == AxisScale::Log ? kHeight - kBottom : ay(0.0);
                out << "<g fill=\"" << color << "\">\n";
                for (std::size_t i = 0; i < series.rows(); ++i) {
                    const double top = ay(ys[i]);
                    out << "<rect x=\"" << svg_number(ax(xs[i]) - w / 2) << "\" y=\"" << svg_number(std::min(top, base))
                        << "\" width=\"" << svg_number(w) << "\" height=\"" << svg_number(std::abs(base - top))
                        << "\"/>\n";
                }
                out << "</g>\n";
                break;
            }
        }
    }
    if (series.y.size() > 1 && series.y.size() <= kPalette.size()) {
        out << "<g font-size=\"10\">\n";
        for (std::size_t c = 0; c < series.y.size(); ++c) {
            const double py = kTop + 12.0 * static_cast<double>(c);
            out << "<rect x=\"" << kWidth - kRight - 90 << "\" y=\"" << svg_number(py - 8) << "\" width=\"8\" height=\"8\" fill=\""
                << kPalette[c] << "\"/><text x=\"" << kWidth - kRight - 78 << "\" y=\"" << svg_number(py) << "\">"
                << escape(series.y[c]) << "</text>\n";
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
}

}  // namespace netstat
