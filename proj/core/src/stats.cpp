#include "netstat/stats.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "netstat/error.hpp"
#include "netstat/numeric_text.hpp"
#include "netstat/spectral.hpp"
#include "netstat/transforms.hpp"

namespace netstat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<std::string_view, 41> kNames = {
    "size",         "volume",       "uniquevolume",  "weight",        "avgdegree",         "fill",
    "maxdegree",    "relmaxdegree", "reciprocity",   "negativity",    "coco",              "cocorel",
    "cocorelinv",   "cocos",        "twostars",      "threestars",    "fourstars",         "triangles",
    "squares",      "tour4",        "power",         "gini",          "dentropyn",         "own",
    "assortativity", "clusco",      "clusco2",       "clusco_signed", "clusco_signed_rel", "diam",
    "radius",       "meandist",     "mediandist",    "diam_eff",      "snorm",             "alcon",
    "conflict",     "frustration",  "anticonflict",  "nonbip",        "nonbipn",
};

double binomial(std::uint64_t n, unsigned k) {
    if (n < k) return 0.0;
    long double r = 1.0L;
    for (unsigned i = 0; i < k; ++i) r = r * static_cast<long double>(n - i) / static_cast<long double>(i + 1);
    return static_cast<double>(std::round(r));
}

/// Degree-then-id order used to orient edges.
struct Rank {
    const SimpleGraph& s;
    bool operator()(NodeId a, NodeId b) const {
        const auto da = s.degree(a);
        const auto db = s.degree(b);
        return da != db ? da < db : a < b;
    }
};

/// Runs body(worker, begin, end) over [0, n) split into contiguous blocks.
void parallel_blocks(std::size_t n, unsigned jobs, const std::function<void(unsigned, std::size_t, std::size_t)>& body) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (jobs == 1) {
        body(0, 0, n);
        return;
    }
    std::vector<std::thread> threads;
    const std::size_t chunk = (n + jobs - 1) / jobs;
    for (unsigned w = 0; w < jobs; ++w) {
        const std::size_t b = std::min(n, w * chunk);
        const std::size_t e = std::min(n, b + chunk);
        threads.emplace_back(body, w, b, e);
    }
    for (auto& t : threads) t.join();
}

/// BFS distances from root; returns eccentricity and adds hop counts to hist.
std::uint32_t bfs(const SimpleGraph& s, NodeId root, std::vector<std::uint32_t>& dist, std::vector<NodeId>& queue,
                  std::vector<std::uint64_t>* hist) {
    constexpr auto kUnseen = std::numeric_limits<std::uint32_t>::max();
    queue.clear();
    queue.push_back(root);
    dist[root] = 0;
    std::uint32_t ecc = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId u = queue[head];
        const std::uint32_t du = dist[u];
        ecc = du;
        if (hist) {
            if (hist->size() <= du) hist->resize(du + 1, 0);
            ++(*hist)[du];
        }
        for (NodeId v : s.neighbors(u)) {
            if (dist[v] == kUnseen) {
                dist[v] = du + 1;
                queue.push_back(v);
            }
        }
    }
    for (NodeId u : queue) dist[u] = kUnseen;
    return ecc;
}

std::string text(double x) { return format_number(x); }
std::string text(std::uint64_t x) { return std::to_string(x); }

/// Weights dropped, edge directions dropped; multiplicities kept.
Graph undirected_unweighted(const Graph& g) {
    Graph bar = strip_weights(g);
    if (!bar.is_directed()) return bar;
    std::vector<EdgeRecord> edges(bar.edges().begin(), bar.edges().end());
    for (auto& e : edges) e.timestamp.reset();
    TagSet tags;
    if (bar.has_tag("#loop")) tags.insert("#loop");
    return Graph(Format::Undirected, WeightType::Positive, bar.node_count(), std::move(edges), std::move(tags));
}

/// Minimum number of frustrated edges of one connected component.
class FrustrationSearch {
public:
    FrustrationSearch(const SimpleGraph& s, std::vector<NodeId> nodes) : s_(s), nodes_(std::move(nodes)) {
        local_.assign(s.node_count(), kNoNode);
        for (std::size_t i = 0; i < nodes_.size(); ++i) local_[nodes_[i]] = static_cast<NodeId>(i);
        adj_.resize(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            for (NodeId v : s.neighbors(nodes_[i])) adj_[i].push_back(local_[v]);
        for (std::size_t i = 0; i < nodes_.size(); ++i) edges_ += adj_[i].size();
        edges_ /= 2;
    }

    /// Cost of a side assignment.
    std::uint64_t cost(const std::vector<std::uint8_t>& side) const {
        std::uint64_t c = 0;
        for (std::size_t i = 0; i < adj_.size(); ++i)
            for (NodeId j : adj_[i])
                if (j > i && side[i] == side[j]) ++c;
        return c;
    }

    /// Single-vertex moves while they strictly lower the cost.
    void improve(std::vector<std::uint8_t>& side) const {
        for (int pass = 0; pass < 100; ++pass) {
            bool moved = false;
            for (std::size_t i = 0; i < adj_.size(); ++i) {
                std::size_t same = 0;
                for (NodeId j : adj_[i]) same += side[j] == side[i];
                if (2 * same > adj_[i].size()) {
                    side[i] ^= 1;
                    moved = true;
                }
            }
            if (!moved) break;
        }
    }

    /// Alternating sides along a BFS tree.
    std::vector<std::uint8_t> bfs_sides() const {
        std::vector<std::uint8_t> side(adj_.size(), 2);
        std::vector<NodeId> queue{0};
        side[0] = 0;
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (NodeId j : adj_[queue[h]])
                if (side[j] == 2) {
                    side[j] = side[queue[h]] ^ 1;
                    queue.push_back(j);
                }
        return side;
    }

    std::uint64_t exhaustive() const {
        const std::size_t n = adj_.size();
        std::vector<std::uint8_t> side(n, 0);
        std::uint64_t current = edges_;  // everything on one side
        std::uint64_t best = current;
        // Gray code over nodes 1..n-1; node 0 stays on side 0
        const std::uint64_t total = n > 1 ? (std::uint64_t{1} << (n - 1)) : 1;
        for (std::uint64_t step = 1; step < total; ++step) {
            const auto bit = static_cast<std::size_t>(std::countr_zero(step)) + 1;
            std::int64_t same = 0;
            for (NodeId j : adj_[bit]) same += side[j] == side[bit];
            current = static_cast<std::uint64_t>(static_cast<std::int64_t>(current) +
                                                 static_cast<std::int64_t>(adj_[bit].size()) - 2 * same);
            side[bit] ^= 1;
            best = std::min(best, current);
        }
        return best;
    }

    /// Branch and bound in BFS order; returns {best, proven optimal}.
    std::pair<std::uint64_t, bool> branch_and_bound(std::uint64_t upper, std::uint64_t budget) {
        const std::size_t n = adj_.size();
        order_.clear();
        std::vector<bool> seen(n, false);
        // start from the highest-degree node
        NodeId start = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (adj_[i].size() > adj_[start].size()) start = static_cast<NodeId>(i);
        order_.push_back(start);
        seen[start] = true;
        for (std::size_t h = 0; h < order_.size(); ++h)
            for (NodeId j : adj_[order_[h]])
                if (!seen[j]) {
                    seen[j] = true;
                    order_.push_back(j);
                }
        side_.assign(n, 2);
        count_.assign(n, {0, 0});
        best_ = upper;
        budget_ = budget;
        expanded_ = 0;
        aborted_ = false;
        descend();
        return {best_, !aborted_};
    }

    std::uint64_t edges() const { return edges_; }
    std::size_t size() const { return adj_.size(); }
    std::span<const NodeId> nodes() const { return nodes_; }

private:
    struct Frame {
        std::uint64_t cost;
        std::uint64_t lower;
        std::uint8_t first;
        std::uint8_t next;
        bool assigned;
    };

    /// Depth-first search over order_ with an explicit stack.
    void descend() {
        if (++expanded_ > budget_) {
            aborted_ = true;
            return;
        }
        std::vector<Frame> stack{{0, 0, 0, 0, false}};
        while (!stack.empty()) {
            const std::size_t depth = stack.size() - 1;
            const NodeId u = order_[depth];
            Frame& f = stack.back();
            if (f.assigned) {
                for (NodeId v : adj_[u])
                    if (side_[v] == 2) --count_[v][side_[u]];
                side_[u] = 2;
                f.assigned = false;
                if (aborted_) return;
            }
            if (f.next == (depth == 0 ? 1 : 2)) {
                stack.pop_back();
                continue;
            }
            const std::uint8_t sd = f.first ^ f.next++;
            const std::uint64_t add = count_[u][sd];
            std::uint64_t lb = f.lower - std::min(count_[u][0], count_[u][1]);
            side_[u] = sd;
            f.assigned = true;
            for (NodeId v : adj_[u]) {
                if (side_[v] != 2) continue;
                const auto before = std::min(count_[v][0], count_[v][1]);
                ++count_[v][sd];
                lb += std::min(count_[v][0], count_[v][1]) - before;
            }
            const std::uint64_t cost = f.cost + add;
            if (cost + lb >= best_) continue;
            if (depth + 1 == order_.size()) {
                best_ = cost;
                continue;
            }
            if (++expanded_ > budget_) {
                aborted_ = true;
                continue;
            }
            const NodeId w = order_[depth + 1];
            const std::uint8_t first = count_[w][0] <= count_[w][1] ? 0 : 1;
            stack.push_back({cost, lb, first, 0, false});
        }
    }

    const SimpleGraph& s_;
    std::vector<NodeId> nodes_;
    std::vector<NodeId> local_;
    std::vector<std::vector<NodeId>> adj_;
    std::uint64_t edges_ = 0;
    std::vector<NodeId> order_;
    std::vector<std::uint8_t> side_;
    std::vector<std::array<std::uint64_t, 2>> count_;
    std::uint64_t best_ = 0;
    std::uint64_t budget_ = 0;
    std::uint64_t expanded_ = 0;
    bool aborted_ = false;
};

}  // namespace

std::string_view internal_name(ComputedOn on) {
    switch (on) {
        case ComputedOn::Full: return "full";
        case ComputedOn::LargestComponent: return "lcc";
        case ComputedOn::Simple: return "simple";
    }
    return "?";
}

std::string_view internal_name(Method method) { return method == Method::Exact ? "exact" : "estimated"; }

std::span<const std::string_view> statistic_names() { return kNames; }

TriangleCounts count_triangles(const SimpleGraph& s, unsigned jobs) {
    const std::size_t n = s.node_count();
    const Rank rank{s};
    std::vector<std::size_t> offsets(n + 1, 0);
    std::vector<NodeId> fwd;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v : s.neighbors(u))
            if (rank(u, v)) fwd.push_back(v);
        offsets[u + 1] = fwd.size();
    }
    jobs = std::max(1u, jobs);
    std::vector<std::vector<std::uint64_t>> partial(jobs, std::vector<std::uint64_t>(n, 0));
    std::vector<std::uint64_t> totals(jobs, 0);
    parallel_blocks(n, jobs, [&](unsigned w, std::size_t b, std::size_t e) {
        std::vector<bool> mark(n, false);
        auto& per = partial[w];
        for (std::size_t u = b; u < e; ++u) {
            for (std::size_t i = offsets[u]; i < offsets[u + 1]; ++i) mark[fwd[i]] = true;
            for (std::size_t i = offsets[u]; i < offsets[u + 1]; ++i) {
                const NodeId v = fwd[i];
                for (std::size_t j = offsets[v]; j < offsets[v + 1]; ++j) {
                    const NodeId x = fwd[j];
                    if (!mark[x]) continue;
                    ++per[u];
                    ++per[v];
                    ++per[x];
                    ++totals[w];
                }
            }
            for (std::size_t i = offsets[u]; i < offsets[u + 1]; ++i) mark[fwd[i]] = false;
        }
    });
    TriangleCounts out;
    out.per_node.assign(n, 0);
    for (unsigned w = 0; w < jobs; ++w) {
        out.total += totals[w];
        for (std::size_t u = 0; u < n; ++u) out.per_node[u] += partial[w][u];
    }
    return out;
}

std::uint64_t count_squares(const SimpleGraph& s) {
    const std::size_t n = s.node_count();
    const Rank rank{s};
    std::vector<std::uint64_t> paths(n, 0);
    std::vector<NodeId> touched;
    std::uint64_t q = 0;
    for (NodeId u = 0; u < n; ++u) {
        // u is the highest-ranked node of the cycle
        for (NodeId v : s.neighbors(u)) {
            if (!rank(v, u)) continue;
            for (NodeId w : s.neighbors(v)) {
                if (w == u || !rank(w, u)) continue;
                if (paths[w] == 0) touched.push_back(w);
                q += paths[w]++;
            }
        }
        for (NodeId w : touched) paths[w] = 0;
        touched.clear();
    }
    return q;
}

double local_clustering(const Graph& g, NodeId u) {
    if (u >= g.node_count()) throw DomainError("unknown node id " + std::to_string(u));
    const auto& s = g.simple();
    const auto nb = s.neighbors(u);
    if (nb.size() < 2) return 0.0;
    std::uint64_t links = 0;
    for (std::size_t i = 0; i < nb.size(); ++i)
        for (std::size_t j = i + 1; j < nb.size(); ++j) links += s.adjacent(nb[i], nb[j]);
    return static_cast<double>(links) / binomial(nb.size(), 2);
}

std::vector<double> local_clustering_all(const Graph& g, unsigned jobs) {
    const auto& s = g.simple();
    const auto tri = count_triangles(s, jobs);
    std::vector<double> out(s.node_count(), 0.0);
    for (NodeId u = 0; u < s.node_count(); ++u)
        if (s.degree(u) > 1) out[u] = static_cast<double>(tri.per_node[u]) / binomial(s.degree(u), 2);
    return out;
}

std::uint32_t eccentricity(const Graph& g, NodeId u) {
    if (u >= g.node_count()) throw DomainError("unknown node id " + std::to_string(u));
    const auto& s = g.simple();
    std::vector<std::uint32_t> dist(s.node_count(), std::numeric_limits<std::uint32_t>::max());
    std::vector<NodeId> queue;
    return bfs(s, u, dist, queue, nullptr);
}

std::uint64_t DistanceHistogram::pairs() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

DistanceHistogram distance_histogram(const Graph& g, const StatsOptions& options) {
    if (g.node_count() == 0) throw DomainError("distance distribution of an empty network");
    const auto comps = connected_components(g);
    const std::size_t big = comps.largest();
    std::vector<NodeId> members;
    for (NodeId u = 0; u < g.node_count(); ++u)
        if (comps.label[u] == big) members.push_back(u);
    const auto& s = g.simple();

    DistanceHistogram h;
    h.component_size = members.size();
    std::vector<NodeId> sources = members;
    if (members.size() > options.exact_threshold && options.sample_sources < members.size()) {
        h.method = Method::Estimated;
        std::mt19937_64 rng(options.seed);
        const std::size_t k = std::max<std::size_t>(1, options.sample_sources);
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng() % (sources.size() - i));
            std::swap(sources[i], sources[j]);
        }
        sources.resize(k);
        std::sort(sources.begin(), sources.end());
    }
    h.sources = sources.size();
    const unsigned jobs = std::max(1u, options.jobs);
    std::vector<std::vector<std::uint64_t>> hist(jobs);
    std::vector<std::uint32_t> lo(jobs, std::numeric_limits<std::uint32_t>::max());
    std::vector<std::uint32_t> hi(jobs, 0);
    parallel_blocks(sources.size(), jobs, [&](unsigned w, std::size_t b, std::size_t e) {
        std::vector<std::uint32_t> dist(s.node_count(), std::numeric_limits<std::uint32_t>::max());
        std::vector<NodeId> queue;
        queue.reserve(members.size());
        for (std::size_t i = b; i < e; ++i) {
            const std::uint32_t ecc = bfs(s, sources[i], dist, queue, &hist[w]);
            lo[w] = std::min(lo[w], ecc);
            hi[w] = std::max(hi[w], ecc);
        }
    });
    h.min_eccentricity = std::numeric_limits<std::uint32_t>::max();
    for (unsigned w = 0; w < jobs; ++w) {
        if (hist[w].size() > h.counts.size()) h.counts.resize(hist[w].size(), 0);
        for (std::size_t d = 0; d < hist[w].size(); ++d) h.counts[d] += hist[w][d];
        if (!hist[w].empty()) {
            h.min_eccentricity = std::min(h.min_eccentricity, lo[w]);
            h.max_eccentricity = std::max(h.max_eccentricity, hi[w]);
        }
    }
    return h;
}

double LorenzCurve::area_to_diagonal() const {
    double under = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) under += (x[i] - x[i - 1]) * (y[i] + y[i - 1]) / 2.0;
    return 0.5 - under;
}

LorenzCurve lorenz_curve(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    LorenzCurve c;
    const std::size_t n = values.size();
    const double total = std::accumulate(values.begin(), values.end(), 0.0);
    c.x.push_back(0.0);
    c.y.push_back(0.0);
    double run = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        run += values[i];
        c.x.push_back(static_cast<double>(i + 1) / static_cast<double>(n));
        c.y.push_back(total > 0.0 ? run / total : kNaN);
    }
    return c;
}

double gini_coefficient(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double weighted = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        weighted += static_cast<double>(i + 1) * values[i];
        total += values[i];
    }
    if (values.empty() || total == 0.0) return kNaN;
    return 2.0 * weighted / (n * total) - (n + 1.0) / n;
}

struct StatisticsSession::Impl {
    const Graph& g;
    StatsOptions o;
    std::optional<Components> comps;
    std::optional<TriangleCounts> tri;
    std::optional<std::uint64_t> squares;
    std::optional<DistanceHistogram> hist;
    std::optional<Graph> bar;
    std::map<std::string, SpectralResult, std::less<>> spectra;
    std::map<std::string, StatisticValue, std::less<>> done;

    Impl(const Graph& graph, StatsOptions options) : g(graph), o(options) {}

    const Components& components() {
        if (!comps) comps = connected_components(g);
        return *comps;
    }
    const TriangleCounts& triangles() {
        if (!tri) tri = count_triangles(g.simple(), o.jobs);
        return *tri;
    }
    const DistanceHistogram& distances() {
        if (!hist) hist = distance_histogram(g, o);
        return *hist;
    }
    /// Unweighted undirected view used by the bipartivity measures.
    const Graph& gbar() {
        if (!bar) bar = undirected_unweighted(g);
        return *bar;
    }

    std::vector<bool> lcc_mask() {
        const auto& c = components();
        const std::size_t big = c.largest();
        std::vector<bool> keep(g.node_count());
        for (std::size_t u = 0; u < keep.size(); ++u) keep[u] = c.label[u] == big;
        return keep;
    }

    SolverOptions solver() const {
        SolverOptions s;
        s.tol = o.tol;
        s.seed = o.seed;
        return s;
    }

    /// Cached symmetric eigenpairs; nullptr when the operator is too small.
    const SpectralResult* spectrum(const std::string& key, const Operator& op, std::size_t k, SpectrumOrder order) {
        if (auto it = spectra.find(key); it != spectra.end()) return &it->second;
        if (op.rows() < k) return nullptr;
        return &spectra.emplace(key, eig_symmetric(op, k, order, solver())).first->second;
    }

    StatisticValue make(std::string_view name, double value, ComputedOn on = ComputedOn::Full) const {
        StatisticValue v;
        v.name = std::string(name);
        v.value = value;
        v.computed_on = on;
        return v;
    }

    void spectral_parameters(StatisticValue& v, const SpectralResult* r) const {
        v.parameters["tol"] = text(o.tol);
        if (r) {
            v.parameters["solver"] = r->method == SolveMethod::Dense ? "dense" : "iterative";
            double worst = 0.0;
            for (double x : r->residuals) worst = std::max(worst, x);
            v.parameters["residual"] = text(worst);
        }
    }

    void distance_parameters(StatisticValue& v) {
        const auto& h = distances();
        v.method = h.method;
        v.parameters["component_size"] = text(std::uint64_t{h.component_size});
        if (h.method == Method::Estimated) {
            v.parameters["sources"] = text(std::uint64_t{h.sources});
            v.parameters["seed"] = text(o.seed);
        }
    }

    StatisticValue compute(std::string_view name);
    double frustration(StatisticValue& v);
};

double StatisticsSession::Impl::frustration(StatisticValue& v) {
    const auto& s = g.simple();
    const std::size_t n = s.node_count();
    if (s.edge_count() == 0) return kNaN;
    const auto& c = components();
    std::vector<std::vector<NodeId>> groups(c.sizes.size());
    for (NodeId u = 0; u < n; ++u) groups[c.label[u]].push_back(u);

    // sign pattern of the eigenvector of the smallest signless Laplacian eigenvalue
    std::vector<std::int8_t> hint(n, 0);
    bool have_hint = false;
    bool exact = true;
    std::uint64_t f = 0;
    for (auto& members : groups) {
        if (members.size() < 2) continue;
        if (g.is_bipartite()) continue;
        FrustrationSearch search(s, members);
        auto sides = search.bfs_sides();
        if (search.cost(sides) == 0) continue;
        if (members.size() <= o.frustration_exhaustive) {
            f += search.exhaustive();
            continue;
        }
        if (!have_hint) {
            const Graph& b = gbar();
            const Operator k = build_operator(b, MatrixKind::K);
            if (const auto* r = spectrum("K.min", k, 1, SpectrumOrder::Smallest)) {
                for (std::size_t i = 0; i < k.nodes().size(); ++i)
                    hint[k.nodes()[i]] = r->vectors(static_cast<Eigen::Index>(i), 0) >= 0.0 ? 1 : -1;
            }
            have_hint = true;
        }
        search.improve(sides);
        std::uint64_t upper = search.cost(sides);
        std::vector<std::uint8_t> spectral(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) spectral[i] = hint[members[i]] > 0 ? 1 : 0;
        search.improve(spectral);
        upper = std::min(upper, search.cost(spectral));
        const auto [best, proven] = search.branch_and_bound(upper, o.frustration_budget);
        f += best;
        exact = exact && proven;
    }
    if (!exact) {
        v.method = Method::Estimated;
        v.parameters["bound"] = "upper";
        v.parameters["budget"] = text(o.frustration_budget);
    }
    v.parameters["f"] = text(f);
    return static_cast<double>(f) / static_cast<double>(s.edge_count());
}

StatisticValue StatisticsSession::Impl::compute(std::string_view name) {
    const std::size_t n = g.node_count();
    const double nd = static_cast<double>(n);
    const double m = static_cast<double>(g.volume());
    const auto degrees = g.degrees();
    const auto& s = g.simple();

    if (name == "size") {
        auto v = make(name, nd);
        if (g.is_bipartite()) {
            v.parameters["n1"] = text(std::uint64_t{g.left_count()});
            v.parameters["n2"] = text(std::uint64_t{g.right_count()});
        }
        return v;
    }
    if (name == "volume") return make(name, m);
    if (name == "uniquevolume") return make(name, static_cast<double>(dedupe(g).volume()));
    if (name == "weight") {
        double w = 0.0;
        for (double x : g.node_weights()) w += x;
        return make(name, w / 2.0);
    }
    if (name == "avgdegree") {
        auto v = make(name, 2.0 * m / nd);
        if (g.is_bipartite()) {
            v.parameters["d1"] = text(g.left_count() ? m / static_cast<double>(g.left_count()) : kNaN);
            v.parameters["d2"] = text(g.right_count() ? m / static_cast<double>(g.right_count()) : kNaN);
        }
        return v;
    }
    if (name == "fill") {
        const double mu = static_cast<double>(dedupe(g).volume());
        const bool loops = g.has_tag("#loop");
        double p = kNaN;
        if (g.is_bipartite()) {
            const double pairs = static_cast<double>(g.left_count()) * static_cast<double>(g.right_count());
            p = pairs > 0 ? mu / pairs : kNaN;
        } else if (g.is_directed()) {
            const double pairs = loops ? nd * nd : nd * (nd - 1);
            p = pairs > 0 ? mu / pairs : kNaN;
        } else {
            const double pairs = loops ? nd * (nd + 1) : nd * (nd - 1);
            p = pairs > 0 ? 2 * mu / pairs : kNaN;
        }
        return make(name, p);
    }
    if (name == "maxdegree") return make(name, static_cast<double>(*std::max_element(degrees.begin(), degrees.end())));
    if (name == "relmaxdegree") {
        const double dmax = static_cast<double>(*std::max_element(degrees.begin(), degrees.end()));
        return make(name, m > 0 ? dmax / (2.0 * m / nd) : kNaN);
    }
    if (name == "reciprocity") {
        std::uint64_t rec = 0;
        for (NodeId u = 0; u < n; ++u) {
            for (const Neighbor& nb : g.out_neighbors(u)) {
                const auto back = g.out_neighbors(nb.node);
                auto it = std::lower_bound(back.begin(), back.end(), u,
                                           [](const Neighbor& a, NodeId x) { return a.node < x; });
                if (it != back.end() && it->node == u) rec += nb.multiplicity;
            }
        }
        return make(name, m > 0 ? static_cast<double>(rec) / m : kNaN);
    }
    if (name == "negativity") {
        std::uint64_t neg = 0;
        std::uint64_t total = 0;
        for (const EdgeRecord& e : g.edges()) {
            total += g.edge_multiplicity(e);
            if (g.edge_weight(e) < 0.0) neg += g.edge_multiplicity(e);
        }
        return make(name, total > 0 ? static_cast<double>(neg) / static_cast<double>(total) : kNaN);
    }
    if (name == "coco" || name == "cocorel" || name == "cocorelinv") {
        const auto& c = components();
        const std::size_t big = c.largest();
        const double N = static_cast<double>(c.sizes[big]);
        const double value = name == "coco" ? N : name == "cocorel" ? N / nd : 1.0 - N / nd;
        auto v = make(name, value);
        if (name == "coco" && g.is_bipartite()) {
            std::uint64_t left = 0;
            for (NodeId u = 0; u < g.left_count(); ++u) left += c.label[u] == big;
            v.parameters["N1"] = text(left);
            v.parameters["N2"] = text(static_cast<std::uint64_t>(c.sizes[big]) - left);
        }
        return v;
    }
    if (name == "cocos") return make(name, static_cast<double>(largest_strong_component_size(g)));
    if (name == "twostars" || name == "threestars" || name == "fourstars") {
        const unsigned k = name == "twostars" ? 2 : name == "threestars" ? 3 : 4;
        double total = 0.0;
        for (NodeId u = 0; u < n; ++u) total += binomial(s.degree(u), k);
        return make(name, total, ComputedOn::Simple);
    }
    if (name == "triangles") return make(name, static_cast<double>(triangles().total), ComputedOn::Simple);
    if (name == "squares") {
        if (!squares) squares = count_squares(s);
        return make(name, static_cast<double>(*squares), ComputedOn::Simple);
    }
    if (name == "tour4") {
        const double q = compute("squares").value;
        const double wedges = compute("twostars").value;
        return make(name, 8 * q + 4 * wedges + 2 * static_cast<double>(s.edge_count()), ComputedOn::Simple);
    }
    if (name == "power") {
        std::uint64_t dmin = 0;
        for (auto d : degrees)
            if (d > 0 && (dmin == 0 || d < dmin)) dmin = d;
        if (dmin == 0) return make(name, kNaN);
        double logs = 0.0;
        std::uint64_t count = 0;
        for (auto d : degrees) {
            if (d == 0) continue;
            ++count;
            logs += std::log(static_cast<double>(d) / static_cast<double>(dmin));
        }
        auto v = make(name, logs > 0 ? 1.0 + static_cast<double>(count) / logs
                                     : std::numeric_limits<double>::infinity());
        v.parameters["dmin"] = text(dmin);
        return v;
    }
    if (name == "gini") return make(name, gini_coefficient({degrees.begin(), degrees.end()}));
    if (name == "dentropyn") {
        if (m == 0 || n < 2) return make(name, kNaN);
        double h = 0.0;
        for (auto d : degrees) {
            if (d == 0) continue;
            const double p = static_cast<double>(d) / (2.0 * m);
            h -= p * std::log(p);
        }
        return make(name, h / std::log(nd));
    }
    if (name == "own") {
        const auto c = lorenz_curve({degrees.begin(), degrees.end()});
        if (m == 0) return make(name, kNaN);
        double p = kNaN;
        for (std::size_t i = 1; i < c.x.size(); ++i) {
            const double hi = c.y[i] - (1.0 - c.x[i]);
            if (hi < 0.0) continue;
            const double lo = c.y[i - 1] - (1.0 - c.x[i - 1]);
            const double t = -lo / (hi - lo);
            p = 1.0 - (c.x[i - 1] + t * (c.x[i] - c.x[i - 1]));
            break;
        }
        return make(name, p);
    }
    if (name == "assortativity") {
        // weighted Pearson correlation over (x, y) endpoint degree pairs
        double sw = 0, sx = 0, sy = 0;
        auto visit = [&](auto&& f) {
            for (NodeId u = 0; u < n; ++u) {
                if (g.is_directed()) {
                    const double x = static_cast<double>(g.in_out_degree(u).first);
                    for (const Neighbor& nb : g.out_neighbors(u))
                        f(x, static_cast<double>(g.in_out_degree(nb.node).second), static_cast<double>(nb.multiplicity));
                } else {
                    const double x = static_cast<double>(degrees[u]);
                    for (const Neighbor& nb : g.neighbors(u))
                        f(x, static_cast<double>(degrees[nb.node]),
                          static_cast<double>(nb.multiplicity) * (nb.node == u ? 2.0 : 1.0));
                }
            }
        };
        visit([&](double x, double y, double w) {
            sw += w;
            sx += w * x;
            sy += w * y;
        });
        if (sw == 0) return make(name, kNaN);
        const double mx = sx / sw;
        const double my = sy / sw;
        double cxy = 0, cxx = 0, cyy = 0;
        visit([&](double x, double y, double w) {
            cxy += w * (x - mx) * (y - my);
            cxx += w * (x - mx) * (x - mx);
            cyy += w * (y - my) * (y - my);
        });
        if (cxx == 0 || cyy == 0) return make(name, kNaN);
        return make(name, std::clamp(cxy / std::sqrt(cxx * cyy), -1.0, 1.0));
    }
    if (name == "clusco") {
        const double wedges = compute("twostars").value;
        return make(name, wedges > 0 ? 3.0 * static_cast<double>(triangles().total) / wedges : kNaN, ComputedOn::Simple);
    }
    if (name == "clusco2") {
        const auto& t = triangles();
        double sum = 0.0;
        std::uint64_t count = 0;
        for (NodeId u = 0; u < n; ++u) {
            const auto d = s.degree(u);
            if (o.clustering_degree_two && d < 2) continue;
            ++count;
            if (d > 1) sum += static_cast<double>(t.per_node[u]) / binomial(d, 2);
        }
        auto v = make(name, count ? sum / static_cast<double>(count) : kNaN, ComputedOn::Simple);
        if (o.clustering_degree_two) v.parameters["min_degree"] = "2";
        return v;
    }
    if (name == "clusco_signed" || name == "clusco_signed_rel") {
        // sum of triangle signs, sign of each aggregated pair weight
        auto sign = [&](NodeId a, NodeId b) {
            const auto nb = g.neighbors(a);
            auto it = std::lower_bound(nb.begin(), nb.end(), b, [](const Neighbor& x, NodeId y) { return x.node < y; });
            const double w = it != nb.end() && it->node == b ? it->weight : 0.0;
            return static_cast<int>((w > 0) - (w < 0));
        };
        const Rank rank{s};
        std::int64_t sigma = 0;
        std::vector<bool> mark(n, false);
        for (NodeId u = 0; u < n; ++u) {
            for (NodeId v : s.neighbors(u))
                if (rank(u, v)) mark[v] = true;
            for (NodeId v : s.neighbors(u)) {
                if (!rank(u, v)) continue;
                for (NodeId w : s.neighbors(v))
                    if (rank(v, w) && mark[w]) sigma += sign(u, v) * sign(v, w) * sign(w, u);
            }
            for (NodeId v : s.neighbors(u)) mark[v] = false;
        }
        if (name == "clusco_signed") {
            const double wedges = compute("twostars").value;
            return make(name, wedges > 0 ? 3.0 * static_cast<double>(sigma) / wedges : kNaN, ComputedOn::Simple);
        }
        const auto t = triangles().total;
        return make(name, t > 0 ? static_cast<double>(sigma) / static_cast<double>(t) : kNaN, ComputedOn::Simple);
    }
    if (name == "diam" || name == "radius" || name == "meandist" || name == "mediandist" || name == "diam_eff") {
        const auto& h = distances();
        auto v = make(name, 0.0, ComputedOn::LargestComponent);
        distance_parameters(v);
        const double total = static_cast<double>(h.pairs());
        if (name == "diam") {
            double d = h.max_eccentricity;
            if (h.method == Method::Estimated) {
                // double sweep from the highest-degree node
                std::vector<std::uint32_t> dist(n, std::numeric_limits<std::uint32_t>::max());
                std::vector<NodeId> queue;
                const auto& c = components();
                NodeId start = kNoNode;
                for (NodeId u = 0; u < n; ++u)
                    if (c.label[u] == c.largest() && (start == kNoNode || s.degree(u) > s.degree(start))) start = u;
                bfs(s, start, dist, queue, nullptr);
                const NodeId far = queue.back();
                d = std::max(d, static_cast<double>(bfs(s, far, dist, queue, nullptr)));
                v.parameters["bound"] = "lower";
            }
            v.value = d;
        } else if (name == "radius") {
            v.value = h.min_eccentricity;
            if (h.method == Method::Estimated) v.parameters["bound"] = "upper";
        } else if (name == "meandist") {
            double sum = 0.0;
            for (std::size_t d = 0; d < h.counts.size(); ++d) sum += static_cast<double>(d) * static_cast<double>(h.counts[d]);
            v.value = sum / total;
        } else if (name == "mediandist") {
            const std::uint64_t pos = (h.pairs() + 1) / 2;
            std::uint64_t run = 0;
            for (std::size_t d = 0; d < h.counts.size(); ++d) {
                run += h.counts[d];
                if (run >= pos) {
                    v.value = static_cast<double>(d);
                    break;
                }
            }
        } else {
            const double others = total - static_cast<double>(h.counts.empty() ? 0 : h.counts[0]);
            if (others <= 0) {
                v.value = kNaN;
            } else {
                double prev = 0.0;
                double run = 0.0;
                for (std::size_t d = 1; d < h.counts.size(); ++d) {
                    run += static_cast<double>(h.counts[d]);
                    const double cur = run / others;
                    if (cur >= 0.9) {
                        v.value = static_cast<double>(d - 1) + (0.9 - prev) / (cur - prev);
                        break;
                    }
                    prev = cur;
                }
            }
            v.parameters["quantile"] = "0.9";
        }
        return v;
    }
    if (name == "snorm") {
        auto v = make(name, 0.0);
        const Operator a = build_operator(g, MatrixKind::A);
        if (!g.is_directed()) {
            const auto* r = spectrum("A.abs", a, 1, SpectrumOrder::LargestAbsolute);
            v.value = std::abs(r->values[0].real());
            spectral_parameters(v, r);
            return v;
        }
        // largest singular value via the symmetric dilation [0 A; A^T 0]
        const auto& ma = a.matrix();
        const Eigen::Index dim = ma.rows();
        std::vector<Eigen::Triplet<double>> t;
        for (Eigen::Index r = 0; r < ma.outerSize(); ++r)
            for (Operator::Sparse::InnerIterator it(ma, r); it; ++it) {
                t.emplace_back(it.row(), dim + it.col(), it.value());
                t.emplace_back(dim + it.col(), it.row(), it.value());
            }
        Operator::Sparse big(2 * dim, 2 * dim);
        big.setFromTriplets(t.begin(), t.end());
        std::vector<NodeId> nodes(a.nodes().begin(), a.nodes().end());
        nodes.insert(nodes.end(), a.nodes().begin(), a.nodes().end());
        const Operator dil(MatrixKind::A, std::move(big), nodes, nodes, true);
        const auto* r = spectrum("A.dilation", dil, 1, SpectrumOrder::Largest);
        v.value = std::abs(r->values[0].real());
        spectral_parameters(v, r);
        v.parameters["matrix"] = "dilation";
        return v;
    }
    if (name == "alcon" || name == "conflict") {
        OperatorOptions opts;
        opts.keep = lcc_mask();
        const Operator l = build_operator(g, MatrixKind::L, opts);
        auto v = make(name, kNaN, ComputedOn::LargestComponent);
        if (name == "alcon") {
            const auto* r = spectrum("L.lcc.2", l, 2, SpectrumOrder::Smallest);
            if (r) v.value = std::max(0.0, r->values[1].real());
            spectral_parameters(v, r);
        } else {
            const auto* r = spectrum("L.lcc.1", l, 1, SpectrumOrder::Smallest);
            if (r) v.value = std::max(0.0, r->values[0].real());
            spectral_parameters(v, r);
        }
        return v;
    }
    if (name == "frustration") {
        auto v = make(name, 0.0, ComputedOn::Simple);
        v.value = frustration(v);
        return v;
    }
    if (name == "anticonflict") {
        const Graph& b = gbar();
        auto v = make(name, kNaN);
        if (b.volume() == 0) return v;
        const Operator k = build_operator(b, MatrixKind::K);
        const auto* r = spectrum("K.min", k, 1, SpectrumOrder::Smallest);
        if (r)
            v.value = static_cast<double>(k.rows()) / (8.0 * static_cast<double>(b.volume())) *
                      std::max(0.0, r->values[0].real());
        spectral_parameters(v, r);
        return v;
    }
    if (name == "nonbip") {
        const Graph& b = gbar();
        auto v = make(name, kNaN);
        if (b.volume() == 0) return v;
        const Operator a = build_operator(b, MatrixKind::A);
        const auto* hi = spectrum("Abar.max", a, 1, SpectrumOrder::Largest);
        const auto* lo = spectrum("Abar.min", a, 1, SpectrumOrder::Smallest);
        const double top = hi->values[0].real();
        if (top > 0) v.value = std::max(0.0, 1.0 - std::abs(lo->values[0].real() / top));
        spectral_parameters(v, hi);
        return v;
    }
    if (name == "nonbipn") {
        const Graph& b = gbar();
        auto v = make(name, kNaN);
        if (b.volume() == 0) return v;
        const Operator nn = build_operator(b, MatrixKind::N);
        const auto* r = spectrum("Nbar.min", nn, 1, SpectrumOrder::Smallest);
        if (r) v.value = std::max(0.0, r->values[0].real() + 1.0);
        spectral_parameters(v, r);
        return v;
    }
    throw UsageError("unknown statistic '" + std::string(name) + "'");
}

StatisticsSession::StatisticsSession(const Graph& g, StatsOptions options)
    : impl_(std::make_unique<Impl>(g, options)) {}

StatisticsSession::~StatisticsSession() = default;

std::string StatisticsSession::inapplicable_reason(std::string_view name) const {
    const Graph& g = impl_->g;
    if (std::find(kNames.begin(), kNames.end(), name) == kNames.end())
        return "unknown statistic '" + std::string(name) + "'";
    if ((name == "reciprocity" || name == "cocos") && !g.is_directed()) return "requires a directed network";
    if (name == "negativity" && !allows_negative(g.weights()))
        return "requires signed or rating weights, network is " + std::string(internal_name(g.weights()));
    if ((name == "clusco" || name == "clusco2") && g.is_bipartite()) return "undefined for bipartite networks";
    if (name == "clusco_signed" || name == "clusco_signed_rel") {
        if (g.is_bipartite()) return "undefined for bipartite networks";
        if (g.weights() != WeightType::Signed && g.weights() != WeightType::Multisigned)
            return "requires a signed network, network is " + std::string(internal_name(g.weights()));
    }
    if (name == "assortativity" && g.is_bipartite()) return "undefined for bipartite networks";
    if (name == "alcon" && allows_negative(g.weights())) return "requires nonnegative weights; see conflict";
    if (name == "conflict" && !allows_negative(g.weights())) return "requires signed or rating weights";
    return {};
}

StatisticValue StatisticsSession::compute(std::string_view name) {
    if (impl_->g.node_count() == 0) throw DomainError("statistics of an empty network");
    if (auto it = impl_->done.find(name); it != impl_->done.end()) return it->second;
    if (const std::string why = inapplicable_reason(name); !why.empty())
        throw UsageError(std::string(name) + ": " + why);
    StatisticValue v = impl_->compute(name);
    impl_->done.emplace(std::string(name), v);
    return v;
}

StatisticValue StatisticsSession::evaluate(std::string_view name) {
    StatisticValue v;
    v.name = std::string(name);
    v.value = kNaN;
    if (impl_->g.node_count() == 0) {
        v.unavailable = "empty network";
        return v;
    }
    if (std::string why = inapplicable_reason(name); !why.empty()) {
        v.unavailable = std::move(why);
        return v;
    }
    try {
        return compute(name);
    } catch (const ConvergenceError& e) {
        v.method = Method::Estimated;
        double worst = 0.0;
        for (double r : e.residuals()) worst = std::max(worst, r);
        v.parameters["error"] = "no-convergence";
        v.parameters["residual"] = text(worst);
    } catch (const std::exception& e) {
        v.unavailable = e.what();
    }
    return v;
}

std::vector<StatisticValue> StatisticsSession::compute_all(bool include_inapplicable) {
    std::vector<StatisticValue> out;
    for (std::string_view name : kNames) {
        if (!include_inapplicable && !inapplicable_reason(name).empty()) continue;
        out.push_back(evaluate(name));
    }
    return out;
}

StatisticValue compute_statistic(const Graph& g, std::string_view name, const StatsOptions& options) {
    return StatisticsSession(g, options).compute(name);
}

#define NETSTAT_STAT(NAME)                                                                         \
    StatisticValue stat_##NAME(const Graph& g) { return compute_statistic(g, #NAME); }
#define NETSTAT_STAT_OPT(NAME)                                                                     \
    StatisticValue stat_##NAME(const Graph& g, const StatsOptions& options) {                     \
        return compute_statistic(g, #NAME, options);                                               \
    }

NETSTAT_STAT(size)
NETSTAT_STAT(volume)
NETSTAT_STAT(uniquevolume)
NETSTAT_STAT(weight)
NETSTAT_STAT(avgdegree)
NETSTAT_STAT(fill)
NETSTAT_STAT(maxdegree)
NETSTAT_STAT(relmaxdegree)
NETSTAT_STAT(reciprocity)
NETSTAT_STAT(negativity)
NETSTAT_STAT(coco)
NETSTAT_STAT(cocorel)
NETSTAT_STAT(cocorelinv)
NETSTAT_STAT(cocos)
NETSTAT_STAT(twostars)
NETSTAT_STAT(threestars)
NETSTAT_STAT(fourstars)
NETSTAT_STAT(triangles)
NETSTAT_STAT(squares)
NETSTAT_STAT(tour4)
NETSTAT_STAT(power)
NETSTAT_STAT(gini)
NETSTAT_STAT(dentropyn)
NETSTAT_STAT(own)
NETSTAT_STAT(assortativity)
NETSTAT_STAT(clusco)
NETSTAT_STAT_OPT(clusco2)
NETSTAT_STAT(clusco_signed)
NETSTAT_STAT(clusco_signed_rel)
NETSTAT_STAT_OPT(diam)
NETSTAT_STAT_OPT(radius)
NETSTAT_STAT_OPT(meandist)
NETSTAT_STAT_OPT(mediandist)
NETSTAT_STAT_OPT(diam_eff)
NETSTAT_STAT_OPT(snorm)
NETSTAT_STAT_OPT(alcon)
NETSTAT_STAT_OPT(conflict)
NETSTAT_STAT_OPT(frustration)
NETSTAT_STAT_OPT(anticonflict)
NETSTAT_STAT_OPT(nonbip)
NETSTAT_STAT_OPT(nonbipn)

#undef NETSTAT_STAT
#undef NETSTAT_STAT_OPT

void write_statistics_tsv(std::ostream& out, std::span<const StatisticValue> values) {
    out << "# name\tvalue\tcomputed_on\tmethod\tparameters\n";
    for (const auto& v : values) {
        if (!v.unavailable.empty()) {
            std::string reason = v.unavailable;
            std::replace_if(reason.begin(), reason.end(), [](char c) { return c == '\t' || c == '\n'; }, ' ');
            out << v.name << "\tNA\t-\t-\treason=" << reason << '\n';
            continue;
        }
        out << v.name << '\t' << format_number(v.value) << '\t' << internal_name(v.computed_on) << '\t'
            << internal_name(v.method) << '\t';
        if (v.parameters.empty()) out << '-';
        bool first = true;
        for (const auto& [key, value] : v.parameters) {
            if (!first) out << ';';
            out << key << '=' << value;
            first = false;
        }
        out << '\n';
    }
}

}  // namespace netstat
