#include <gtest/gtest.h>

#include <numeric>
#include <queue>
#include <thread>

#include "netstat/error.hpp"
#include "netstat/graph.hpp"
#include "netstat/transforms.hpp"
#include "test_graphs.hpp"

namespace netstat {
namespace {

using testing::complete;
using testing::random_graph;
using testing::star;
using testing::undirected;
using DegreePair = std::pair<std::uint64_t, std::uint64_t>;

TEST(Degree, TriangleNodesHaveDegreeTwo) {
    auto g = complete(3);
    for (NodeId u = 0; u < 3; ++u) EXPECT_EQ(g.degree(u), 2u);
}

TEST(Degree, MultigraphCountsIncidentEdges) {
    Graph g(Format::Undirected, WeightType::Positive, 2, {{0, 1, 1.0, {}}, {0, 1, 1.0, {}}});
    EXPECT_EQ(g.degree(0), 2u);
    Graph agg(Format::Undirected, WeightType::Positive, 2, {{0, 1, 2.0, {}}});
    EXPECT_EQ(agg.degree(0), 2u);
}

TEST(Degree, StarCenter) {
    auto g = star(4);
    // oracle: count records touching the center
    std::size_t incident = 0;
    for (const auto& e : g.edges()) incident += (e.src == 0) + (e.dst == 0);
    EXPECT_EQ(incident, 4u);
    EXPECT_EQ(g.degree(0), incident);
}

TEST(Degree, UnknownNodeIsDomainError) {
    auto g = complete(3);
    EXPECT_THROW(g.degree(3), DomainError);
}

TEST(Degree, LoopCountsTwice) {
    Graph g(Format::Undirected, WeightType::Unweighted, 2, {{0, 0, 1.0, {}}, {0, 1, 1.0, {}}}, {"#loop"});
    EXPECT_EQ(g.degree(0), 3u);
    EXPECT_EQ(g.degree(0) + g.degree(1), 2 * g.volume());
}

TEST(InOutDegree, SingleArc) {
    Graph g(Format::Directed, WeightType::Unweighted, 2, testing::pairs({{1, 2}}));
    EXPECT_EQ(g.in_out_degree(0), DegreePair(1, 0));
    EXPECT_EQ(g.in_out_degree(1), DegreePair(0, 1));
}

TEST(InOutDegree, TwoCycle) {
    Graph g(Format::Directed, WeightType::Unweighted, 2, testing::pairs({{1, 2}, {2, 1}}));
    EXPECT_EQ(g.in_out_degree(0), DegreePair(1, 1));
}

TEST(InOutDegree, UndirectedIsUsageError) {
    EXPECT_THROW(complete(3).in_out_degree(0), UsageError);
}

TEST(InOutDegree, RandomDirectedBalance) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto g = random_graph(60, 300, seed, Format::Directed);
        std::uint64_t out = 0, in = 0;
        std::vector<std::uint64_t> out_oracle(60, 0);
        for (const auto& e : g.edges()) ++out_oracle[e.src];
        for (NodeId u = 0; u < 60; ++u) {
            auto [d1, d2] = g.in_out_degree(u);
            EXPECT_EQ(d1, out_oracle[u]);
            out += d1;
            in += d2;
        }
        EXPECT_EQ(out, g.volume());
        EXPECT_EQ(in, g.volume());
    }
}

TEST(NodeWeight, SignedSumsAbsoluteValues) {
    Graph g(Format::Undirected, WeightType::Signed, 3, {{0, 1, -1.0, {}}, {0, 2, 2.0, {}}});
    EXPECT_DOUBLE_EQ(g.node_weight(0), 3.0);
}

TEST(NodeWeight, UnweightedEqualsDegree) {
    auto g = complete(3);
    for (NodeId u = 0; u < 3; ++u) EXPECT_DOUBLE_EQ(g.node_weight(u), 2.0);
}

TEST(NodeWeight, RatingsAreCentered) {
    Graph g(Format::Undirected, WeightType::Weighted, 3, {{0, 1, 5.0, {}}, {0, 2, 3.0, {}}});
    EXPECT_DOUBLE_EQ(g.rating_mean(), 4.0);
    EXPECT_DOUBLE_EQ(g.node_weight(0), 2.0);
}

TEST(PairWeight, Cases) {
    auto k = undirected(3, {{1, 2}});
    EXPECT_EQ(k.pair_weight(0, 2), 0.0);
    Graph multi(Format::Undirected, WeightType::Positive, 2, {{0, 1, 2.0, {}}, {1, 0, 1.0, {}}});
    EXPECT_EQ(multi.pair_weight(0, 1), 3.0);
    // mean of {5, 2} is 3.5
    Graph rating(Format::Undirected, WeightType::Weighted, 3, {{0, 1, 5.0, {}}, {1, 2, 2.0, {}}});
    EXPECT_DOUBLE_EQ(rating.pair_weight(0, 1), 1.5);
    Graph multirating(Format::Undirected, WeightType::Multiweighted, 2, {{0, 1, 5.0, {}}, {0, 1, 1.0, {}}, {1, 0, 3.0, {}}});
    EXPECT_DOUBLE_EQ(multirating.pair_weight(0, 1), 0.0);
}

TEST(PairWeight, SymmetricOnUndirectedGraphs) {
    auto g = testing::random_signed(40, 150, 3);
    for (NodeId u = 0; u < 40; ++u)
        for (NodeId v = 0; v < 40; ++v) EXPECT_EQ(g.pair_weight(u, v), g.pair_weight(v, u));
}

TEST(Construction, RejectsInvalidRecords) {
    EXPECT_THROW(Graph(Format::Undirected, WeightType::Unweighted, 2, {{0, 0, 1.0, {}}}), DomainError);
    EXPECT_THROW(Graph(Format::Undirected, WeightType::Unweighted, 2, {{0, 1, 1.0, {}}, {1, 0, 1.0, {}}}), DomainError);
    EXPECT_THROW(Graph(Format::Undirected, WeightType::Posweighted, 2, {{0, 1, 0.0, {}}}), DomainError);
    EXPECT_NO_THROW(Graph(Format::Undirected, WeightType::Posweighted, 2, {{0, 1, 0.0, {}}}, {"#zeroweight"}));
    EXPECT_THROW(Graph(Format::Undirected, WeightType::Dynamic, 2, {{0, 1, 2.0, 1.0}}), DomainError);
    EXPECT_THROW(Graph(Format::Bipartite, WeightType::Unweighted, 1, 1, {{1, 0, 1.0, {}}}), DomainError);
    EXPECT_THROW(Graph(Format::Undirected, WeightType::Unweighted, 3, {{0, 1, 1.0, 5.0}, {1, 2, 1.0, {}}}), DomainError);
    EXPECT_THROW(Graph(Format::Undirected, WeightType::Unweighted, 2, {{0, 5, 1.0, {}}}), DomainError);
}

TEST(Handshake, RandomGraphsOfEveryType) {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        auto base = testing::random_pairs(50, 200, seed);
        std::mt19937_64 rng(seed);
        for (WeightType t : all_weight_types()) {
            std::vector<EdgeRecord> e;
            for (auto [u, v] : base) {
                double w = 1.0;
                if (t == WeightType::Positive) w = static_cast<double>(1 + rng() % 3);
                if (t == WeightType::Posweighted || t == WeightType::Multiposweighted) w = 0.5 + (rng() % 7);
                if (t == WeightType::Signed || t == WeightType::Multisigned) w = rng() % 2 ? 1.0 : -2.0;
                if (t == WeightType::Weighted || t == WeightType::Multiweighted) w = static_cast<double>(rng() % 5);
                std::optional<double> ts;
                if (t == WeightType::Dynamic) ts = static_cast<double>(rng() % 100);
                e.push_back({u, v, w, ts});
            }
            Graph g(Format::Undirected, t, 50, e);
            std::uint64_t sum = 0;
            for (NodeId u = 0; u < 50; ++u) sum += g.degree(u);
            EXPECT_EQ(sum, 2 * g.volume()) << internal_name(t);
        }
    }
}

TEST(StripWeights, SignedTriangleBecomesUnweighted) {
    Graph g(Format::Undirected, WeightType::Signed, 3, {{0, 1, -1.0, {}}, {1, 2, 1.0, {}}, {0, 2, -1.0, {}}});
    auto s = strip_weights(g);
    EXPECT_EQ(s.weights(), WeightType::Unweighted);
    EXPECT_EQ(s.node_count(), 3u);
    for (const auto& e : s.edges()) EXPECT_EQ(e.weight, 1.0);
    EXPECT_EQ(s.volume(), 3u);
}

TEST(StripWeights, MultiweightedKeepsDuplicates) {
    Graph g(Format::Undirected, WeightType::Multiweighted, 2, {{0, 1, 4.0, {}}, {0, 1, 2.0, {}}});
    auto s = strip_weights(g);
    EXPECT_EQ(s.weights(), WeightType::Positive);
    EXPECT_EQ(s.pair_weight(0, 1), 2.0);
}

TEST(StripWeights, UnweightedIsIdentityAndIdempotent) {
    auto g = random_graph(30, 60, 9);
    auto s = strip_weights(g);
    EXPECT_TRUE(std::equal(g.edges().begin(), g.edges().end(), s.edges().begin(), s.edges().end()));
    auto s2 = strip_weights(s);
    EXPECT_TRUE(std::equal(s2.edges().begin(), s2.edges().end(), s.edges().begin(), s.edges().end()));
}

TEST(Dedupe, CollapsesMultiplicity) {
    Graph g(Format::Undirected, WeightType::Positive, 2, {{0, 1, 1.0, {}}, {1, 0, 1.0, {}}, {0, 1, 1.0, {}}});
    auto d = dedupe(g);
    EXPECT_EQ(d.volume(), 1u);
    EXPECT_EQ(d.node_count(), 2u);
    auto dd = dedupe(d);
    EXPECT_TRUE(std::equal(d.edges().begin(), d.edges().end(), dd.edges().begin(), dd.edges().end()));
}

TEST(Dedupe, SimpleGraphMapsToItself) {
    auto g = complete(4);
    auto d = dedupe(g);
    EXPECT_TRUE(std::equal(g.edges().begin(), g.edges().end(), d.edges().begin(), d.edges().end()));
}

TEST(Dedupe, DynamicUsesLatestState) {
    Graph g(Format::Undirected, WeightType::Dynamic, 2, {{0, 1, 1.0, 1.0}, {0, 1, -1.0, 2.0}, {0, 1, 1.0, 3.0}});
    auto d = dedupe(g);
    EXPECT_EQ(d.volume(), 1u);
}

TEST(Absolute, TakesAbsoluteValues) {
    Graph g(Format::Undirected, WeightType::Signed, 3, {{0, 1, -1.0, {}}, {1, 2, 2.0, {}}});
    auto a = absolute(g);
    EXPECT_EQ(a.edges()[0].weight, 1.0);
    EXPECT_EQ(a.edges()[1].weight, 2.0);
    EXPECT_EQ(a.node_count(), 3u);
}

TEST(Absolute, PositiveSignedUnchanged) {
    Graph g(Format::Undirected, WeightType::Signed, 3, {{0, 1, 1.5, {}}, {1, 2, 2.0, {}}});
    auto a = absolute(g);
    EXPECT_EQ(a.edges()[0].weight, 1.5);
    EXPECT_EQ(a.edges()[1].weight, 2.0);
}

TEST(Absolute, RatingsCenteredFirst) {
    // mu = 3
    Graph g(Format::Undirected, WeightType::Weighted, 3, {{0, 1, 1.0, {}}, {1, 2, 5.0, {}}, {0, 2, 3.0, {}}});
    auto a = absolute(g);
    EXPECT_EQ(a.edges()[0].weight, 2.0);
    EXPECT_EQ(a.edges()[1].weight, 2.0);
    EXPECT_EQ(a.edges()[2].weight, 0.0);
    EXPECT_TRUE(a.has_tag("#zeroweight"));
}

TEST(Absolute, OtherTypesAreUsageErrors) {
    EXPECT_THROW(absolute(complete(3)), UsageError);
}

TEST(Negate, UnweightedBecomesSigned) {
    auto n = negate(undirected(2, {{1, 2}}));
    EXPECT_EQ(n.weights(), WeightType::Signed);
    EXPECT_EQ(n.edge_weight(n.edges()[0]), -1.0);
}

TEST(Negate, SignedFlipsAndIsInvolution) {
    Graph g(Format::Undirected, WeightType::Signed, 3, {{0, 1, -1.0, {}}, {1, 2, 2.0, {}}});
    auto n = negate(g);
    EXPECT_EQ(n.edges()[0].weight, 1.0);
    EXPECT_EQ(n.edges()[1].weight, -2.0);
    auto nn = negate(n);
    for (std::size_t i = 0; i < g.edges().size(); ++i) EXPECT_EQ(nn.edge_weight(nn.edges()[i]), g.edge_weight(g.edges()[i]));
}

TEST(Negate, RatingsNegateEffectiveWeights) {
    Graph g(Format::Undirected, WeightType::Weighted, 3, {{0, 1, 1.0, {}}, {1, 2, 4.0, {}}});
    auto n = negate(g);
    for (std::size_t i = 0; i < g.edges().size(); ++i)
        EXPECT_DOUBLE_EQ(n.edge_weight(n.edges()[i]), -g.edge_weight(g.edges()[i]));
}

TEST(Negate, MultigraphExpandsCounts) {
    Graph g(Format::Undirected, WeightType::Positive, 2, {{0, 1, 3.0, {}}});
    auto n = negate(g);
    EXPECT_EQ(n.weights(), WeightType::Multisigned);
    EXPECT_EQ(n.pair_weight(0, 1), -3.0);
    EXPECT_EQ(n.degree(0), 3u);
}

TEST(LatestState, Replay) {
    Graph add(Format::Undirected, WeightType::Dynamic, 2, {{0, 1, 1.0, 1.0}});
    EXPECT_EQ(latest_state(add).volume(), 1u);
    Graph removed(Format::Undirected, WeightType::Dynamic, 2, {{0, 1, 1.0, 1.0}, {0, 1, -1.0, 2.0}});
    EXPECT_EQ(latest_state(removed).volume(), 0u);
    Graph readd(Format::Undirected, WeightType::Dynamic, 2, {{0, 1, -1.0, 2.0}, {0, 1, 1.0, 3.0}, {1, 0, 1.0, 1.0}});
    EXPECT_EQ(latest_state(readd).volume(), 1u);
    // equal timestamps resolve by record order
    Graph tie(Format::Undirected, WeightType::Dynamic, 2, {{0, 1, 1.0, 5.0}, {0, 1, -1.0, 5.0}});
    EXPECT_EQ(latest_state(tie).volume(), 0u);
}

TEST(LatestState, NonDynamicIsUsageError) {
    EXPECT_THROW(latest_state(complete(3)), UsageError);
}

TEST(LargestComponent, ConnectedGraphIsItself) {
    auto g = complete(5);
    auto s = largest_connected_component(g);
    EXPECT_EQ(s.graph.node_count(), 5u);
    EXPECT_EQ(s.graph.volume(), g.volume());
}

TEST(LargestComponent, PicksBiggerComponent) {
    auto g = undirected(5, {{1, 2}, {4, 5}, {2, 3}});
    auto s = largest_connected_component(g);
    EXPECT_EQ(s.graph.node_count(), 3u);
    EXPECT_EQ(s.original, (std::vector<NodeId>{0, 1, 2}));
    EXPECT_EQ(s.index[3], kNoNode);
}

TEST(LargestComponent, BipartiteCountsBothSides) {
    Graph g(Format::Bipartite, WeightType::Unweighted, 3, 3, {{0, 3, 1.0, {}}, {1, 3, 1.0, {}}, {1, 4, 1.0, {}}, {2, 5, 1.0, {}}});
    auto s = largest_connected_component(g);
    EXPECT_EQ(s.graph.node_count(), 4u);
    EXPECT_EQ(s.graph.left_count(), 2u);
    EXPECT_EQ(s.graph.right_count(), 2u);
}

TEST(LargestComponent, EmptyGraphIsError) {
    Graph g(Format::Undirected, WeightType::Unweighted, 0, {});
    EXPECT_THROW(largest_connected_component(g), DomainError);
}

// BFS oracle independent of connected_components
std::vector<std::size_t> component_sizes_oracle(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<NodeId>> adj(n);
    for (const auto& e : g.edges()) {
        adj[e.src].push_back(e.dst);
        adj[e.dst].push_back(e.src);
    }
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> sizes;
    for (NodeId r = 0; r < n; ++r) {
        if (seen[r]) continue;
        std::queue<NodeId> q;
        q.push(r);
        seen[r] = true;
        std::size_t c = 0;
        while (!q.empty()) {
            auto u = q.front();
            q.pop();
            ++c;
            for (auto v : adj[u])
                if (!seen[v]) {
                    seen[v] = true;
                    q.push(v);
                }
        }
        sizes.push_back(c);
    }
    return sizes;
}

TEST(LargestComponent, PropertyConnectedAndMaximal) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::size_t n = 200 + seed * 37;
        auto g = random_graph(n, n * 6 / 10, seed);
        auto s = largest_connected_component(g);
        auto inner = component_sizes_oracle(s.graph);
        ASSERT_EQ(inner.size(), 1u);
        auto all = component_sizes_oracle(g);
        EXPECT_EQ(s.graph.node_count(), *std::max_element(all.begin(), all.end()));
    }
}

TEST(Transforms, PreserveNodeCounts) {
    auto g = testing::random_signed(80, 200, 4);
    EXPECT_EQ(strip_weights(g).node_count(), 80u);
    EXPECT_EQ(dedupe(g).node_count(), 80u);
    EXPECT_EQ(absolute(g).node_count(), 80u);
    EXPECT_EQ(negate(g).node_count(), 80u);
}

TEST(StrongComponents, MatchesSmallCases) {
    Graph g(Format::Directed, WeightType::Unweighted, 5, testing::pairs({{1, 2}, {2, 3}, {3, 1}, {3, 4}, {4, 5}}));
    EXPECT_EQ(largest_strong_component_size(g), 3u);
}

TEST(ConcurrentReads, IndexBuildIsSynchronized) {
    auto g = random_graph(2000, 8000, 5);
    std::vector<std::thread> threads;
    std::vector<std::uint64_t> sums(4, 0);
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&, t] {
            for (NodeId u = 0; u < g.node_count(); ++u) sums[t] += g.degree(u) + g.simple().degree(u);
        });
    for (auto& th : threads) th.join();
    for (int t = 1; t < 4; ++t) EXPECT_EQ(sums[t], sums[0]);
}

}  // namespace
}  // namespace netstat
