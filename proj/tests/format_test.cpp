#include <gtest/gtest.h>

#include <random>

#include "netstat/konect_format.hpp"
#include "netstat/numeric_text.hpp"
#include "oracles.hpp"
#include "test_graphs.hpp"

namespace netstat {
namespace {

// Days since 1970-01-01 of a proleptic Gregorian date (civil calendar algorithm).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

FormatErrorKind error_kind(std::string_view text, const TagSet& tags = {}, std::size_t* line = nullptr) {
    try {
        parse_out(text, tags);
    } catch (const FormatError& e) {
        if (line) *line = e.line();
        return e.kind();
    }
    ADD_FAILURE() << "no FormatError for:\n" << text;
    return FormatErrorKind::BadMetaLine;
}

TEST(ParseOut, MinimalUndirected) {
    auto p = parse_out("% sym unweighted\n1\t2\n");
    EXPECT_EQ(p.graph.format(), Format::Undirected);
    EXPECT_EQ(p.graph.weights(), WeightType::Unweighted);
    EXPECT_EQ(p.graph.volume(), 1u);
    EXPECT_EQ(p.graph.node_count(), 2u);
    EXPECT_FALSE(p.header.has_counts());
}

TEST(ParseOut, ZeroWeightNeedsTag) {
    std::size_t line = 0;
    EXPECT_EQ(error_kind("% bip posweighted\n1 2 0\n", {}, &line), FormatErrorKind::WeightOutOfRange);
    EXPECT_EQ(line, 2u);
    auto p = parse_out("% bip posweighted\n1 2 0\n", {"#zeroweight"});
    EXPECT_EQ(p.graph.edges()[0].weight, 0.0);
}

TEST(ParseOut, TimestampIsUnixTime) {
    auto p = parse_out("% sym positive\n1 2 1 1262304000\n");
    ASSERT_TRUE(p.graph.has_timestamps());
    const double expected = static_cast<double>(days_from_civil(2010, 1, 1) * 86400);
    EXPECT_EQ(*p.graph.edges()[0].timestamp, expected);
    EXPECT_EQ(expected, 1262304000.0);
}

TEST(ParseOut, WhitespaceCrlfAndScientific) {
    auto p = parse_out("% asym posweighted\r\n% 2 3 3\r\n1   2 \t 1.5e1\r\n2 3 +0.25\r\n");
    EXPECT_EQ(p.graph.edges()[0].weight, 15.0);
    EXPECT_EQ(p.graph.edges()[1].weight, 0.25);
    EXPECT_EQ(*p.header.relationship_count, 2u);
}

TEST(ParseOut, BipartiteSides) {
    auto p = parse_out("% bip unweighted\n% 2 3 2\n1 1\n3 2\n");
    EXPECT_EQ(p.graph.left_count(), 3u);
    EXPECT_EQ(p.graph.right_count(), 2u);
    EXPECT_EQ(p.graph.edges()[1].dst, 4u);
    EXPECT_EQ(p.graph.external_id(4), 2u);
}

TEST(ParseOut, DeclaredCountsExtendNodes) {
    auto p = parse_out("% sym unweighted\n% 1 10 10\n1 2\n");
    EXPECT_EQ(p.graph.node_count(), 10u);
}

TEST(ParseOut, MixedTwoAndThreeColumns) {
    auto p = parse_out("% sym positive\n1 2\n2 3 4\n");
    EXPECT_EQ(p.graph.volume(), 5u);
}

TEST(ParseOut, ExtraCommentsKept) {
    auto p = parse_out("% sym unweighted\n% 1 2 2\n% source: somewhere\n1 2\n");
    ASSERT_EQ(p.header.comments.size(), 1u);
    EXPECT_EQ(p.header.comments[0], "% source: somewhere");
}

TEST(ParseOut, DistinctErrorKinds) {
    std::size_t line = 0;
    EXPECT_EQ(error_kind("1 2\n"), FormatErrorKind::MissingHeader);
    EXPECT_EQ(error_kind(""), FormatErrorKind::MissingHeader);
    EXPECT_EQ(error_kind("% sym heavy\n1 2\n"), FormatErrorKind::BadHeader);
    EXPECT_EQ(error_kind("% sym unweighted\n1 2\n3\n", {}, &line), FormatErrorKind::BadFieldCount);
    EXPECT_EQ(line, 3u);
    EXPECT_EQ(error_kind("% sym unweighted\n1 2 1 5 6\n"), FormatErrorKind::BadFieldCount);
    EXPECT_EQ(error_kind("% sym signed\n1 2\n"), FormatErrorKind::BadFieldCount);
    EXPECT_EQ(error_kind("% sym unweighted\n1 x\n"), FormatErrorKind::NonNumeric);
    EXPECT_EQ(error_kind("% sym signed\n1 2 abc\n"), FormatErrorKind::NonNumeric);
    EXPECT_EQ(error_kind("% sym unweighted\n0 2\n"), FormatErrorKind::BadNodeId);
    EXPECT_EQ(error_kind("% sym unweighted\n1.5 2\n"), FormatErrorKind::BadNodeId);
    EXPECT_EQ(error_kind("% sym dynamic\n1 2 2 100\n"), FormatErrorKind::WeightOutOfRange);
    EXPECT_EQ(error_kind("% sym positive\n1\t2\t\t100\n"), FormatErrorKind::TimestampWithoutWeight);
    EXPECT_EQ(error_kind("% sym positive\n1 2 1 100\n2 3 1\n", {}, &line), FormatErrorKind::MissingTimestamp);
    EXPECT_EQ(line, 3u);
    EXPECT_EQ(error_kind("% sym unweighted\n1 2\n3 4\n2 1\n", {}, &line), FormatErrorKind::DuplicatePair);
    EXPECT_EQ(line, 4u);
    EXPECT_EQ(error_kind("% sym unweighted\n1 2 3\n"), FormatErrorKind::DuplicatePair);
    EXPECT_EQ(error_kind("% sym unweighted\n2 2\n"), FormatErrorKind::LoopWithoutTag);
    EXPECT_EQ(error_kind("% sym unweighted\n% 1 3 3\n1 4\n"), FormatErrorKind::NodeOutOfRange);
    EXPECT_EQ(error_kind("% sym unweighted\n% 2 3 3\n1 2\n"), FormatErrorKind::CountMismatch);
    EXPECT_EQ(error_kind("% sym unweighted\n% 1 3 4\n1 2\n"), FormatErrorKind::BadHeader);
}

TEST(ParseOut, DirectedPairsAreOrdered) {
    auto p = parse_out("% asym unweighted\n1 2\n2 1\n");
    EXPECT_EQ(p.graph.volume(), 2u);
}

TEST(ParseOut, LoopsWithTag) {
    auto p = parse_out("% sym unweighted\n2 2\n", {"#loop"});
    EXPECT_TRUE(p.graph.has_loops());
}

TEST(WriteOut, AggregatedMultiplicity) {
    Graph g(Format::Undirected, WeightType::Positive, 2, {{0, 1, 3.0, {}}});
    EXPECT_EQ(write_out(g, make_header(g, false)), "% sym positive\n1\t2\t3\n");
    auto back = parse_out(write_out(g, make_header(g, false)));
    EXPECT_EQ(back.graph.pair_weight(0, 1), 3.0);
}

TEST(WriteOut, EmptyGraphHeaderOnly) {
    Graph g(Format::Undirected, WeightType::Unweighted, 7, {});
    EXPECT_EQ(write_out(g, make_header(g)), "% sym unweighted\n% 0 7 7\n");
    auto back = parse_out(write_out(g, make_header(g)));
    EXPECT_EQ(back.graph.node_count(), 7u);
}

TEST(WriteOut, DeclaredCountEqualsDataLines) {
    auto g = testing::random_graph(40, 100, 2);
    auto text = write_out(g, make_header(g));
    std::size_t data = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '%') ++data;
    EXPECT_EQ(data, 100u);
    EXPECT_NE(text.find("% 100 40 40\n"), std::string::npos);
}

TEST(WriteOut, NumbersNeverScientific) {
    Graph g(Format::Undirected, WeightType::Weighted, 3, {{0, 1, 1e-7, 1.5e9}, {1, 2, 2.5e20, 3.0}});
    auto text = write_out(g, make_header(g));
    const auto data = text.substr(text.find("\n1\t"));
    EXPECT_EQ(data.find('e'), std::string::npos) << data;
    auto back = parse_out(text);
    EXPECT_EQ(back.graph.edges()[0].weight, 1e-7);
    EXPECT_EQ(back.graph.edges()[1].weight, 2.5e20);
}

TEST(RoundTrip, EveryFormatAndWeightType) {
    std::uint64_t seed = 1;
    for (Format f : all_formats()) {
        for (WeightType t : all_weight_types()) {
            for (int rep = 0; rep < 6; ++rep, ++seed) {
                const bool ts = t == WeightType::Dynamic || rep % 2 == 1;
                TagSet tags;
                auto g = testing::random_typed(f, t, seed, ts, tags);
                // without a count line the node count is the largest id in use
                if (rep % 3 == 0) g = testing::tighten(g);
                Header h = make_header(g, rep % 3 != 0);
                if (rep == 4) h.comments = {"% note one", "%another"};
                auto text = write_out(g, h);
                auto back = parse_out(text, tags);
                EXPECT_EQ(back.header, h) << text;
                EXPECT_EQ(back.graph.format(), g.format());
                EXPECT_EQ(back.graph.weights(), g.weights());
                EXPECT_EQ(back.graph.left_count(), g.left_count());
                EXPECT_EQ(back.graph.right_count(), g.right_count());
                ASSERT_EQ(back.graph.edges().size(), g.edges().size());
                for (std::size_t i = 0; i < g.edges().size(); ++i) EXPECT_EQ(back.graph.edges()[i], g.edges()[i]);
                // writing again is byte-identical
                EXPECT_EQ(write_out(back.graph, back.header), text);
            }
        }
    }
}

TEST(NumericText, ShortestRoundTrip) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        const double x = d(rng);
        auto s = format_number(x);
        EXPECT_EQ(s.find('e'), std::string::npos);
        EXPECT_EQ(*parse_number(s), x);
    }
    EXPECT_EQ(format_number(3.0), "3");
    EXPECT_EQ(format_number(-0.5), "-0.5");
    EXPECT_FALSE(parse_number("nan"));
    EXPECT_FALSE(parse_number("1x"));
    EXPECT_FALSE(parse_number(""));
}

TEST(ParseMeta, KeyValues) {
    auto m = parse_meta("code: EL\ntags: #loop #incomplete\nurl: a,b\nname:  Spaced  \n");
    EXPECT_EQ(*m.get("code"), "EL");
    EXPECT_EQ(m.tags().size(), 2u);
    EXPECT_EQ(m.urls(), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(*m.get("name"), "Spaced");
}

TEST(ParseMeta, ValueAfterFirstColon) {
    auto m = parse_meta("url: http://example.org/x\n");
    EXPECT_EQ(*m.get("url"), "http://example.org/x");
}

TEST(ParseMeta, LineWithoutColonIsError) {
    try {
        parse_meta("name: X\nbroken line\n");
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_EQ(e.kind(), FormatErrorKind::BadMetaLine);
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(ParseMeta, UnknownKeysPreservedByteForByte) {
    const std::string text =
        "name: Example\n"
        "n3-prefix-m:   <http://x/>  \n"
        "\n"
        "weird key\t:\tvalue with  spaces \n"
        "long-description: caf\xC3\xA9 \xE2\x80\x93 text\n";
    auto m = parse_meta(text);
    EXPECT_EQ(write_meta(m), text);
    EXPECT_EQ(*m.get("weird key"), "value with  spaces");
}

Metadata compliant_meta() {
    return parse_meta(
        "name: Example\ncode: EX\ncategory: Social\nentity-names: person\nrelationship-names: friendship\n"
        "timeiso: 2005-10-08/2006-11-03\n");
}

TEST(Validate, CompliantDatasetHasNoFindings) {
    auto p = parse_out("% sym unweighted\n% 3 3 3\n1 2\n2 3\n3 1\n");
    auto meta = compliant_meta();
    auto f = validate(p.graph, p.header, &meta);
    EXPECT_TRUE(f.empty()) << f.front().message;
}

TEST(Validate, DirectedWithoutReciprocalPairs) {
    auto p = parse_out("% asym unweighted\n1 2\n2 3\n3 1\n");
    auto f = validate(p.graph, p.header, nullptr);
    ASSERT_FALSE(f.empty());
    EXPECT_EQ(f.front().severity, Severity::Error);
    EXPECT_NE(f.front().message.find("reciprocal"), std::string::npos);
    auto ok = parse_out("% asym unweighted\n1 2\n2 1\n2 3\n3 2\n3 1\n");
    for (const auto& x : validate(ok.graph, ok.header, nullptr)) EXPECT_NE(x.severity, Severity::Error) << x.message;
}

TEST(Validate, AcyclicTagChecked) {
    auto p = parse_out("% asym unweighted\n1 2\n2 3\n1 3\n");
    auto meta = parse_meta("tags: #acyclic\n");
    for (const auto& x : validate(p.graph, p.header, &meta)) EXPECT_NE(x.severity, Severity::Error) << x.message;
    auto cyc = parse_out("% asym unweighted\n1 2\n2 3\n3 1\n");
    auto f = validate(cyc.graph, cyc.header, &meta);
    EXPECT_TRUE(std::any_of(f.begin(), f.end(), [](const Finding& x) { return x.severity == Severity::Error; }));
}

TEST(Validate, KcoreImpliesIncomplete) {
    auto p = parse_out("% sym unweighted\n1 2\n2 3\n3 1\n");
    auto meta = parse_meta("tags: #kcore\n");
    auto f = validate(p.graph, p.header, &meta);
    ASSERT_FALSE(f.empty());
    EXPECT_EQ(f.front().severity, Severity::Error);
    EXPECT_EQ(f.front().line, 1u);
    auto lcc = parse_meta("tags: #lcc\n");
    EXPECT_FALSE(validate(p.graph, p.header, &lcc).empty());
    auto good = parse_meta("tags: #kcore #incomplete\n");
    for (const auto& x : validate(p.graph, p.header, &good)) EXPECT_NE(x.severity, Severity::Error);
}

TEST(Validate, MetaRules) {
    auto p = parse_out("% sym unweighted\n1 2\n2 3\n3 1\n");
    auto meta = parse_meta(
        "name: X\ncode: ABCD\ncategory: Gossip\nentity-names: a, b\nrelationship-names: r\ntags: #shiny\ntimeiso: 05/06\n");
    auto f = validate(p.graph, p.header, &meta);
    auto has = [&](Severity s, std::string_view text) {
        return std::any_of(f.begin(), f.end(), [&](const Finding& x) {
            return x.severity == s && x.message.find(text) != std::string::npos;
        });
    };
    EXPECT_TRUE(has(Severity::Error, "code"));
    EXPECT_TRUE(has(Severity::Warning, "category"));
    EXPECT_TRUE(has(Severity::Warning, "entity name"));
    EXPECT_TRUE(has(Severity::Warning, "#shiny"));
    EXPECT_TRUE(has(Severity::Warning, "timeiso"));
    auto utf = parse_meta("code: \xC3\x84\xC3\x96\n");
    auto g = validate(p.graph, p.header, &utf);
    EXPECT_FALSE(std::any_of(g.begin(), g.end(), [](const Finding& x) { return x.severity == Severity::Error; }));
}

TEST(Validate, ExclusionHeuristicsAreWarnings) {
    // bipartite stars: every left node has one neighbor
    auto p = parse_out("% bip unweighted\n1 1\n2 1\n3 2\n4 2\n");
    auto f = validate(p.graph, p.header, nullptr);
    ASSERT_FALSE(f.empty());
    for (const auto& x : f) EXPECT_EQ(x.severity, Severity::Warning);
    auto has = [&](std::string_view text) {
        return std::any_of(f.begin(), f.end(), [&](const Finding& x) { return x.message.find(text) != std::string::npos; });
    };
    EXPECT_TRUE(has("n-to-1"));
    EXPECT_TRUE(has("forest"));
}

TEST(Validate, HeaderMismatch) {
    auto p = parse_out("% sym unweighted\n1 2\n2 3\n3 1\n");
    Header h = p.header;
    h.relationship_count = 5;
    h.subject_count = 3;
    h.object_count = 3;
    auto f = validate(p.graph, h, nullptr);
    ASSERT_FALSE(f.empty());
    EXPECT_EQ(f.front().line, 2u);
}

}  // namespace
}  // namespace netstat
