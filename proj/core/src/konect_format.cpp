#include "netstat/konect_format.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "netstat/numeric_text.hpp"
#include "netstat/transforms.hpp"

namespace netstat {

namespace {

constexpr std::string_view kWhitespace = " \t\r\n\v\f";

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(kWhitespace);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(kWhitespace);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        i = s.find_first_not_of(kWhitespace, i);
        if (i == std::string_view::npos) break;
        std::size_t j = s.find_first_of(kWhitespace, i);
        if (j == std::string_view::npos) j = s.size();
        out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string> split_list(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i <= s.size()) {
        std::size_t j = s.find(sep, i);
        if (j == std::string_view::npos) j = s.size();
        auto item = trim(s.substr(i, j - i));
        if (!item.empty()) out.emplace_back(item);
        i = j + 1;
    }
    return out;
}

void strip_line(std::string& line, std::size_t lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
}

[[noreturn]] void fail(FormatErrorKind kind, std::size_t line, const std::string& msg) {
    throw FormatError(kind, line, msg);
}

struct Row {
    std::uint64_t src;
    std::uint64_t dst;
    double weight;
    std::optional<double> timestamp;
    std::size_t line;
};

std::uint64_t parse_id(std::string_view tok, std::size_t line) {
    if (auto v = parse_unsigned(tok)) {
        if (*v == 0) fail(FormatErrorKind::BadNodeId, line, "node ids start at 1");
        return *v;
    }
    if (parse_number(tok)) fail(FormatErrorKind::BadNodeId, line, "node id must be a positive integer: " + std::string(tok));
    fail(FormatErrorKind::NonNumeric, line, "non-numeric field: " + std::string(tok));
}

double parse_value(std::string_view tok, std::size_t line) {
    if (auto v = parse_number(tok)) return *v;
    fail(FormatErrorKind::NonNumeric, line, "non-numeric field: " + std::string(tok));
}

void check_weight(WeightType type, double w, bool temporal, bool zero_ok, std::size_t line) {
    auto bad = [&](const std::string& msg) { fail(FormatErrorKind::WeightOutOfRange, line, msg); };
    switch (type) {
        case WeightType::Unweighted:
            if (w == std::floor(w) && w > 1.0)
                fail(FormatErrorKind::DuplicatePair, line, "aggregated edges in a network without multiple edges");
            if (w != 1.0) bad("unweighted edges carry weight 1");
            break;
        case WeightType::Positive:
            if (w < 1.0 || w != std::floor(w)) bad("edge count must be a positive integer");
            if (temporal && w != 1.0) bad("temporal networks cannot aggregate edges");
            break;
        case WeightType::Posweighted:
        case WeightType::Multiposweighted:
            if (w < 0.0 || (w == 0.0 && !zero_ok)) bad("weight must be positive (zero needs #zeroweight)");
            break;
        case WeightType::Signed:
        case WeightType::Multisigned:
            if (w == 0.0 && !zero_ok) bad("zero weight needs #zeroweight");
            break;
        case WeightType::Weighted:
        case WeightType::Multiweighted:
            break;
        case WeightType::Dynamic:
            if (w != 1.0 && w != -1.0) bad("dynamic events are +1 or -1");
            break;
    }
}

std::size_t utf8_length(std::string_view s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

bool is_timeiso_date(std::string_view s) {
    // YYYY[-MM[-DD]]
    auto digits = [](std::string_view t) {
        return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    if (s.size() != 4 && s.size() != 7 && s.size() != 10) return false;
    if (!digits(s.substr(0, 4))) return false;
    if (s.size() >= 7) {
        if (s[4] != '-' || !digits(s.substr(5, 2))) return false;
        const int month = (s[5] - '0') * 10 + (s[6] - '0');
        if (month < 1 || month > 12) return false;
    }
    if (s.size() == 10) {
        if (s[7] != '-' || !digits(s.substr(8, 2))) return false;
        const int day = (s[8] - '0') * 10 + (s[9] - '0');
        if (day < 1 || day > 31) return false;
    }
    return true;
}

bool is_timeiso(std::string_view s) {
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) return is_timeiso_date(s);
    return is_timeiso_date(s.substr(0, slash)) && is_timeiso_date(s.substr(slash + 1));
}

}  // namespace

std::string_view to_string(FormatErrorKind kind) {
    switch (kind) {
        case FormatErrorKind::MissingHeader: return "missing-header";
        case FormatErrorKind::BadHeader: return "bad-header";
        case FormatErrorKind::BadFieldCount: return "bad-field-count";
        case FormatErrorKind::NonNumeric: return "non-numeric";
        case FormatErrorKind::BadNodeId: return "bad-node-id";
        case FormatErrorKind::WeightOutOfRange: return "weight-out-of-range";
        case FormatErrorKind::TimestampWithoutWeight: return "timestamp-without-weight";
        case FormatErrorKind::MissingTimestamp: return "missing-timestamp";
        case FormatErrorKind::DuplicatePair: return "duplicate-pair";
        case FormatErrorKind::LoopWithoutTag: return "loop-without-tag";
        case FormatErrorKind::NodeOutOfRange: return "node-out-of-range";
        case FormatErrorKind::CountMismatch: return "count-mismatch";
        case FormatErrorKind::BadMetaLine: return "bad-meta-line";
    }
    return "unknown";
}

FormatError::FormatError(FormatErrorKind kind, std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      line_(line),
      message_(message) {}

Header make_header(const Graph& g, bool with_counts) {
    Header h;
    h.format = g.format();
    h.weights = g.weights();
    if (with_counts) {
        h.relationship_count = g.edges().size();
        h.subject_count = g.left_count();
        h.object_count = g.is_bipartite() ? g.right_count() : g.left_count();
    }
    return h;
}

ParsedNetwork parse_out(std::istream& in, const TagSet& tags) {
    Header header;
    bool have_header = false;
    std::vector<Row> rows;
    std::optional<bool> temporal;
    const bool loops_ok = tags.count("#loop") > 0;
    const bool zero_ok = tags.count("#zeroweight") > 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_line(line, lineno);
        const auto text = trim(line);
        if (!have_header) {
            if (text.empty() || text.front() != '%')
                fail(FormatErrorKind::MissingHeader, lineno, "first line must be `% FORMAT WEIGHTS`");
            const auto tok = split_ws(text.substr(1));
            if (tok.size() != 2) fail(FormatErrorKind::BadHeader, lineno, "expected `% FORMAT WEIGHTS`");
            auto format = parse_format(tok[0]);
            auto weights = parse_weight_type(tok[1]);
            if (!format) fail(FormatErrorKind::BadHeader, lineno, "unknown format " + std::string(tok[0]));
            if (!weights) fail(FormatErrorKind::BadHeader, lineno, "unknown weight type " + std::string(tok[1]));
            header.format = *format;
            header.weights = *weights;
            have_header = true;
            continue;
        }
        if (!text.empty() && text.front() == '%') {
            if (lineno == 2) {
                const auto tok = split_ws(text.substr(1));
                std::array<std::optional<unsigned long long>, 3> counts;
                if (tok.size() == 3) {
                    for (std::size_t i = 0; i < 3; ++i) counts[i] = parse_unsigned(tok[i]);
                }
                if (tok.size() == 3 && counts[0] && counts[1] && counts[2]) {
                    header.relationship_count = *counts[0];
                    header.subject_count = *counts[1];
                    header.object_count = *counts[2];
                    if (header.format != Format::Bipartite && *counts[1] != *counts[2])
                        fail(FormatErrorKind::BadHeader, lineno, "unipartite networks declare equal subject and object counts");
                    continue;
                }
            }
            header.comments.push_back(line);
            continue;
        }
        if (text.empty()) continue;

        // A tab-separated line with an empty weight column but a timestamp.
        {
            std::vector<std::string_view> tabs;
            std::string_view rest = line;
            for (std::size_t p; (p = rest.find('\t')) != std::string_view::npos; rest.remove_prefix(p + 1))
                tabs.push_back(rest.substr(0, p));
            tabs.push_back(rest);
            if (tabs.size() >= 4 && trim(tabs[2]).empty() && !trim(tabs[3]).empty())
                fail(FormatErrorKind::TimestampWithoutWeight, lineno, "timestamp given without a weight column");
        }
        const auto tok = split_ws(text);
        if (tok.size() < 2 || tok.size() > 4)
            fail(FormatErrorKind::BadFieldCount, lineno, "expected 2 to 4 fields, got " + std::to_string(tok.size()));
        Row row{parse_id(tok[0], lineno), parse_id(tok[1], lineno), 1.0, std::nullopt, lineno};
        if (tok.size() >= 3) row.weight = parse_value(tok[2], lineno);
        if (tok.size() == 4) row.timestamp = parse_value(tok[3], lineno);
        const bool has_ts = tok.size() == 4;
        if (!temporal) temporal = has_ts;
        if (*temporal != has_ts)
            fail(FormatErrorKind::MissingTimestamp, lineno, "timestamps must be given on every line or none");
        if (tok.size() == 2 && (carries_weight_values(header.weights) || header.weights == WeightType::Dynamic))
            fail(FormatErrorKind::BadFieldCount, lineno,
                 "weight column required for " + std::string(internal_name(header.weights)));
        check_weight(header.weights, row.weight, has_ts, zero_ok, lineno);
        if (header.format != Format::Bipartite && row.src == row.dst && !loops_ok)
            fail(FormatErrorKind::LoopWithoutTag, lineno, "loop without #loop tag");
        if (header.subject_count && row.src > *header.subject_count)
            fail(FormatErrorKind::NodeOutOfRange, lineno, "source id exceeds the declared node count");
        if (header.object_count && row.dst > *header.object_count)
            fail(FormatErrorKind::NodeOutOfRange, lineno, "target id exceeds the declared node count");
        rows.push_back(row);
    }
    if (!have_header) fail(FormatErrorKind::MissingHeader, 1, "empty file");

    if (!allows_multiple_edges(header.weights)) {
        std::vector<std::pair<std::pair<std::uint64_t, std::uint64_t>, std::size_t>> keys;
        keys.reserve(rows.size());
        for (const auto& r : rows) {
            auto key = std::make_pair(r.src, r.dst);
            if (header.format == Format::Undirected && key.first > key.second) std::swap(key.first, key.second);
            keys.push_back({key, r.line});
        }
        std::sort(keys.begin(), keys.end());
        std::size_t worst = 0;
        for (std::size_t i = 1; i < keys.size(); ++i)
            if (keys[i].first == keys[i - 1].first && (worst == 0 || keys[i].second < worst)) worst = keys[i].second;
        if (worst != 0) fail(FormatErrorKind::DuplicatePair, worst, "node pair already given");
    }
    if (header.relationship_count && *header.relationship_count != rows.size())
        fail(FormatErrorKind::CountMismatch, 2,
             "declared " + std::to_string(*header.relationship_count) + " data lines, found " +
                 std::to_string(rows.size()));

    std::uint64_t max_src = 0;
    std::uint64_t max_dst = 0;
    for (const auto& r : rows) {
        max_src = std::max(max_src, r.src);
        max_dst = std::max(max_dst, r.dst);
    }
    std::size_t left = 0;
    std::size_t right = 0;
    if (header.format == Format::Bipartite) {
        left = static_cast<std::size_t>(std::max<std::uint64_t>(header.subject_count.value_or(0), max_src));
        right = static_cast<std::size_t>(std::max<std::uint64_t>(header.object_count.value_or(0), max_dst));
    } else {
        left = static_cast<std::size_t>(
            std::max({header.subject_count.value_or(0), max_src, max_dst}));
    }
    std::vector<EdgeRecord> edges;
    edges.reserve(rows.size());
    for (const auto& r : rows) {
        EdgeRecord e;
        e.src = static_cast<NodeId>(r.src - 1);
        e.dst = static_cast<NodeId>(header.format == Format::Bipartite ? left + r.dst - 1 : r.dst - 1);
        e.weight = r.weight;
        e.timestamp = r.timestamp;
        edges.push_back(e);
    }
    Graph g(header.format, header.weights, left, right, std::move(edges), tags);
    return ParsedNetwork{std::move(g), std::move(header)};
}

ParsedNetwork parse_out(std::string_view text, const TagSet& tags) {
    std::istringstream in{std::string(text)};
    return parse_out(in, tags);
}

void write_out(std::ostream& out, const Graph& g, const Header& header) {
    out << "% " << internal_name(g.format()) << ' ' << internal_name(g.weights()) << '\n';
    if (header.has_counts()) {
        out << "% " << g.edges().size() << ' ' << g.left_count() << ' '
            << (g.is_bipartite() ? g.right_count() : g.left_count()) << '\n';
    }
    for (const auto& c : header.comments) out << c << '\n';
    int columns = 3;
    if (g.has_timestamps()) {
        columns = 4;
    } else if (g.weights() == WeightType::Unweighted || g.weights() == WeightType::Positive) {
        const bool all_one =
            std::all_of(g.edges().begin(), g.edges().end(), [](const EdgeRecord& e) { return e.weight == 1.0; });
        columns = all_one ? 2 : 3;
    }
    std::string buf;
    for (const auto& e : g.edges()) {
        buf.clear();
        buf += std::to_string(g.external_id(e.src));
        buf += '\t';
        buf += std::to_string(g.external_id(e.dst));
        if (columns >= 3) {
            buf += '\t';
            buf += format_number(e.weight);
        }
        if (columns == 4) {
            buf += '\t';
            buf += format_number(*e.timestamp);
        }
        buf += '\n';
        out << buf;
    }
}

std::string write_out(const Graph& g, const Header& header) {
    std::ostringstream out;
    write_out(out, g, header);
    return out.str();
}

std::optional<std::string_view> Metadata::get(std::string_view key) const {
    for (const auto& e : entries_)
        if (!e.key.empty() && e.key == key) return std::string_view(e.value);
    return std::nullopt;
}

void Metadata::set(std::string key, std::string value) {
    std::string raw = key + ": " + value;
    for (auto& e : entries_) {
        if (e.key == key) {
            e.value = std::move(value);
            e.raw = std::move(raw);
            return;
        }
    }
    entries_.push_back(MetaEntry{std::move(key), std::move(value), std::move(raw)});
}

TagSet Metadata::tags() const {
    TagSet out;
    if (auto v = get("tags"))
        for (auto t : split_ws(*v)) out.emplace(t);
    return out;
}

std::vector<std::string> Metadata::urls() const {
    auto v = get("url");
    return v ? split_list(*v, ',') : std::vector<std::string>{};
}

std::vector<std::string> Metadata::cites() const {
    auto v = get("cite");
    return v ? split_list(*v, ',') : std::vector<std::string>{};
}

std::vector<std::string> Metadata::entity_names() const {
    auto v = get("entity-names");
    return v ? split_list(*v, ',') : std::vector<std::string>{};
}

Metadata parse_meta(std::istream& in) {
    Metadata meta;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_line(line, lineno);
        if (trim(line).empty()) {
            meta.add(MetaEntry{"", "", line});
            continue;
        }
        const auto colon = line.find(':');
        if (colon == std::string::npos) fail(FormatErrorKind::BadMetaLine, lineno, "expected `key: value`");
        const auto key = trim(std::string_view(line).substr(0, colon));
        if (key.empty()) fail(FormatErrorKind::BadMetaLine, lineno, "empty key");
        meta.add(MetaEntry{std::string(key), std::string(trim(std::string_view(line).substr(colon + 1))), line});
    }
    return meta;
}

Metadata parse_meta(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_meta(in);
}

void write_meta(std::ostream& out, const Metadata& meta) {
    for (const auto& e : meta.entries()) out << e.raw << '\n';
}

std::string write_meta(const Metadata& meta) {
    std::ostringstream out;
    write_meta(out, meta);
    return out.str();
}

std::span<const std::string_view> known_tags() {
    static constexpr std::array<std::string_view, 10> kTags = {
        "#acyclic", "#incomplete", "#join", "#kcore", "#missingorientation",
        "#lcc", "#loop", "#nonreciprocal", "#regenerate", "#zeroweight",
    };
    return kTags;
}

std::span<const std::string_view> known_categories() {
    static constexpr std::array<std::string_view, 23> kCategories = {
        "Affiliation", "Animal", "Authorship", "Citation", "Coauthorship", "Communication",
        "Computer", "Feature", "Folksonomy", "HumanContact", "HumanSocial", "Hyperlink",
        "Infrastructure", "Interaction", "Lexical", "Metabolic", "Misc", "OnlineContact",
        "Rating", "Social", "Software", "Text", "Trophic",
    };
    return kCategories;
}

std::string_view to_string(Severity severity) {
    return severity == Severity::Error ? "error" : "warning";
}

std::vector<Finding> validate(const Graph& g, const Header& header, const Metadata* meta) {
    std::vector<Finding> out;
    auto error = [&](std::size_t line, std::string msg) { out.push_back({Severity::Error, line, std::move(msg)}); };
    auto warn = [&](std::size_t line, std::string msg) { out.push_back({Severity::Warning, line, std::move(msg)}); };

    // header vs graph
    if (header.format != g.format() || header.weights != g.weights())
        error(1, "header declares " + std::string(internal_name(header.format)) + " " +
                     std::string(internal_name(header.weights)) + " but the network is " +
                     std::string(internal_name(g.format())) + " " + std::string(internal_name(g.weights())));
    if (header.has_counts()) {
        const std::size_t n2 = g.is_bipartite() ? g.right_count() : g.left_count();
        if (*header.relationship_count != g.edges().size())
            error(2, "declared relationship count differs from the number of edge records");
        if (header.subject_count.value_or(0) != g.left_count() || header.object_count.value_or(0) != n2)
            error(2, "declared node counts differ from the network");
    }

    TagSet tags = g.tags();
    std::size_t tag_line = 0;
    if (meta) {
        auto mt = meta->tags();
        tags.insert(mt.begin(), mt.end());
        const auto entries = meta->entries();
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (entries[i].key == "tags") {
                tag_line = i + 1;
                break;
            }
    }
    auto has = [&](std::string_view t) { return tags.find(t) != tags.end(); };
    const auto known = known_tags();
    for (const auto& t : tags)
        if (std::find(known.begin(), known.end(), t) == known.end()) warn(tag_line, "unknown tag " + t);
    if (has("#kcore") && !has("#incomplete")) error(tag_line, "#kcore implies #incomplete");
    if (has("#lcc") && !has("#incomplete")) error(tag_line, "#lcc implies #incomplete");
    if (has("#acyclic") && !g.is_directed()) error(tag_line, "#acyclic is only allowed for directed networks");
    if (has("#nonreciprocal") && !g.is_directed())
        error(tag_line, "#nonreciprocal is only allowed for directed networks");
    if (has("#missingorientation") && g.format() != Format::Undirected)
        error(tag_line, "#missingorientation is only allowed for undirected networks");
    if (has("#loop") && g.is_bipartite()) error(tag_line, "#loop is only allowed for unipartite networks");
    if (has("#zeroweight")) {
        switch (g.weights()) {
            case WeightType::Posweighted:
            case WeightType::Multiposweighted:
            case WeightType::Signed:
            case WeightType::Multisigned:
                break;
            default:
                error(tag_line, "#zeroweight is only used for positive-weighted and signed networks");
        }
    }
    if (g.has_loops() && !has("#loop")) error(0, "network contains loops but lacks #loop");

    if (g.is_directed()) {
        const std::size_t n = g.node_count();
        std::size_t reciprocal = 0;
        for (NodeId u = 0; u < n; ++u) {
            for (const auto& nb : g.out_neighbors(u)) {
                if (nb.node <= u) continue;
                auto back = g.out_neighbors(nb.node);
                auto it = std::lower_bound(back.begin(), back.end(), u,
                                           [](const Neighbor& a, NodeId v) { return a.node < v; });
                if (it != back.end() && it->node == u)
                    ++reciprocal;
            }
        }
        if (has("#acyclic")) {
            // Kahn's algorithm; loops count as cycles
            std::vector<std::size_t> indeg(n, 0);
            for (NodeId u = 0; u < n; ++u)
                for (const auto& nb : g.out_neighbors(u)) ++indeg[nb.node];
            std::vector<NodeId> ready;
            for (NodeId u = 0; u < n; ++u)
                if (indeg[u] == 0) ready.push_back(u);
            std::size_t seen = 0;
            while (!ready.empty()) {
                const NodeId u = ready.back();
                ready.pop_back();
                ++seen;
                for (const auto& nb : g.out_neighbors(u))
                    if (--indeg[nb.node] == 0) ready.push_back(nb.node);
            }
            if (seen != n) error(tag_line, "#acyclic is set but the network contains a directed cycle");
        } else if (reciprocal < 2) {
            error(0, "directed network without #acyclic must contain at least two reciprocal edge pairs, found " +
                         std::to_string(reciprocal));
        }
        if (has("#nonreciprocal") && reciprocal > 0)
            error(tag_line, "#nonreciprocal is set but the network contains reciprocal edges");
    }

    if (g.weights() == WeightType::Dynamic && !g.has_timestamps())
        warn(0, "dynamic network without timestamps");

    if (meta) {
        const auto entries = meta->entries();
        auto line_of = [&](std::string_view key) -> std::size_t {
            for (std::size_t i = 0; i < entries.size(); ++i)
                if (entries[i].key == key) return i + 1;
            return 0;
        };
        for (std::string_view key : {"name", "code", "category", "entity-names", "relationship-names"})
            if (!meta->get(key)) warn(0, "missing meta key " + std::string(key));
        if (auto code = meta->get("code")) {
            const auto len = utf8_length(*code);
            if (len < 2 || len > 3) error(line_of("code"), "code must have two or three characters");
        }
        if (auto cat = meta->get("category")) {
            const auto cats = known_categories();
            if (std::find(cats.begin(), cats.end(), *cat) == cats.end())
                warn(line_of("category"), "nonstandard category " + std::string(*cat));
        }
        if (meta->get("entity-names")) {
            const std::size_t want = g.is_bipartite() ? 2 : 1;
            if (meta->entity_names().size() != want)
                warn(line_of("entity-names"), "expected " + std::to_string(want) + " entity name(s)");
        }
        if (auto t = meta->get("timeiso"); t && !is_timeiso(*t))
            warn(line_of("timeiso"), "timeiso must look like YYYY[-MM[-DD]][/YYYY[-MM[-DD]]]");
    }

    // structural heuristics
    const auto& s = g.simple();
    if (s.edge_count() > 0) {
        const auto comps = connected_components(g);
        std::size_t active_nodes = 0;
        std::vector<bool> active_comp(comps.sizes.size(), false);
        for (NodeId u = 0; u < g.node_count(); ++u) {
            if (s.degree(u) > 0) {
                ++active_nodes;
                active_comp[comps.label[u]] = true;
            }
        }
        const auto active_comps = static_cast<std::size_t>(std::count(active_comp.begin(), active_comp.end(), true));
        const std::size_t lcc = comps.sizes[comps.largest()];
        if (2 * lcc < g.node_count()) warn(0, "no giant connected component");
        if (s.edge_count() == active_nodes - active_comps) warn(0, "network is a tree or forest");
        if (g.is_bipartite()) {
            bool left_single = true;
            bool right_single = true;
            for (NodeId u = 0; u < g.node_count(); ++u) {
                if (s.degree(u) <= 1) continue;
                (g.is_left(u) ? left_single : right_single) = false;
            }
            if (left_single || right_single) warn(0, "bipartite network is an n-to-1 mapping (disconnected stars)");
        }
    }
    return out;
}

}  // namespace netstat
