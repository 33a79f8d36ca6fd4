#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "netstat/graph.hpp"

namespace netstat {

/// Comment header of an `out.*` file.
///
///     % FORMAT WEIGHTS
///     % RELATIONSHIP-COUNT SUBJECT-COUNT OBJECT-COUNT      (optional)
///
/// Further comment lines are kept verbatim and re-emitted after these two.
struct Header {
    Format format = Format::Undirected;
    WeightType weights = WeightType::Unweighted;
    std::optional<std::uint64_t> relationship_count;
    std::optional<std::uint64_t> subject_count;
    std::optional<std::uint64_t> object_count;
    std::vector<std::string> comments;

    bool has_counts() const { return relationship_count.has_value(); }
    bool operator==(const Header&) const = default;
};

/// Header describing g, with the count line when `with_counts` is set.
Header make_header(const Graph& g, bool with_counts = true);

enum class FormatErrorKind {
    MissingHeader,
    BadHeader,
    BadFieldCount,
    NonNumeric,
    BadNodeId,
    WeightOutOfRange,
    TimestampWithoutWeight,
    MissingTimestamp,
    DuplicatePair,
    LoopWithoutTag,
    NodeOutOfRange,
    CountMismatch,
    BadMetaLine,
};

std::string_view to_string(FormatErrorKind kind);

/// Validation failure while reading a dataset file; `line` is 1-based.
class FormatError : public std::runtime_error {
public:
    FormatError(FormatErrorKind kind, std::size_t line, const std::string& message);

    FormatErrorKind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& message() const noexcept { return message_; }

private:
    FormatErrorKind kind_;
    std::size_t line_;
    std::string message_;
};

struct ParsedNetwork {
    Graph graph;
    Header header;
};

/// Reads an `out.*` edge file. `tags` come from the accompanying meta file
/// and enable loops (`#loop`) and zero weights (`#zeroweight`).
ParsedNetwork parse_out(std::istream& in, const TagSet& tags = {});
ParsedNetwork parse_out(std::string_view text, const TagSet& tags = {});

/// Writes the header lines then one tab-separated line per edge record.
/// The count line, when the header carries one, is recomputed from g.
void write_out(std::ostream& out, const Graph& g, const Header& header);
std::string write_out(const Graph& g, const Header& header);

struct MetaEntry {
    std::string key;
    std::string value;
    std::string raw;  ///< original line, re-emitted as is
};

/// Key/value metadata of a `meta.*` file. Entry order and unknown keys are kept.
class Metadata {
public:
    std::span<const MetaEntry> entries() const { return entries_; }
    std::optional<std::string_view> get(std::string_view key) const;
    /// Replaces the first entry with this key, or appends one.
    void set(std::string key, std::string value);
    void add(MetaEntry entry) { entries_.push_back(std::move(entry)); }

    TagSet tags() const;
    std::vector<std::string> urls() const;
    std::vector<std::string> cites() const;
    std::vector<std::string> entity_names() const;

private:
    std::vector<MetaEntry> entries_;
};

Metadata parse_meta(std::istream& in);
Metadata parse_meta(std::string_view text);
void write_meta(std::ostream& out, const Metadata& meta);
std::string write_meta(const Metadata& meta);

std::span<const std::string_view> known_tags();
std::span<const std::string_view> known_categories();

enum class Severity { Error, Warning };
std::string_view to_string(Severity severity);

struct Finding {
    Severity severity = Severity::Error;
    std::size_t line = 0;  ///< 0 when not tied to a line
    std::string message;

    bool operator==(const Finding&) const = default;
};

/// Dataset-level rules: tag consistency, reciprocity requirement of directed
/// networks, header/graph agreement, metadata keys, and the structural
/// exclusion heuristics (reported as warnings). `meta` may be null.
std::vector<Finding> validate(const Graph& g, const Header& header, const Metadata* meta);

}  // namespace netstat
