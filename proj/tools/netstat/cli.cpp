#include "cli.hpp"

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "netstat/error.hpp"
#include "netstat/konect_format.hpp"
#include "netstat/numeric_text.hpp"
#include "netstat/plots.hpp"
#include "netstat/spectral.hpp"
#include "netstat/stats.hpp"
#include "netstat/transforms.hpp"

namespace netstat::cli {

namespace fs = std::filesystem;

namespace {

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Dataset {
    std::string name;
    fs::path out_file;  ///< empty for standard input
    std::optional<fs::path> meta_file;
};

struct Loaded {
    Dataset source;
    ParsedNetwork parsed;
    std::optional<Metadata> meta;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path.string());
    return buf.str();
}

/// Writes through a temporary file in the target directory, then renames.
void write_atomically(const fs::path& path, const std::string& content) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." +
           std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw IoError("cannot write " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

std::string network_name(const fs::path& file) {
    const std::string base = file.filename().string();
    return base.rfind("out.", 0) == 0 ? base.substr(4) : base;
}

Dataset dataset_for(const fs::path& file) {
    Dataset d;
    d.name = network_name(file);
    d.out_file = file;
    const fs::path meta = file.parent_path() / ("meta." + d.name);
    if (fs::is_regular_file(meta)) d.meta_file = meta;
    return d;
}

std::vector<fs::path> out_files_in(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().filename().string().rfind("out.", 0) == 0)
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

/// A file, a directory of `out.*` files, or a directory of such directories.
std::vector<Dataset> discover(const std::string& path) {
    if (path == "-") return {Dataset{"stdin", {}, std::nullopt}};
    const fs::path p(path);
    std::error_code ec;
    if (fs::is_regular_file(p, ec)) return {dataset_for(p)};
    if (!fs::is_directory(p, ec)) throw IoError("cannot read " + path + ": no such file or directory");
    std::vector<Dataset> out;
    for (const auto& f : out_files_in(p)) out.push_back(dataset_for(f));
    if (!out.empty()) return out;
    std::vector<fs::path> subdirs;
    for (const auto& entry : fs::directory_iterator(p))
        if (entry.is_directory()) subdirs.push_back(entry.path());
    std::sort(subdirs.begin(), subdirs.end());
    for (const auto& d : subdirs)
        for (const auto& f : out_files_in(d)) out.push_back(dataset_for(f));
    if (out.empty()) throw UsageError(path + ": no out.* files found");
    return out;
}

Loaded load(const Dataset& d, const RunConfig& config) {
    TagSet tags(config.tags.begin(), config.tags.end());
    std::optional<Metadata> meta;
    if (d.meta_file) {
        meta = parse_meta(read_file(*d.meta_file));
        for (const auto& t : meta->tags()) tags.insert(t);
    }
    try {
        if (d.out_file.empty()) return Loaded{d, parse_out(std::cin, tags), std::move(meta)};
        const std::string text = read_file(d.out_file);
        return Loaded{d, parse_out(std::string_view(text), tags), std::move(meta)};
    } catch (const FormatError& e) {
        throw UsageError((d.out_file.empty() ? std::string("stdin") : d.out_file.string()) + ":" +
                         std::to_string(e.line()) + ": " + e.message());
    }
}

/// The network analyzed by statistics and non-temporal plots.
Graph analyzed(const Graph& g) { return g.weights() == WeightType::Dynamic ? latest_state(g) : g; }

std::optional<fs::path> output_root(const RunConfig& config) {
    if (!config.out.empty()) return fs::path(config.out);
    if (const char* env = std::getenv("NETSTAT_OUT"); env && *env) return fs::path(env);
    return std::nullopt;
}

StatsOptions stats_options(const RunConfig& config, unsigned jobs) {
    StatsOptions o;
    o.exact_threshold = config.exact_threshold;
    o.sample_sources = config.sample_sources;
    o.seed = config.seed;
    o.tol = config.tol;
    o.jobs = jobs;
    return o;
}

std::string join(std::span<const std::string_view> names) {
    std::string out;
    for (auto n : names) out += (out.empty() ? "" : " ") + std::string(n);
    return out;
}

std::vector<std::string> resolve_statistics(const RunConfig& config) {
    const auto valid = statistic_names();
    if (config.all || config.statistics.empty() ||
        std::find(config.statistics.begin(), config.statistics.end(), "all") != config.statistics.end())
        return {valid.begin(), valid.end()};
    for (const auto& n : config.statistics)
        if (std::find(valid.begin(), valid.end(), n) == valid.end())
            throw UsageError("unknown statistic '" + n + "'; valid names: " + join(valid));
    return config.statistics;
}

/// Exact kind names, or a prefix matching exactly one kind.
std::vector<PlotKind> resolve_plots(const RunConfig& config) {
    const auto kinds = all_plot_kinds();
    if (config.all || config.plots.empty() ||
        std::find(config.plots.begin(), config.plots.end(), "all") != config.plots.end())
        return {kinds.begin(), kinds.end()};
    std::vector<PlotKind> out;
    for (const auto& n : config.plots) {
        if (auto k = plot_kind_from_name(n)) {
            out.push_back(*k);
            continue;
        }
        std::vector<PlotKind> hits;
        for (PlotKind k : kinds)
            if (internal_name(k).rfind(n, 0) == 0) hits.push_back(k);
        if (hits.size() != 1) {
            std::vector<std::string_view> names;
            for (PlotKind k : kinds) names.push_back(internal_name(k));
            throw UsageError(std::string(hits.empty() ? "unknown" : "ambiguous") + " plot kind '" + n +
                             "'; valid kinds: " + join(names));
        }
        out.push_back(hits.front());
    }
    return out;
}

bool temporal(PlotKind k) {
    return k == PlotKind::TemporalDistribution || k == PlotKind::TemporalDistanceDistribution;
}

struct Report {
    std::string out;
    std::string err;
    int code = kOk;
};

std::string statistics_text(const Graph& raw, const std::vector<std::string>& names, const RunConfig& config,
                            unsigned jobs) {
    const Graph g = analyzed(raw);
    StatisticsSession session(g, stats_options(config, jobs));
    std::vector<StatisticValue> values;
    for (const auto& n : names) values.push_back(session.evaluate(n));
    std::ostringstream text;
    write_statistics_tsv(text, values);
    return text.str();
}

void emit_plots(const Loaded& l, const std::vector<PlotKind>& kinds, bool all, const fs::path& dir,
                const RunConfig& config, unsigned jobs, Report& report) {
    const Graph& raw = l.parsed.graph;
    const Graph state = analyzed(raw);
    PlotOptions opts;
    opts.k = config.k;
    opts.stats = stats_options(config, jobs);
    for (PlotKind kind : kinds) {
        const Graph& g = temporal(kind) ? raw : state;
        if (const auto why = plot_inapplicable_reason(g, kind); !why.empty()) {
            if (!all) report.err += l.source.name + ": skipped " + std::string(internal_name(kind)) + ": " + why + "\n";
            continue;
        }
        try {
            for (const auto& series : make_plots(g, kind, opts)) {
                std::ostringstream tsv;
                std::ostringstream svg;
                write_plot_tsv(tsv, series);
                render_svg(svg, series);
                const std::string stem = series.file_stem(l.source.name);
                write_atomically(dir / (stem + ".tsv"), tsv.str());
                write_atomically(dir / (stem + ".svg"), svg.str());
            }
        } catch (const IoError&) {
            throw;
        } catch (const std::exception& e) {
            report.err += l.source.name + ": failed " + std::string(internal_name(kind)) + ": " + e.what() + "\n";
            report.code = std::max<int>(report.code, kUsage);
        }
    }
}

/// Runs `task` on every dataset, several at a time, and merges the reports
/// in dataset order.
int for_each_dataset(const RunConfig& config, std::ostream& out, std::ostream& err,
                     const std::function<void(const Dataset&, unsigned, Report&)>& task) {
    std::vector<Dataset> datasets;
    for (const auto& p : config.datasets) {
        auto found = discover(p);
        datasets.insert(datasets.end(), found.begin(), found.end());
    }
    const unsigned workers = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(datasets.size())));
    const unsigned inner = std::max(1u, config.jobs / workers);
    std::vector<Report> reports(datasets.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < datasets.size(); i = next++) {
            try {
                task(datasets[i], inner, reports[i]);
            } catch (const IoError& e) {
                reports[i].err += std::string("error: ") + e.what() + "\n";
                reports[i].code = kIo;
            } catch (const std::exception& e) {
                reports[i].err += std::string("error: ") + e.what() + "\n";
                reports[i].code = std::max<int>(reports[i].code, kUsage);
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    int code = kOk;
    for (const auto& r : reports) {
        out << r.out;
        err << r.err;
        code = std::max(code, r.code);
    }
    return code;
}

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return for_each_dataset(config, out, err, [&](const Dataset& d, unsigned, Report& r) {
        std::ostringstream text;
        text << "# " << (d.out_file.empty() ? std::string("stdin") : d.out_file.string()) << '\n';
        text << "# severity\tline\tmessage\n";
        std::vector<Finding> findings;
        std::optional<Metadata> meta;
        try {
            TagSet tags(config.tags.begin(), config.tags.end());
            if (d.meta_file) {
                meta = parse_meta(read_file(*d.meta_file));
                for (const auto& t : meta->tags()) tags.insert(t);
            }
            ParsedNetwork parsed = d.out_file.empty() ? parse_out(std::cin, tags)
                                                      : parse_out(std::string_view(read_file(d.out_file)), tags);
            findings = validate(parsed.graph, parsed.header, meta ? &*meta : nullptr);
            if (!d.meta_file && !d.out_file.empty())
                findings.push_back({Severity::Warning, 0, "no meta." + d.name + " file"});
        } catch (const FormatError& e) {
            findings.push_back({Severity::Error, e.line(), e.message()});
        }
        bool failed = false;
        for (const auto& f : findings) {
            text << to_string(f.severity) << '\t' << f.line << '\t' << f.message << '\n';
            failed = failed || f.severity == Severity::Error;
        }
        r.out = text.str();
        r.code = failed ? kUsage : kOk;
    });
}

int cmd_stats(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto names = resolve_statistics(config);
    const auto root = output_root(config);
    return for_each_dataset(config, out, err, [&](const Dataset& d, unsigned jobs, Report& r) {
        const Loaded l = load(d, config);
        const std::string text = statistics_text(l.parsed.graph, names, config, jobs);
        if (root) write_atomically(*root / d.name / "statistics.tsv", text);
        else r.out = (config.datasets.size() > 1 ? "% network " + d.name + "\n" : std::string()) + text;
    });
}

int cmd_plot(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto kinds = resolve_plots(config);
    const bool all = config.all || config.plots.empty();
    const fs::path root = output_root(config).value_or(fs::path("."));
    return for_each_dataset(config, out, err, [&](const Dataset& d, unsigned jobs, Report& r) {
        const Loaded l = load(d, config);
        emit_plots(l, kinds, all, root / d.name, config, jobs, r);
    });
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    RunConfig stats = config;
    stats.all = false;
    const auto names = resolve_statistics(stats);
    const auto kinds = resolve_plots(stats);
    const bool all_plots = config.plots.empty() ||
                           std::find(config.plots.begin(), config.plots.end(), "all") != config.plots.end();
    const fs::path root = output_root(config).value_or(fs::path("."));
    return for_each_dataset(config, out, err, [&](const Dataset& d, unsigned jobs, Report& r) {
        const Loaded l = load(d, config);
        write_atomically(root / d.name / "statistics.tsv", statistics_text(l.parsed.graph, names, config, jobs));
        emit_plots(l, kinds, all_plots, root / d.name, config, jobs, r);
    });
}

struct SpectrumArgs {
    std::string matrix = "A";
    std::string order;
    bool vectors = false;
};

int cmd_spectrum(const RunConfig& config, const SpectrumArgs& args, std::ostream& out, std::ostream& err) {
    const auto kind = parse_matrix_kind(args.matrix);
    if (!kind) throw UsageError("unknown matrix '" + args.matrix + "'; valid: A B D N L Z P Pt S K");
    std::optional<SpectrumOrder> order;
    if (args.order == "largest-abs") order = SpectrumOrder::LargestAbsolute;
    else if (args.order == "largest") order = SpectrumOrder::Largest;
    else if (args.order == "smallest") order = SpectrumOrder::Smallest;
    else if (!args.order.empty()) throw UsageError("unknown order '" + args.order + "'; valid: largest-abs largest smallest");
    const auto root = output_root(config);
    return for_each_dataset(config, out, err, [&](const Dataset& d, unsigned, Report& r) {
        const Loaded l = load(d, config);
        const Graph g = analyzed(l.parsed.graph);
        SolverOptions so;
        so.tol = config.tol;
        so.seed = config.seed;
        SpectralResult result;
        if (*kind == MatrixKind::B) {
            const std::size_t dim = std::min(g.left_count(), g.right_count());
            result = svd_biadjacency(g, std::min(dim, config.k ? config.k : std::size_t{10}), so);
        } else {
            const Operator op = build_operator(g, *kind);
            const std::size_t k = std::min(op.rows(), config.k ? config.k : std::size_t{10});
            if (op.symmetric()) {
                const SpectrumOrder o = order.value_or(*kind == MatrixKind::L || *kind == MatrixKind::K
                                                           ? SpectrumOrder::Smallest
                                                           : SpectrumOrder::LargestAbsolute);
                result = eig_symmetric(op, k, o, so);
            } else {
                if (order) throw UsageError("--order applies to symmetric matrices only");
                result = eig_general(op, k, so);
            }
        }
        std::ostringstream values;
        write_spectrum_tsv(values, result);
        std::ostringstream vectors;
        if (args.vectors) write_vectors_tsv(vectors, result, g);
        const std::string m(internal_name(*kind));
        if (root) {
            write_atomically(*root / d.name / ("spectra." + m + ".tsv"), values.str());
            if (args.vectors) write_atomically(*root / d.name / ("spectra." + m + ".vectors.tsv"), vectors.str());
        } else {
            r.out = values.str() + vectors.str();
        }
    });
}

int cmd_transform(const RunConfig& config, const std::string& name, std::ostream& out, std::ostream& err) {
    static const std::vector<std::string> kTransforms = {"unweighted", "simple", "absolute",
                                                         "negate",     "lcc",    "latest-state"};
    if (std::find(kTransforms.begin(), kTransforms.end(), name) == kTransforms.end())
        throw UsageError("unknown transform '" + name + "'; valid: unweighted simple absolute negate lcc latest-state");
    const auto root = output_root(config);
    return for_each_dataset(config, out, err, [&](const Dataset& d, unsigned, Report& r) {
        const Loaded l = load(d, config);
        const Graph& g = l.parsed.graph;
        Graph t = name == "unweighted" ? strip_weights(g)
                  : name == "simple"   ? dedupe(g)
                  : name == "absolute" ? absolute(g)
                  : name == "negate"   ? negate(g)
                  : name == "lcc"      ? largest_connected_component(g).graph
                                       : latest_state(g);
        const std::string text = write_out(t, make_header(t));
        if (!root) {
            r.out = text;
            return;
        }
        const std::string network = d.name + "-" + name;
        const fs::path dir = *root / network;
        write_atomically(dir / ("out." + network), text);
        Metadata meta = l.meta.value_or(Metadata{});
        if (!t.tags().empty()) {
            std::string tags;
            for (const auto& tag : t.tags()) tags += (tags.empty() ? "" : " ") + tag;
            meta.set("tags", tags);
        }
        if (!meta.entries().empty()) write_atomically(dir / ("meta." + network), write_meta(meta));
    });
}

void add_common(CLI::App* cmd, RunConfig& config) {
    cmd->add_option("--out", config.out, "Output directory (default $NETSTAT_OUT)");
    cmd->add_option("--tag", config.tags, "Extra meta tag such as #loop, for inputs without a meta file");
    cmd->add_option("--jobs", config.jobs, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", config.seed, "Random seed");
}

void add_numeric(CLI::App* cmd, RunConfig& config) {
    cmd->add_option("--exact-threshold", config.exact_threshold,
                    "Exact all-pairs distances up to this many nodes in the largest component")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--sample-sources", config.sample_sources, "BFS sources above the exact threshold")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol", config.tol, "Eigensolver relative residual bound")->check(CLI::PositiveNumber);
    cmd->add_option("--k", config.k, "Eigenvalues to compute")->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Network statistics, spectra and plots for out.*/meta.* datasets", "netstat"};
    app.require_subcommand(1);
    RunConfig config;
    SpectrumArgs spectrum;
    std::string transform;
    std::string dataset;

    auto* validate_cmd = app.add_subcommand("validate", "Check dataset files; findings as TSV");
    validate_cmd->add_option("paths", config.datasets, "out.* files or dataset directories")->required();
    validate_cmd->add_option("--tag", config.tags, "Extra meta tag");

    auto* stats_cmd = app.add_subcommand("stats", "Compute statistics");
    stats_cmd->add_option("dataset", dataset, "out.* file, dataset directory or - for stdin")->required();
    stats_cmd->add_option("names", config.statistics, "Statistic names");
    stats_cmd->add_option("--stats", config.statistics, "Statistic names, or all")->delimiter(',');
    stats_cmd->add_flag("--all", config.all, "Every statistic; inapplicable ones as NA rows");
    add_common(stats_cmd, config);
    add_numeric(stats_cmd, config);

    auto* plot_cmd = app.add_subcommand("plot", "Write plot data (TSV) and renderings (SVG)");
    plot_cmd->add_option("dataset", dataset, "out.* file, dataset directory or - for stdin")->required();
    plot_cmd->add_option("kinds", config.plots, "Plot kinds or unique prefixes");
    plot_cmd->add_option("--plots", config.plots, "Plot kinds, or all")->delimiter(',');
    plot_cmd->add_flag("--all", config.all, "Every applicable plot kind");
    add_common(plot_cmd, config);
    add_numeric(plot_cmd, config);

    auto* run_cmd = app.add_subcommand("run", "Statistics and plots for one or more datasets");
    run_cmd->add_option("datasets", config.datasets, "out.* files or directories")->required();
    run_cmd->add_option("--stats", config.statistics, "Statistic names (default all)")->delimiter(',');
    run_cmd->add_option("--plots", config.plots, "Plot kinds (default all)")->delimiter(',');
    add_common(run_cmd, config);
    add_numeric(run_cmd, config);

    auto* spectrum_cmd = app.add_subcommand("spectrum", "Top-k eigenvalues of a characteristic matrix");
    spectrum_cmd->add_option("dataset", dataset, "out.* file, dataset directory or - for stdin")->required();
    spectrum_cmd->add_option("--matrix", spectrum.matrix, "A B D N L Z P Pt S K");
    spectrum_cmd->add_option("--order", spectrum.order, "largest-abs, largest or smallest");
    spectrum_cmd->add_flag("--vectors", spectrum.vectors, "Also write eigenvectors");
    add_common(spectrum_cmd, config);
    add_numeric(spectrum_cmd, config);

    auto* transform_cmd = app.add_subcommand("transform", "Write a transformed dataset");
    transform_cmd->add_option("dataset", dataset, "out.* file, dataset directory or - for stdin")->required();
    transform_cmd->add_option("name", transform, "unweighted simple absolute negate lcc latest-state")->required();
    add_common(transform_cmd, config);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        for (auto* sub : app.get_subcommands())
            if (sub->parsed()) {
                err << sub->help();
                return kUsage;
            }
        err << app.help();
        return kUsage;
    }

    if (!dataset.empty()) config.datasets.push_back(dataset);
    try {
        if (validate_cmd->parsed()) return cmd_validate(config, out, err);
        if (stats_cmd->parsed()) return cmd_stats(config, out, err);
        if (plot_cmd->parsed()) return cmd_plot(config, out, err);
        if (run_cmd->parsed()) return cmd_run(config, out, err);
        if (spectrum_cmd->parsed()) return cmd_spectrum(config, spectrum, out, err);
        if (transform_cmd->parsed()) return cmd_transform(config, transform, out, err);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace netstat::cli
