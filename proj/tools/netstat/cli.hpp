#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace netstat::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2 };

/// Settings shared by all subcommands.
struct RunConfig {
    std::vector<std::string> datasets;
    std::vector<std::string> statistics;
    std::vector<std::string> plots;
    bool all = false;
    /// Empty: $NETSTAT_OUT, then standard output (stats, spectrum,
    /// transform) or the working directory (plot, run).
    std::string out;
    std::size_t exact_threshold = 20000;
    std::size_t sample_sources = 1000;
    double tol = 1e-8;
    std::size_t k = 0;
    std::uint64_t seed = 42;
    unsigned jobs = 1;
    std::vector<std::string> tags;
};

/// Parses `args` (without the program name) and runs the subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netstat::cli
