#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cdr/bootstrap.hpp"
#include "cdr/tail.hpp"

namespace cdr::cli {

enum class OutputFormat { json, csv, table };

struct RunConfig {
    std::string input;
    bool tail = false;
    std::size_t i_ult = 0;
    TailDistribution tail_dist = TailDistribution::normal;
    bool drop_last_column = false;
    std::size_t iterations = 100000;
    std::uint64_t seed = 0;
    std::vector<BootstrapMode> modes{BootstrapMode::full, BootstrapMode::estimation_only,
                                     BootstrapMode::process_only};
    std::size_t workers = 1;
    OutputFormat format = OutputFormat::json;
    std::optional<std::string> output;
    std::optional<std::string> dump_samples;
    bool per_year = false;

    /// Throws std::invalid_argument when inconsistent (e.g. tail without i_ult).
    void validate() const;
};

/// Seed used for a given mode: the run seed plus 0/1/2 for full/estimation/process,
/// so the modes of one run draw from distinct streams.
std::uint64_t seed_for(std::uint64_t seed, BootstrapMode mode);

/// Path of the sample dump for one mode; the mode name is inserted before the
/// extension when several modes are run.
std::string dump_path_for(const std::string& base, BootstrapMode mode, bool multiple_modes);

/// Default worker count: CDR_WORKERS when set to a positive integer, else 1.
std::size_t default_workers();

struct CommandOutput {
    std::string data;
    std::vector<std::string> warnings;
};

CommandOutput cmd_fit(const RunConfig& cfg);
CommandOutput cmd_closed_form(const RunConfig& cfg);
/// Also writes sample dumps when requested.
CommandOutput cmd_bootstrap(const RunConfig& cfg);

/// Entry point. args excludes the program name. Data goes to `out` (or the
/// --output file), diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdr::cli
