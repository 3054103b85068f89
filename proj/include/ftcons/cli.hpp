#pragma once

#include "ftcons/gains.hpp"
#include "ftcons/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ftcons {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitError = 1,
    /// Gain condition unmet, or dominance violated.
    kExitVerdict = 2,
};

struct RunOptions {
    QConvention q_convention = QConvention::Tight;
    /// Overrides the config's seed when set.
    std::optional<std::uint64_t> seed;
};

/// Writes trace.csv, report.txt and certificate.txt into out_dir.
int cmd_simulate(const std::filesystem::path& config, const std::filesystem::path& out_dir,
                 const RunOptions& opts, std::ostream& out, std::ostream& err);

/// Prints the gain certificate; exit 2 when it fails under the chosen convention.
int cmd_check_gains(const std::filesystem::path& config, const RunOptions& opts, std::ostream& out,
                    std::ostream& err);

/// Closed loop against its comparison system. Writes primary.csv,
/// comparison.csv, g_tilde.csv, bound.csv and dominance.txt; exit 2 on any
/// dominance violation.
int cmd_compare(const std::filesystem::path& config, const std::filesystem::path& out_dir,
                const RunOptions& opts, std::ostream& out, std::ostream& err);

/// One run per value of beta, k, alpha_star or dt, run concurrently; writes sweep.csv.
int cmd_sweep(const std::filesystem::path& config, const std::string& parameter,
              const std::vector<std::string>& values, const std::filesystem::path& out_dir,
              const RunOptions& opts, std::ostream& out, std::ostream& err);

/// Builds and runs the three-agent ring counterexample; writes trace.csv and report.txt.
int cmd_counterexample(const std::filesystem::path& out_dir, std::size_t cycles, std::ostream& out,
                       std::ostream& err);

/// Applies one sweep cell to a config. Throws std::invalid_argument for an
/// unknown parameter or an invalid value.
void apply_sweep_value(ScenarioConfig& cfg, const std::string& parameter, Real value);

}  // namespace ftcons
