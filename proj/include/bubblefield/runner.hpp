#pragma once

// Executes a RunConfig and writes its output files.

#include "bubblefield/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace bubblefield::runner {

struct RunResult {
    std::vector<std::filesystem::path> files;  // in the order written
    std::vector<std::string> warnings;
};

/// Runs the configured pipeline into `out_dir` (created if missing). Files:
/// profile_<id>.csv and table.csv for near-field solves, snapshot_<k>_t<t>.txt
/// and bubbles.csv for far-field runs, oscillation.csv for E-field runs,
/// cd_mass.csv for the cylindrical reference, and manifest.ini last.
RunResult run(const config::RunConfig& cfg, const std::filesystem::path& out_dir);

struct TableRow {
    int id = 0;
    double dp_over_alpha = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// Near-field solve and ellipse fit for every bubble with a near-field setup.
/// Throws ConfigError when there is none.
std::vector<TableRow> table(const config::RunConfig& cfg);

/// Aligned columns, or CSV; both print values with 6 decimals.
std::string format_table(const std::vector<TableRow>& rows, bool csv);

/// "s,r,z,theta" rows at 17 significant digits.
std::string format_profile_csv(const young_laplace::BubbleProfile& profile);

}  // namespace bubblefield::runner
