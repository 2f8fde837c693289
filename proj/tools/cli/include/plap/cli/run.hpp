#pragma once

#include "plap/cli/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace plap::cli {

enum ExitCode : int { kOk = 0, kSolverFailure = 1, kHypothesisFail = 2 };

struct RunOutcome {
    int exitCode = kOk;
    std::vector<std::filesystem::path> artifacts;
    /// One-line summary for the terminal.
    std::string summary;
};

/// Runs one command. Solver failures are caught and written to
/// <dir>/error.json with exit code 1; the check command returns 2 when any
/// audited condition fails.
RunOutcome runCommand(const RunConfig& config);

}  // namespace plap::cli
