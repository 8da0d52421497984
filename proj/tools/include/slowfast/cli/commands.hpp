#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "slowfast/cli/config.hpp"

namespace slowfast::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_error = 1,
    exit_inconclusive = 2,  ///< inconclusive classification or a falsified check
};

/// Artifacts go to output.dir, which is created if missing.
int cmd_solve(const RunConfig& config, std::ostream& log);
int cmd_classify(const RunConfig& config, std::ostream& log);
int cmd_separator(const RunConfig& config, std::ostream& log);
int cmd_scan(const RunConfig& config, std::ostream& log);
int cmd_verify(const RunConfig& config, std::ostream& log);

std::vector<std::string> command_names();

/// Full command line without the program name:
///   <command> [--config FILE] [--dotted.key VALUE | --dotted.key=VALUE]...
/// Returns the exit code; errors are reported on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace slowfast::cli
