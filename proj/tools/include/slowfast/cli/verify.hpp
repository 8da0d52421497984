#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slowfast/cli/config.hpp"

namespace slowfast::cli {

struct CheckResult {
    std::string name;
    bool passed = false;
    nlohmann::json detail;   ///< statistics on success, the falsifying witness on failure
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool all_passed() const;
    nlohmann::json to_json() const;
};

/// Names of every check, in report order.
std::vector<std::string> verify_check_names();

/**
 * Runs the invariant suite on the configured grid and solver. `verify.checks`
 * selects a comma-separated subset ("all" by default); `verify.fault` injects
 * a test fault ("stencil" swaps the Neumann boundary rows for a Dirichlet
 * ghost). Independent checks run concurrently; the report order is fixed.
 */
VerifyReport run_verify(const RunConfig& config);

}  // namespace slowfast::cli
