#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hdq::cli {

enum ExitCode : int { ok = 0, invalid_arguments = 1, instability = 2, numeric_failure = 3 };

/// Runs one verb. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CheckResult {
    std::string name;
    double max_residual = 0.0;
    double threshold = 0.0;

    bool passed() const { return max_residual < threshold; }
};

struct ValidationOptions {
    int grid = 50;
    std::uint64_t seed = 20240601;
    /// Name of a check whose closed-form input is perturbed (relative 1e-6,
    /// 1e-4 for diffusion_continuity) as a negative control; empty for none.
    std::string fault;
};

/// Checks in order: oracle_tv, balance_residual, normalization, continuity,
/// diffusion_continuity.
std::vector<CheckResult> run_validation(const ValidationOptions& opts);

} // namespace hdq::cli
