#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hdq {

enum class ErrorCode {
    non_positive_rate,
    level_order_violation,
    state_outside_space,
    domain_mismatch,
    precondition,
    unstable,
    infeasible_n,
    singular_system,
    divergent_sum,
};

/// Coarse grouping used by front ends to pick an exit status.
enum class ErrorCategory { invalid_argument, instability, numeric_failure };

constexpr ErrorCategory category_of(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::unstable:
    case ErrorCode::infeasible_n:
        return ErrorCategory::instability;
    case ErrorCode::singular_system:
    case ErrorCode::divergent_sum:
        return ErrorCategory::numeric_failure;
    default:
        return ErrorCategory::invalid_argument;
    }
}

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }
    ErrorCategory category() const noexcept { return category_of(code_); }

private:
    ErrorCode code_;
};

} // namespace hdq
