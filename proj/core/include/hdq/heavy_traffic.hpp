#pragma once

#include "hdq/diffusion.hpp"
#include "hdq/model.hpp"
#include "hdq/stationary.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hdq {

enum class Rounding { nearest, floor, ceil };

inline constexpr std::array<Rounding, 3> kAllRoundings{Rounding::nearest, Rounding::floor, Rounding::ceil};

std::string_view to_string(Rounding rounding) noexcept;
/// Throws hdq::Error(precondition) for unknown names.
Rounding parse_rounding(std::string_view name);

/// The n-th system has rho_i = 1 + b_i / sqrt(n) exactly,
/// rho12 = rho12_t + rho12_offset / sqrt(n) and ell = round(sqrt(n) ell_t).
struct ScalingSequence {
    DiffusionParams dp;
    double rho12_offset = -1.0;
    Rounding rounding = Rounding::nearest;
};

/// b1 = 1, b2 = -1, ell_d = 3, ell_u = 10, rho12 = 0.8 - 1/sqrt(n).
ScalingSequence reference_sequence();

/// Throws hdq::Error(infeasible_n) if n < 1 or the generated system has
/// rho1 <= 0, rho2 >= 1, rho12 <= 0, ell_d < 1 or ell_d >= ell_u.
Model nth_system(const ScalingSequence& seq, long long n);

/// (-b2 / (1 - rho2^(n))) * integral x nu(dx), i.e. sqrt(n) * mean of nu.
double approximate_mean(const ScalingSequence& seq, long long n);

/// Numeric table with named columns; rows follow the input order.
struct StudyTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    /// Index of a column by name; throws hdq::Error(precondition).
    std::size_t column(std::string_view name) const;
};

/// Columns n, rho1, rho2, rho12, exact_mean, approx_mean, rel_error.
StudyTable convergence_study(const ScalingSequence& seq, std::span<const long long> ns);

/// Columns b1, exact_mean, approx_mean; b1 replaces seq.dp.b1 row by row.
StudyTable b1_sweep(const ScalingSequence& seq, std::span<const double> b1_values, long long n);

/// Columns n, pi0_times_mean, limit, rel_gap where limit is
/// limit_sqrtn_pi0 * integral x nu(dx).
StudyTable corollary_check(const ScalingSequence& seq, std::span<const long long> ns);

/// Columns n, sqrtn_pi0, limit, rel_gap.
StudyTable sqrtn_pi0_check(const ScalingSequence& seq, std::span<const long long> ns);

/// For every rounding convention, exact E(L) at each n against the
/// reference values. Columns rounding (index into kAllRoundings), n, ell_d,
/// ell_u, exact_mean, reference, rel_error. Metadata "chosen_rounding" names
/// the convention with the smallest worst-case error.
StudyTable rounding_study(const ScalingSequence& seq, std::span<const long long> ns,
                          std::span<const double> reference_means);

/// max over the grid of |P(L / sqrt(n) <= x) - F(x)|.
double scaled_cdf_distance(const StationaryDistribution& exact, long long n, const LimitLaw& law,
                           std::span<const double> grid);
double scaled_cdf_distance(const ScalingSequence& seq, long long n, std::span<const double> grid);

} // namespace hdq
