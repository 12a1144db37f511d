#include "hdq/heavy_traffic.hpp"

#include "hdq/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hdq {

namespace {

int scale_level(double scaled, double root, Rounding rounding)
{
    const double x = root * scaled;
    switch (rounding) {
    case Rounding::nearest:
        return static_cast<int>(std::lround(x));
    case Rounding::floor:
        return static_cast<int>(std::floor(x));
    case Rounding::ceil:
        return static_cast<int>(std::ceil(x));
    }
    return 0;
}

[[noreturn]] void infeasible(long long n, const std::string& why)
{
    throw Error(ErrorCode::infeasible_n, "n = " + std::to_string(n) + ": " + why);
}

} // namespace

std::string_view to_string(Rounding rounding) noexcept
{
    switch (rounding) {
    case Rounding::nearest:
        return "nearest";
    case Rounding::floor:
        return "floor";
    case Rounding::ceil:
        return "ceil";
    }
    return "?";
}

Rounding parse_rounding(std::string_view name)
{
    for (auto r : kAllRoundings)
        if (to_string(r) == name)
            return r;
    throw Error(ErrorCode::precondition, "unknown rounding '" + std::string(name) + "'");
}

ScalingSequence reference_sequence()
{
    return ScalingSequence{DiffusionParams{1.0, -1.0, 3.0, 10.0, 0.8}, -1.0, Rounding::nearest};
}

Model nth_system(const ScalingSequence& seq, long long n)
{
    if (n < 1)
        infeasible(n, "n must be positive");
    const double root = std::sqrt(static_cast<double>(n));
    const Ratios r{1.0 + seq.dp.b1 / root, 1.0 + seq.dp.b2 / root, seq.dp.rho12 + seq.rho12_offset / root};
    if (!(r.rho1 > 0.0))
        infeasible(n, "rho1 = " + std::to_string(r.rho1) + " is not positive");
    if (!(r.rho2 > 0.0 && r.rho2 < 1.0))
        infeasible(n, "rho2 = " + std::to_string(r.rho2) + " is outside (0, 1)");
    if (!(r.rho12 > 0.0))
        infeasible(n, "rho12 = " + std::to_string(r.rho12) + " is not positive");
    const int ld = scale_level(seq.dp.ell_d, root, seq.rounding);
    const int lu = scale_level(seq.dp.ell_u, root, seq.rounding);
    if (ld < 1 || ld >= lu)
        infeasible(n, "levels (" + std::to_string(ld) + ", " + std::to_string(lu) + ") violate 1 <= ell_d < ell_u");
    return Model::from_ratios(r, ld, lu);
}

double approximate_mean(const ScalingSequence& seq, long long n)
{
    const Model m = nth_system(seq, n);
    const LimitLaw law(seq.dp);
    return -seq.dp.b2 / (1.0 - m.ratios().rho2) * law.mean();
}

std::size_t StudyTable::column(std::string_view name) const
{
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end())
        throw Error(ErrorCode::precondition, "no column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

StudyTable convergence_study(const ScalingSequence& seq, std::span<const long long> ns)
{
    StudyTable t;
    t.columns = {"n", "rho1", "rho2", "rho12", "exact_mean", "approx_mean", "rel_error"};
    t.metadata.emplace_back("rounding", std::string(to_string(seq.rounding)));
    for (long long n : ns) {
        const Model m = nth_system(seq, n);
        const double exact = StationaryDistribution(m).mean_queue_length();
        const double approx = approximate_mean(seq, n);
        const auto& r = m.ratios();
        t.rows.push_back({static_cast<double>(n), r.rho1, r.rho2, r.rho12, exact, approx,
                          std::abs(approx - exact) / exact});
    }
    return t;
}

StudyTable b1_sweep(const ScalingSequence& seq, std::span<const double> b1_values, long long n)
{
    StudyTable t;
    t.columns = {"b1", "exact_mean", "approx_mean"};
    t.metadata.emplace_back("n", std::to_string(n));
    for (double b1 : b1_values) {
        ScalingSequence s = seq;
        s.dp.b1 = b1;
        const Model m = nth_system(s, n);
        t.rows.push_back({b1, StationaryDistribution(m).mean_queue_length(), approximate_mean(s, n)});
    }
    return t;
}

StudyTable corollary_check(const ScalingSequence& seq, std::span<const long long> ns)
{
    const LimitLaw law(seq.dp);
    const double limit = law.limit_sqrtn_pi0() * law.mean();
    StudyTable t;
    t.columns = {"n", "pi0_times_mean", "limit", "rel_gap"};
    for (long long n : ns) {
        const StationaryDistribution d(nth_system(seq, n));
        const double v = d.pi0() * d.mean_queue_length();
        t.rows.push_back({static_cast<double>(n), v, limit, std::abs(v - limit) / limit});
    }
    return t;
}

StudyTable sqrtn_pi0_check(const ScalingSequence& seq, std::span<const long long> ns)
{
    const LimitLaw law(seq.dp);
    const double limit = law.limit_sqrtn_pi0();
    StudyTable t;
    t.columns = {"n", "sqrtn_pi0", "limit", "rel_gap"};
    for (long long n : ns) {
        const StationaryDistribution d(nth_system(seq, n));
        const double v = std::sqrt(static_cast<double>(n)) * d.pi0();
        t.rows.push_back({static_cast<double>(n), v, limit, std::abs(v - limit) / limit});
    }
    return t;
}

StudyTable rounding_study(const ScalingSequence& seq, std::span<const long long> ns,
                          std::span<const double> reference_means)
{
    if (ns.size() != reference_means.size())
        throw Error(ErrorCode::precondition, "one reference mean per n is required");
    StudyTable t;
    t.columns = {"rounding", "n", "ell_d", "ell_u", "exact_mean", "reference", "rel_error"};
    double best_err = std::numeric_limits<double>::infinity();
    Rounding best = seq.rounding;
    for (std::size_t ri = 0; ri < kAllRoundings.size(); ++ri) {
        ScalingSequence s = seq;
        s.rounding = kAllRoundings[ri];
        double worst = 0.0;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const Model m = nth_system(s, ns[i]);
            const double exact = StationaryDistribution(m).mean_queue_length();
            const double err = std::abs(exact - reference_means[i]) / std::abs(reference_means[i]);
            worst = std::max(worst, err);
            t.rows.push_back({static_cast<double>(ri), static_cast<double>(ns[i]), static_cast<double>(m.ell_d()),
                              static_cast<double>(m.ell_u()), exact, reference_means[i], err});
        }
        if (worst < best_err) {
            best_err = worst;
            best = s.rounding;
        }
    }
    t.metadata.emplace_back("rounding_codes", "0=nearest,1=floor,2=ceil");
    t.metadata.emplace_back("chosen_rounding", std::string(to_string(best)));
    return t;
}

double scaled_cdf_distance(const StationaryDistribution& exact, long long n, const LimitLaw& law,
                           std::span<const double> grid)
{
    const double root = std::sqrt(static_cast<double>(n));
    double worst = 0.0;
    for (double x : grid)
        worst = std::max(worst, std::abs(exact.marginal_cdf(x * root) - law.cdf(x)));
    return worst;
}

double scaled_cdf_distance(const ScalingSequence& seq, long long n, std::span<const double> grid)
{
    const StationaryDistribution exact(nth_system(seq, n));
    return scaled_cdf_distance(exact, n, LimitLaw(seq.dp), grid);
}

} // namespace hdq
