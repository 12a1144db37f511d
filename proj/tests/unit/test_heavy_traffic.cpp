#include "support.hpp"

#include <hdq/error.hpp>
#include <hdq/heavy_traffic.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace hdq;
using hdq::test::rel_gap;

namespace {

std::vector<double> grid_0_20(double step)
{
    std::vector<double> xs;
    for (int i = 0; i * step <= 20.0 + 1e-12; ++i)
        xs.push_back(i * step);
    return xs;
}

} // namespace

TEST(NthSystem, ReferenceSequenceColumns)
{
    const auto seq = reference_sequence();
    const Model m10 = nth_system(seq, 10);
    EXPECT_NEAR(m10.ratios().rho1, 1.31623, 5e-6);
    EXPECT_NEAR(m10.ratios().rho2, 0.683772, 5e-7);
    EXPECT_NEAR(m10.ratios().rho12, 0.483772, 5e-7);

    const Model m100 = nth_system(seq, 100);
    EXPECT_NEAR(m100.ratios().rho1, 1.1, 1e-15);
    EXPECT_NEAR(m100.ratios().rho2, 0.9, 1e-15);
    EXPECT_NEAR(m100.ratios().rho12, 0.7, 1e-15);
    EXPECT_EQ(m100.ell_d(), 30);
    EXPECT_EQ(m100.ell_u(), 100);
}

TEST(NthSystem, PositiveB2RejectedForAllN)
{
    auto seq = reference_sequence();
    seq.dp.b2 = 1.0;
    for (long long n : {1LL, 10LL, 100LL, 10000LL, 1000000LL}) {
        try {
            nth_system(seq, n);
            ADD_FAILURE() << "n " << n;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::infeasible_n);
        }
    }
}

TEST(NthSystem, InfeasibleSmallN)
{
    const auto seq = reference_sequence();
    // rho2 = 0 and rho12 < 0 at n = 1.
    EXPECT_THROW(nth_system(seq, 1), Error);
    EXPECT_THROW(nth_system(seq, 0), Error);
}

TEST(NthSystem, FeasibilityIsMonotoneOverSquares)
{
    const auto seq = reference_sequence();
    bool seen = false;
    for (long long k = 1; k <= 300; ++k) {
        bool ok = true;
        try {
            nth_system(seq, k * k);
        } catch (const Error&) {
            ok = false;
        }
        if (seen)
            EXPECT_TRUE(ok) << "n " << k * k;
        seen = seen || ok;
    }
    EXPECT_TRUE(seen);
}

TEST(NthSystem, RoundingConventions)
{
    auto seq = reference_sequence();
    seq.rounding = Rounding::floor;
    EXPECT_EQ(nth_system(seq, 1000).ell_d(), 94);
    EXPECT_EQ(nth_system(seq, 1000).ell_u(), 316);
    seq.rounding = Rounding::ceil;
    EXPECT_EQ(nth_system(seq, 1000).ell_d(), 95);
    EXPECT_EQ(nth_system(seq, 1000).ell_u(), 317);
    seq.rounding = Rounding::nearest;
    EXPECT_EQ(nth_system(seq, 10).ell_d(), 9);
    EXPECT_EQ(nth_system(seq, 10).ell_u(), 32);
    EXPECT_EQ(parse_rounding("ceil"), Rounding::ceil);
    EXPECT_THROW(parse_rounding("up"), Error);
}

TEST(ApproximateMean, TableOneRow)
{
    const auto seq = reference_sequence();
    EXPECT_LT(rel_gap(approximate_mean(seq, 10), 20.296), 5e-5);
    EXPECT_LT(rel_gap(approximate_mean(seq, 100), 64.1817), 5e-6);
    EXPECT_LT(rel_gap(approximate_mean(seq, 1000), 202.96), 5e-5);
    EXPECT_LT(rel_gap(approximate_mean(seq, 10000), 641.817), 5e-6);
}

TEST(ApproximateMean, RatioToRootNIsConstant)
{
    const auto seq = reference_sequence();
    const double ref = approximate_mean(seq, 100) / 10.0;
    for (long long n : {10LL, 37LL, 1000LL, 12345LL, 1000000LL})
        EXPECT_LT(rel_gap(approximate_mean(seq, n) / std::sqrt(static_cast<double>(n)), ref), 1e-12);
}

TEST(ConvergenceStudy, TableOneExactColumns)
{
    const std::vector<long long> ns{100, 10000};
    const auto t = convergence_study(reference_sequence(), ns);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.columns.size(), 7u);
    const auto e = t.column("exact_mean");
    const auto a = t.column("approx_mean");
    const auto r = t.column("rel_error");
    EXPECT_LT(rel_gap(t.rows[0][e], 62.6715), 5e-6);
    EXPECT_LT(rel_gap(t.rows[1][e], 640.299), 5e-6);
    EXPECT_LT(rel_gap(t.rows[0][a], 64.1817), 5e-6);
    EXPECT_LT(rel_gap(t.rows[1][a], 641.817), 5e-6);
    EXPECT_GT(t.rows[0][r], 0.0);
    EXPECT_GT(t.rows[0][r], t.rows[1][r]);
    EXPECT_NEAR(t.rows[0][r], 0.0241, 5e-4);
    EXPECT_NEAR(t.rows[1][r], 0.00237, 5e-5);
}

TEST(ConvergenceStudy, EmptyInput)
{
    const auto t = convergence_study(reference_sequence(), {});
    EXPECT_TRUE(t.rows.empty());
    EXPECT_THROW(t.column("nope"), Error);
}

TEST(B1Sweep, RowsAndBranches)
{
    const std::vector<double> b1s{-10, -1, 0, 1, 10};
    const auto t = b1_sweep(reference_sequence(), b1s, 1000);
    ASSERT_EQ(t.rows.size(), b1s.size());
    EXPECT_EQ(t.columns, (std::vector<std::string>{"b1", "exact_mean", "approx_mean"}));
    EXPECT_LT(rel_gap(t.rows[3][2], 202.96), 5e-5);
    EXPECT_LT(rel_gap(t.rows[2][2], std::sqrt(1000.0) * 3.995434), 1e-6);
    // The error is an O(1) offset, so small means at b1 = -10 only meet an absolute bound.
    for (const auto& row : t.rows) {
        EXPECT_GT(row[2], row[1]) << "b1 " << row[0];
        EXPECT_LT(row[2] - row[1], 2.0) << "b1 " << row[0];
    }
}

TEST(CorollaryCheck, LimitAndTrend)
{
    const std::vector<long long> ns{100, 1000, 10000};
    const auto t = corollary_check(reference_sequence(), ns);
    const auto lim = t.column("limit");
    const auto gap = t.column("rel_gap");
    EXPECT_LT(rel_gap(t.rows[0][lim], 0.0254377778098041), 1e-10);
    EXPECT_GT(t.rows[0][gap], t.rows[1][gap]);
    EXPECT_GT(t.rows[1][gap], t.rows[2][gap]);

    const std::vector<long long> one{400};
    EXPECT_EQ(corollary_check(reference_sequence(), one).rows.size(), 1u);
}

TEST(SqrtnPi0Check, Trend)
{
    const std::vector<long long> ns{100, 1000, 10000};
    const auto t = sqrtn_pi0_check(reference_sequence(), ns);
    const auto gap = t.column("rel_gap");
    EXPECT_GT(t.rows[0][gap], t.rows[1][gap]);
    EXPECT_GT(t.rows[1][gap], t.rows[2][gap]);
}

TEST(SqrtnPi0Check, FlatDriftAtLargeN)
{
    ScalingSequence seq = reference_sequence();
    seq.dp.b1 = 0.0;
    const std::vector<long long> ns{1000000};
    const auto t = sqrtn_pi0_check(seq, ns);
    EXPECT_LT(t.rows[0][t.column("rel_gap")], 0.01);
}

TEST(RoundingStudy, RecordsChosenConvention)
{
    const std::vector<long long> ns{10, 1000};
    const std::vector<double> ref{18.5982, 201.009};
    const auto t = rounding_study(reference_sequence(), ns, ref);
    EXPECT_EQ(t.rows.size(), 6u);
    std::string chosen;
    for (const auto& [k, v] : t.metadata)
        if (k == "chosen_rounding")
            chosen = v;
    EXPECT_FALSE(chosen.empty());
    const auto err = t.column("rel_error");
    const auto code = t.column("rounding");
    double worst = 0.0;
    for (const auto& row : t.rows)
        if (to_string(kAllRoundings[static_cast<std::size_t>(row[code])]) == chosen)
            worst = std::max(worst, row[err]);
    EXPECT_LT(worst, 0.02);
}

TEST(ScaledCdfDistance, DecreasesAlongSequence)
{
    const auto seq = reference_sequence();
    const auto grid = grid_0_20(0.25);
    const double d2 = scaled_cdf_distance(seq, 100, grid);
    const double d3 = scaled_cdf_distance(seq, 1000, grid);
    const double d4 = scaled_cdf_distance(seq, 10000, grid);
    EXPECT_GT(d2, d3);
    EXPECT_GT(d3, d4);
    EXPECT_LT(scaled_cdf_distance(seq, 10000, grid_0_20(0.5)), scaled_cdf_distance(seq, 100, grid_0_20(0.5)));
}

TEST(ScaledCdfDistance, FarPointIsZero)
{
    const auto seq = reference_sequence();
    const std::vector<double> far{1e4};
    EXPECT_NEAR(scaled_cdf_distance(seq, 100, far), 0.0, 1e-15);
}
