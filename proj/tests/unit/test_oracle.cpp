#include "support.hpp"

#include <hdq/error.hpp>
#include <hdq/oracle.hpp>
#include <hdq/stationary.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace hdq;
using hdq::test::tiny_model;

TEST(TruncateLevel, Examples)
{
    EXPECT_EQ(oracle::truncate_level(Model::from_ratios({1.1, 0.9, 0.7}, 30, 100), 1e-12), 363);
    EXPECT_EQ(oracle::truncate_level(tiny_model(), 1e-12), 42);
    EXPECT_EQ(oracle::truncate_level(tiny_model(), 0.5), 4);
    EXPECT_THROW(oracle::truncate_level(tiny_model(), 0.0), Error);
    EXPECT_THROW(oracle::truncate_level(Model::from_ratios({1, 1.1, 1}, 1, 2), 1e-6), Error);
}

TEST(Generator, RowsSumToZero)
{
    const Model m = Model::validate({0.7, 1.3, 2.2, 2.9, 3, 8});
    const oracle::TruncatedGenerator g(m, 20);
    std::vector<double> rows(g.size(), 0.0);
    for (const auto& e : g.entries())
        rows[e.row] += e.rate;
    for (double r : rows)
        EXPECT_EQ(r, 0.0);
    // Reflecting top: (20, 2) keeps only its downward edge.
    double top_out = 0.0;
    for (const auto& e : g.entries())
        if (e.row == g.index_of({20, 2}) && e.col != e.row)
            top_out += e.rate;
    EXPECT_DOUBLE_EQ(top_out, 2.9);
}

TEST(Generator, OffDiagonalRatesComeFromModel)
{
    const Model m = Model::validate({0.7, 1.3, 2.2, 2.9, 3, 8});
    const oracle::TruncatedGenerator g(m, 15);
    for (const auto& e : g.entries()) {
        if (e.row == e.col)
            continue;
        EXPECT_TRUE(e.rate == 0.7 || e.rate == 1.3 || e.rate == 2.2 || e.rate == 2.9) << e.rate;
    }
    EXPECT_THROW(oracle::TruncatedGenerator(m, 9), Error);
    EXPECT_THROW(g.index_of({2, 2}), Error);
}

TEST(SolveBalance, TinyModel)
{
    const auto p = oracle::solve_balance(tiny_model(), 60);
    EXPECT_NEAR(p.probs[0], 0.25, 1e-12);
    EXPECT_NEAR(p.total(), 1.0, 1e-14);
    for (double v : p.probs)
        EXPECT_GE(v, 0.0);
    EXPECT_THROW(oracle::solve_balance(tiny_model(), 3), Error);
}

TEST(SolveBalance, GeometricMarginalForHomogeneousRates)
{
    const Model m = Model::validate({0.5, 1.0, 0.5, 1.0, 1, 2});
    const auto p = oracle::solve_balance(m, 80);
    std::vector<double> marginal(81, 0.0);
    for (std::size_t i = 0; i < p.states.size(); ++i)
        marginal[static_cast<std::size_t>(p.states[i].ell)] += p.probs[i];
    for (int l = 0; l < 40; ++l)
        EXPECT_NEAR(marginal[l], 0.5 * std::pow(0.5, l), 1e-13);
}

TEST(SolveBalance, GeneratorResidualIsTiny)
{
    for (const auto& m : test::random_models(10, 41)) {
        const int l_max = oracle::truncate_level(m, 1e-14);
        const oracle::TruncatedGenerator g(m, l_max);
        const auto p = oracle::solve_balance(m, l_max);
        EXPECT_LT(oracle::generator_residual(g, p), 1e-13);
    }
}

TEST(SolveBalance, RefiningTruncationChangesLittle)
{
    for (const auto& m : test::random_models(10, 43)) {
        const double eps = 1e-12;
        const int l_max = oracle::truncate_level(m, eps);
        const auto a = oracle::solve_balance(m, l_max);
        auto b = oracle::solve_balance(m, l_max + 50);
        b.states.resize(a.states.size());
        b.probs.resize(a.probs.size());
        EXPECT_LT(oracle::total_variation(a, b), eps);
    }
}

TEST(TotalVariation, Examples)
{
    oracle::ProbabilityMap p{{{0, 1}, {1, 1}}, {1.0, 0.0}};
    oracle::ProbabilityMap q{{{0, 1}, {1, 1}}, {0.0, 1.0}};
    EXPECT_DOUBLE_EQ(oracle::total_variation(p, p), 0.0);
    EXPECT_DOUBLE_EQ(oracle::total_variation(p, q), 1.0);
    oracle::ProbabilityMap r{{{0, 1}, {1, 2}}, {0.5, 0.5}};
    EXPECT_THROW(oracle::total_variation(p, r), Error);
}

TEST(OracleEquivalence, TinyModel)
{
    const StationaryDistribution d(tiny_model());
    const auto p = oracle::solve_balance(tiny_model(), 60);
    EXPECT_LT(oracle::total_variation(p, oracle::restrict_to(d, p.states)), 1e-10);
}

TEST(OracleEquivalence, RandomGrid)
{
    for (const auto& m : test::random_models(60, 47)) {
        const StationaryDistribution d(m);
        const auto p = oracle::solve_balance(m, oracle::truncate_level(m, 1e-17));
        EXPECT_LT(oracle::total_variation(p, oracle::restrict_to(d, p.states)), 1e-10)
            << "rho " << m.ratios().rho1 << "," << m.ratios().rho2 << "," << m.ratios().rho12 << " levels "
            << m.ell_d() << "," << m.ell_u();
    }
}

TEST(MgfBySummation, Examples)
{
    const StationaryDistribution d(tiny_model());
    EXPECT_NEAR(oracle::mgf_by_summation(d, Region::S22, -std::log(2.0), 10), 7.0 / 288, 1e-16);
    for (auto region : kAllRegions)
        EXPECT_NEAR(oracle::mgf_by_summation(d, region, 0.0, 10), d.region_mass(region), 1e-15);
    try {
        oracle::mgf_by_summation(d, Region::S22, std::log(2.0), 10);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::divergent_sum);
    }
}

TEST(BalanceResidual, DetectsCorruption)
{
    const StationaryDistribution d(tiny_model());
    const auto good = oracle::balance_residual(tiny_model(), [&](State s) { return d.pi(s); }, 20);
    EXPECT_LT(good.max_relative, 1e-14);
    const auto bad = oracle::balance_residual(
        tiny_model(), [&](State s) { return d.pi(s) * (s == State{1, 2} ? 1.001 : 1.0); }, 20);
    EXPECT_GT(bad.max_relative, 1e-4);
}
