#include <hdq/error.hpp>
#include <hdq/model.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace hdq;

namespace {

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no hdq::Error thrown";
    return ErrorCode::precondition;
}

} // namespace

TEST(Model, ValidateTinyRates)
{
    const Model m = Model::validate({1, 1, 0.5, 1, 1, 2});
    EXPECT_DOUBLE_EQ(m.ratios().rho1, 1.0);
    EXPECT_DOUBLE_EQ(m.ratios().rho2, 0.5);
    EXPECT_DOUBLE_EQ(m.ratios().rho12, 1.0);
    EXPECT_TRUE(m.stable());
}

TEST(Model, EqualLevelsRejected)
{
    EXPECT_EQ(code_of([] { Model::validate({1, 1, 1, 1, 3, 3}); }), ErrorCode::level_order_violation);
    EXPECT_EQ(code_of([] { Model::validate({1, 1, 1, 1, 0, 3}); }), ErrorCode::level_order_violation);
}

TEST(Model, NonPositiveRateRejected)
{
    EXPECT_EQ(code_of([] { Model::validate({0, 1, 1, 1, 1, 3}); }), ErrorCode::non_positive_rate);
    EXPECT_EQ(code_of([] { Model::validate({1, 1, -1, 1, 1, 3}); }), ErrorCode::non_positive_rate);
    EXPECT_EQ(code_of([] { Model::validate({1, 1, 1, std::nan(""), 1, 3}); }), ErrorCode::non_positive_rate);
}

TEST(Model, RatiosUseLambda1OverMu2)
{
    const Model m = Model::validate({1.1, 1, 0.9, 1, 30, 100});
    EXPECT_DOUBLE_EQ(m.ratios().rho1, 1.1);
    EXPECT_DOUBLE_EQ(m.ratios().rho2, 0.9);
    EXPECT_DOUBLE_EQ(m.ratios().rho12, 1.1);
}

TEST(Model, FromRatiosCanonicalRates)
{
    const auto p = from_ratios({1.1, 0.9, 0.7}, 30, 100);
    EXPECT_DOUBLE_EQ(p.mu1, 1.0);
    EXPECT_DOUBLE_EQ(p.lambda1, 1.1);
    EXPECT_NEAR(p.mu2, 11.0 / 7.0, 1e-15);
    EXPECT_NEAR(p.lambda2, 9.9 / 7.0, 1e-15);

    const auto q = from_ratios({1, 0.5, 1}, 1, 2);
    EXPECT_DOUBLE_EQ(q.lambda1, 1.0);
    EXPECT_DOUBLE_EQ(q.mu2, 1.0);
    EXPECT_DOUBLE_EQ(q.lambda2, 0.5);
}

TEST(Model, FromRatiosRoundTrip)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    for (int i = 0; i < 200; ++i) {
        const Ratios r{u(rng), u(rng), u(rng)};
        const Ratios back = ratios_of(from_ratios(r, 2, 9));
        EXPECT_NEAR(back.rho1, r.rho1, 4e-16 * r.rho1);
        EXPECT_NEAR(back.rho2, r.rho2, 4e-16 * r.rho2);
        EXPECT_NEAR(back.rho12, r.rho12, 4e-16 * r.rho12);
    }
}

TEST(Model, StabilityDependsOnRho2Only)
{
    EXPECT_TRUE(is_stable({5.0, 0.9, 1.0}));
    EXPECT_FALSE(is_stable({0.1, 1.0, 1.0}));
    EXPECT_TRUE(is_stable({1.31623, 0.683772, 0.483772}));
}

TEST(Model, RegionOf)
{
    const Model m = Model::from_ratios({1, 0.5, 1}, 3, 6);
    EXPECT_EQ(m.region_of({2, 1}), Region::S11);
    EXPECT_EQ(m.region_of({6, 1}), Region::S21);
    EXPECT_EQ(m.region_of({3, 2}), Region::S12);
    EXPECT_EQ(m.region_of({7, 2}), Region::S22);
    EXPECT_EQ(code_of([&] { m.region_of({2, 2}); }), ErrorCode::state_outside_space);
    EXPECT_EQ(code_of([&] { m.region_of({7, 1}); }), ErrorCode::state_outside_space);
    EXPECT_EQ(code_of([&] { m.region_of({0, 2}); }), ErrorCode::state_outside_space);
}

TEST(Model, RegionsPartitionStates)
{
    const Model m = Model::from_ratios({1, 0.5, 1}, 4, 9);
    std::array<int, 4> counts{};
    for (int l = 0; l <= 20; ++l)
        for (int k : {1, 2})
            if (m.contains({l, k}))
                ++counts[index_of(m.region_of({l, k}))];
    EXPECT_EQ(counts[0], 4);
    EXPECT_EQ(counts[1], 6);
    EXPECT_EQ(counts[2], 6);
    EXPECT_EQ(counts[3], 11);
}

TEST(Model, SwitchingTransitions)
{
    const Model m = Model::validate({2, 3, 5, 7, 2, 4});
    const auto at_top = m.transitions({4, 1});
    ASSERT_EQ(at_top.count, 2);
    bool up = false;
    for (const auto& t : at_top)
        if (t.to == State{5, 2}) {
            up = true;
            EXPECT_DOUBLE_EQ(t.rate, 2.0);
        }
    EXPECT_TRUE(up);

    bool down = false;
    for (const auto& t : m.transitions({2, 2}))
        if (t.to == State{1, 1}) {
            down = true;
            EXPECT_DOUBLE_EQ(t.rate, 7.0);
        }
    EXPECT_TRUE(down);

    const auto empty = m.transitions({0, 1});
    ASSERT_EQ(empty.count, 1);
    EXPECT_EQ(empty.edges[0].to, (State{1, 1}));
    EXPECT_DOUBLE_EQ(empty.total_rate(), 2.0);
}
