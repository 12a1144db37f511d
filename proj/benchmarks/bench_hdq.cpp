#include <hdq/diffusion.hpp>
#include <hdq/heavy_traffic.hpp>
#include <hdq/oracle.hpp>
#include <hdq/simulator.hpp>
#include <hdq/stationary.hpp>

#include <benchmark/benchmark.h>

#include <cmath>

using namespace hdq;

static void BM_StationaryConstruct(benchmark::State& state)
{
    const auto n = state.range(0);
    const Model m = nth_system(reference_sequence(), n);
    for (auto _ : state) {
        StationaryDistribution d(m);
        benchmark::DoNotOptimize(d.mean_queue_length());
    }
    state.SetLabel("ell_u=" + std::to_string(m.ell_u()));
}
BENCHMARK(BM_StationaryConstruct)->Arg(100)->Arg(10000)->Arg(1000000);

static void BM_MgfComponent(benchmark::State& state)
{
    const StationaryDistribution d(nth_system(reference_sequence(), 10000));
    double theta = 1e-4;
    for (auto _ : state) {
        for (auto region : kAllRegions)
            benchmark::DoNotOptimize(d.mgf_component(region, theta));
        theta = -theta;
    }
}
BENCHMARK(BM_MgfComponent);

static void BM_SolveBalance(benchmark::State& state)
{
    const Model m = Model::from_ratios({1.1, 0.9, 0.7}, 30, static_cast<int>(state.range(0)));
    const int l_max = oracle::truncate_level(m, 1e-14);
    for (auto _ : state) {
        auto p = oracle::solve_balance(m, l_max);
        benchmark::DoNotOptimize(p.probs.data());
    }
    state.SetLabel("states=" + std::to_string(oracle::TruncatedGenerator(m, l_max).size()));
}
BENCHMARK(BM_SolveBalance)->Arg(100)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

static void BM_LimitLawQueries(benchmark::State& state)
{
    const LimitLaw law(reference_sequence().dp);
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(law.density(x));
        benchmark::DoNotOptimize(law.cdf(x));
        x = x > 20.0 ? 0.0 : x + 0.37;
    }
}
BENCHMARK(BM_LimitLawQueries);

static void BM_ConvergenceStudy(benchmark::State& state)
{
    const std::vector<long long> ns{10, 100, 1000, 10000};
    for (auto _ : state) {
        auto t = convergence_study(reference_sequence(), ns);
        benchmark::DoNotOptimize(t.rows.data());
    }
}
BENCHMARK(BM_ConvergenceStudy)->Unit(benchmark::kMillisecond);

static void BM_Simulate(benchmark::State& state)
{
    sim::SimConfig cfg;
    cfg.model = Model::from_ratios({1.0, 0.5, 1.0}, 1, 2).params();
    cfg.horizon = 1e5;
    std::uint64_t events = 0;
    for (auto _ : state) {
        const auto r = sim::simulate(cfg);
        events += r.events;
        ++cfg.seed;
    }
    state.counters["events/s"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
