#pragma once

#include "hdq/model.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace hdq::sim {

using Rng = std::mt19937_64;

struct SimConfig {
    ModelParams model;
    double horizon = 1e6;
    double warmup_fraction = 0.1;
    std::uint64_t seed = 1;
    int batches = 20;
};

struct Estimate {
    double value = 0.0;
    double ci_halfwidth = 0.0; ///< 95% batch-means half-width

    friend bool operator==(const Estimate&, const Estimate&) = default;
};

struct SimResult {
    double time_avg_L = 0.0;
    double ci_halfwidth = 0.0;
    /// Fraction of post-warmup time with L = ell, ell = 0..max visited.
    std::vector<double> occupancy;
    /// Fractions per state: level1[ell] for (ell, 1), ell = 0..ell_u, and
    /// level2[ell - ell_d] for (ell, 2).
    std::vector<double> level1;
    std::vector<double> level2;
    std::array<double, 4> region_occupancy{};
    std::array<double, 4> region_ci{};
    Estimate empty; ///< P(L = 0)
    std::uint64_t events = 0;
    std::vector<double> batch_mean_L;

    friend bool operator==(const SimResult&, const SimResult&) = default;
};

struct Step {
    State next;
    double holding = 0.0;
};

/// Exponential(1) by inversion of a 53-bit uniform on (0, 1].
double standard_exponential(Rng& rng);

/// One jump of the chain from a state in S.
Step step(State state, const Model& model, Rng& rng);

/// Throws hdq::Error(precondition) for horizon <= 0, warmup outside [0, 1)
/// or batches < 2, and hdq::Error(unstable) when rho2 >= 1.
SimResult simulate(const SimConfig& cfg);

/// Time fraction in each region with its batch-means half-width.
std::array<Estimate, 4> estimate_regions(const SimConfig& cfg);

} // namespace hdq::sim
