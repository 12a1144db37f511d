#pragma once

#include "hdq/model.hpp"
#include "hdq/stationary.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace hdq::oracle {

/// Rate matrix Q restricted to {ell <= l_max}, reflecting at the top state
/// (the upward rate out of (l_max, 2) is dropped).
class TruncatedGenerator {
public:
    struct Entry {
        std::size_t row;
        std::size_t col;
        double rate;
    };

    /// Throws hdq::Error(precondition) if l_max < ell_u + 2.
    TruncatedGenerator(const Model& model, int l_max);

    const Model& model() const noexcept { return model_; }
    int l_max() const noexcept { return l_max_; }
    std::size_t size() const noexcept { return states_.size(); }
    const std::vector<State>& states() const noexcept { return states_; }

    /// Throws hdq::Error(state_outside_space) for states not kept.
    std::size_t index_of(State s) const;

    /// Off-diagonal entries followed by the diagonal; rows sum to zero.
    const std::vector<Entry>& entries() const noexcept { return entries_; }

private:
    Model model_;
    int l_max_;
    std::vector<State> states_;
    std::vector<Entry> entries_;
};

struct ProbabilityMap {
    std::vector<State> states;
    std::vector<double> probs;

    double total() const;
};

/// Smallest l_max >= ell_u + 2 whose discarded geometric tail is about eps.
int truncate_level(const Model& model, double eps);

/// Solves x Q = 0, sum x = 1 on the truncated space with a sparse direct
/// factorization. Throws hdq::Error(singular_system) when the factorization
/// fails or the solution is not a probability vector.
ProbabilityMap solve_balance(const Model& model, int l_max);

/// max_j |(x Q)_j| / max_j |x_j q_jj|.
double generator_residual(const TruncatedGenerator& gen, const ProbabilityMap& x);

/// Half the L1 distance. Throws hdq::Error(domain_mismatch) unless both maps
/// list the same states in the same order.
double total_variation(const ProbabilityMap& p, const ProbabilityMap& q);

/// Closed-form probabilities on the given states (no renormalization).
ProbabilityMap restrict_to(const StationaryDistribution& dist, const std::vector<State>& states);

/// psi_region(theta) by direct summation of the closed-form pi up to l_max,
/// plus the geometric remainder of S22 in closed form. Throws
/// hdq::Error(divergent_sum) for S22 with theta >= log(1/rho2).
double mgf_by_summation(const StationaryDistribution& dist, Region region, double theta, int l_max);

struct BalanceResidual {
    double max_relative = 0.0;
    State worst{};
};

/// Global balance out-flow vs in-flow at every state with ell <= l_max,
/// evaluated with the model's actual rates and the supplied probabilities.
BalanceResidual balance_residual(const Model& model, const std::function<double(State)>& pi, int l_max);

} // namespace hdq::oracle
