#pragma once

#include <array>
#include <compare>
#include <string_view>

namespace hdq {

/// Raw parameters of one history-dependent two-level M/M/1 queue.
///
/// Background state 1 runs at (lambda1, mu1) and state 2 at (lambda2, mu2).
/// An arrival that takes the queue from ell_u to ell_u + 1 while in state 1
/// switches to state 2; a departure from ell_d to ell_d - 1 while in state 2
/// switches back to state 1.
struct ModelParams {
    double lambda1 = 0.0;
    double mu1 = 0.0;
    double lambda2 = 0.0;
    double mu2 = 0.0;
    int ell_d = 0;
    int ell_u = 0;
};

struct Ratios {
    double rho1 = 0.0;  ///< lambda1 / mu1
    double rho2 = 0.0;  ///< lambda2 / mu2
    double rho12 = 0.0; ///< lambda1 / mu2
};

struct State {
    int ell = 0;
    int k = 1;

    friend constexpr auto operator<=>(const State&, const State&) = default;
};

enum class Region { S11, S21, S12, S22 };

inline constexpr std::array<Region, 4> kAllRegions{Region::S11, Region::S21, Region::S12, Region::S22};

std::string_view to_string(Region region) noexcept;
constexpr int index_of(Region region) noexcept { return static_cast<int>(region); }

struct Transition {
    State to;
    double rate = 0.0;
};

/// Outgoing edges of one state; every state has one or two.
struct Transitions {
    std::array<Transition, 2> edges{};
    int count = 0;

    const Transition* begin() const noexcept { return edges.data(); }
    const Transition* end() const noexcept { return edges.data() + count; }
    double total_rate() const noexcept
    {
        double r = 0.0;
        for (const auto& e : *this)
            r += e.rate;
        return r;
    }
};

Ratios ratios_of(const ModelParams& params) noexcept;

/// Stationarity holds iff rho2 < 1; rho1 is unrestricted.
constexpr bool is_stable(const Ratios& r) noexcept { return r.rho2 < 1.0; }

/// Canonical rates with mu1 = 1 reproducing the given ratios.
ModelParams from_ratios(const Ratios& r, int ell_d, int ell_u);

/// A parameter set whose invariants have been checked.
class Model {
public:
    /// Throws hdq::Error (non_positive_rate, level_order_violation).
    static Model validate(const ModelParams& params);
    static Model from_ratios(const Ratios& r, int ell_d, int ell_u);

    const ModelParams& params() const noexcept { return params_; }
    const Ratios& ratios() const noexcept { return ratios_; }
    int ell_d() const noexcept { return params_.ell_d; }
    int ell_u() const noexcept { return params_.ell_u; }
    /// Number of levels in the overlap band {ell_d..ell_u}.
    int band() const noexcept { return params_.ell_u - params_.ell_d + 1; }
    bool stable() const noexcept { return is_stable(ratios_); }

    bool contains(State s) const noexcept;
    /// Throws hdq::Error(state_outside_space) for states not in S.
    Region region_of(State s) const;

    /// Outgoing transitions of the rate matrix Q from state s (at most two).
    Transitions transitions(State s) const;

private:
    explicit Model(const ModelParams& p);

    ModelParams params_;
    Ratios ratios_;
};

} // namespace hdq
