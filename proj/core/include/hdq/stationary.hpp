#pragma once

#include "hdq/model.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace hdq {

/// Which family of closed forms is active: rho1 != 1 or rho1 == 1.
enum class Rho1Branch { generic, unit };

/// |rho1 - 1| below this selects the unit branch.
inline constexpr double kUnitBranchTolerance = 1e-8;

Rho1Branch select_branch(double rho1) noexcept;

/// Partial geometric sum 1 + rho1 + ... + rho1^i.
double phi(int i, double rho1);

/// Normalization constant from the compact two-branch expression
/// (1/(1-rho1) - ... form). Independent of StationaryDistribution; it loses
/// accuracy as rho1 -> 1 with a large band and is kept as a cross-check.
double pi_zero_compact(const Ratios& r, int ell_d, int ell_u);

struct TableRow {
    int ell = 0;
    int k = 1;
    double prob = 0.0;
};

struct DistributionTable {
    std::vector<TableRow> rows; ///< every state with ell <= l_max, ordered by (ell, k)
    double tail_mass = 0.0;     ///< mass of {(ell, 2) : ell > l_max}
};

/// Exact stationary law of (L, B) in closed form.
///
/// Construction costs O(ell_u) time and memory; all queries afterwards are
/// O(1) except mgf_component, which may fall back to an O(ell_u - ell_d)
/// finite sum near its removable singularities.
class StationaryDistribution {
public:
    /// Throws hdq::Error(unstable) unless rho2 < 1.
    explicit StationaryDistribution(const Model& model);
    /// Same, with the rho1 branch forced instead of selected.
    StationaryDistribution(const Model& model, Rho1Branch branch);

    const Model& model() const noexcept { return model_; }
    Rho1Branch branch() const noexcept { return branch_; }

    double pi0() const noexcept { return std::exp(log_pi0_); }
    double log_pi0() const noexcept { return log_pi0_; }

    /// Throws hdq::Error(state_outside_space).
    double pi(State s) const;
    double log_pi(State s) const;

    double region_mass(Region region) const noexcept { return region_mass_[index_of(region)]; }

    /// E[exp(theta L) 1{(L,B) in region}]; +infinity for S22 when
    /// theta >= log(1/rho2).
    double mgf_component(Region region, double theta) const;

    double mean_queue_length() const noexcept { return mean_; }

    /// P(L = ell).
    double marginal(int ell) const;
    /// P(L <= x), right-continuous in x.
    double marginal_cdf(double x) const;

    /// Throws hdq::Error(precondition) if l_max < ell_u + 1.
    DistributionTable table(int l_max) const;

private:
    double log_weight(State s) const;
    double mgf_s21(double theta) const;
    double mgf_s21_by_sum(double theta) const;

    Model model_;
    Rho1Branch branch_;
    double log_rho1_ = 0.0; ///< 0 on the unit branch
    double log_rho2_ = 0.0;
    double log_phi_band_ = 0.0;
    double log_tail_head_ = 0.0; ///< unnormalized log weight of (ell_u + 1, 2)
    double log_z_ = 0.0;
    double log_pi0_ = 0.0;
    std::vector<double> log_w1_; ///< (ell, 1), ell = 0..ell_u
    std::vector<double> log_w2_; ///< (ell, 2), ell = ell_d..ell_u
    double tail_head_ = 0.0;     ///< pi(ell_u + 1, 2)
    std::vector<double> cdf_;    ///< P(L <= ell), ell = 0..ell_u
    std::array<double, 4> region_mass_{};
    double mean_ = 0.0;
};

} // namespace hdq
