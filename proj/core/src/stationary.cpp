#include "hdq/stationary.hpp"

#include "hdq/error.hpp"
#include "hdq/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hdq {

namespace {

using numerics::log_geometric_sum;

// Closed forms for the S21 transform subtract two nearly equal sums when
// band * |log rho1| (or band * |theta| on the unit branch) is small; below
// this product the finite sum is used instead.
constexpr double kCancellationGuard = 1e-3;

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(1 - exp(x)) for x < 0.
double log1mexp(double x)
{
    return x < -0.6931471805599453 ? std::log1p(-std::exp(x)) : std::log(-std::expm1(x));
}

} // namespace

Rho1Branch select_branch(double rho1) noexcept
{
    return std::abs(rho1 - 1.0) < kUnitBranchTolerance ? Rho1Branch::unit : Rho1Branch::generic;
}

double phi(int i, double rho1)
{
    if (i < 0)
        throw Error(ErrorCode::precondition, "phi requires i >= 0");
    if (!(rho1 > 0.0))
        throw Error(ErrorCode::precondition, "phi requires rho1 > 0");
    if (select_branch(rho1) == Rho1Branch::unit)
        return static_cast<double>(i) + 1.0;
    if (i <= 64) {
        double sum = 0.0;
        double term = 1.0;
        for (int j = 0; j <= i; ++j, term *= rho1)
            sum += term;
        return sum;
    }
    return numerics::geometric_sum(std::log(rho1), i);
}

double pi_zero_compact(const Ratios& r, int ell_d, int ell_u)
{
    if (!is_stable(r))
        throw Error(ErrorCode::unstable, "rho2 must be below 1");
    const double span = static_cast<double>(ell_u - ell_d + 2);
    if (select_branch(r.rho1) == Rho1Branch::unit)
        return 1.0 / ((ell_u + ell_d + 1) / 2.0 + r.rho12 / (1.0 - r.rho2));
    const double p_u = std::pow(r.rho1, ell_u);
    const double p_u1 = std::pow(r.rho1, ell_u + 1);
    const double q = 1.0 - std::pow(r.rho1, ell_u - ell_d + 2);
    const double inv = 1.0 / (1.0 - r.rho1) - p_u1 * span / q + r.rho12 * (p_u - p_u1) * span / (q * (1.0 - r.rho2));
    return 1.0 / inv;
}

StationaryDistribution::StationaryDistribution(const Model& model)
    : StationaryDistribution(model, select_branch(model.ratios().rho1))
{
}

StationaryDistribution::StationaryDistribution(const Model& model, Rho1Branch branch)
    : model_(model), branch_(branch)
{
    const auto& r = model_.ratios();
    if (!is_stable(r))
        throw Error(ErrorCode::unstable, "stationary law requires rho2 < 1, got " + std::to_string(r.rho2));

    const int ld = model_.ell_d();
    const int lu = model_.ell_u();
    const int band = model_.band();

    log_rho1_ = branch_ == Rho1Branch::unit ? 0.0 : std::log(r.rho1);
    log_rho2_ = std::log(r.rho2);
    log_phi_band_ = log_geometric_sum(log_rho1_, band);
    const double log_level2 = lu * log_rho1_ - log_phi_band_ + std::log(r.rho12);

    log_w1_.resize(static_cast<std::size_t>(lu) + 1);
    for (int l = 0; l <= lu; ++l) {
        double w = l * log_rho1_;
        if (l >= ld)
            w += log_geometric_sum(log_rho1_, lu - l) - log_phi_band_;
        log_w1_[l] = w;
    }
    log_w2_.resize(static_cast<std::size_t>(band));
    for (int l = ld; l <= lu; ++l)
        log_w2_[l - ld] = log_level2 + log_geometric_sum(log_rho2_, l - ld);
    log_tail_head_ = log_level2 + log_geometric_sum(log_rho2_, band);

    const double log_one_minus_rho2 = std::log1p(-r.rho2);
    std::vector<double> all;
    all.reserve(log_w1_.size() + log_w2_.size() + 1);
    all.insert(all.end(), log_w1_.begin(), log_w1_.end());
    all.insert(all.end(), log_w2_.begin(), log_w2_.end());
    all.push_back(log_tail_head_ - log_one_minus_rho2);
    log_z_ = numerics::log_sum_exp(all);
    log_pi0_ = -log_z_;

    tail_head_ = std::exp(log_tail_head_ - log_z_);

    region_mass_.fill(0.0);
    cdf_.assign(static_cast<std::size_t>(lu) + 1, 0.0);
    double running = 0.0;
    double mean = 0.0;
    for (int l = 0; l <= lu; ++l) {
        const double p1 = std::exp(log_w1_[l] - log_z_);
        region_mass_[index_of(l < ld ? Region::S11 : Region::S21)] += p1;
        double p = p1;
        if (l >= ld) {
            const double p2 = std::exp(log_w2_[l - ld] - log_z_);
            region_mass_[index_of(Region::S12)] += p2;
            p += p2;
        }
        running += p;
        cdf_[l] = running;
        mean += l * p;
    }
    const double one_minus = 1.0 - r.rho2;
    region_mass_[index_of(Region::S22)] = tail_head_ / one_minus;
    mean += tail_head_ * ((lu + 1.0) / one_minus + r.rho2 / (one_minus * one_minus));
    mean_ = mean;
}

double StationaryDistribution::log_weight(State s) const
{
    const int ld = model_.ell_d();
    const int lu = model_.ell_u();
    if (s.k == 1)
        return log_w1_[s.ell];
    if (s.ell <= lu)
        return log_w2_[s.ell - ld];
    return log_tail_head_ + (s.ell - lu - 1) * log_rho2_;
}

double StationaryDistribution::log_pi(State s) const
{
    if (!model_.contains(s))
        throw Error(ErrorCode::state_outside_space,
                    "(" + std::to_string(s.ell) + "," + std::to_string(s.k) + ") is not in S");
    return log_weight(s) - log_z_;
}

double StationaryDistribution::pi(State s) const
{
    if (!model_.contains(s))
        throw Error(ErrorCode::state_outside_space,
                    "(" + std::to_string(s.ell) + "," + std::to_string(s.k) + ") is not in S");
    const int lu = model_.ell_u();
    if (s.k == 2 && s.ell > lu)
        return tail_head_ * std::pow(model_.ratios().rho2, s.ell - lu - 1);
    return std::exp(log_weight(s) - log_z_);
}

double StationaryDistribution::marginal(int ell) const
{
    if (ell < 0)
        return 0.0;
    const int ld = model_.ell_d();
    const int lu = model_.ell_u();
    if (ell > lu)
        return pi(State{ell, 2});
    double p = std::exp(log_w1_[ell] - log_z_);
    if (ell >= ld)
        p += std::exp(log_w2_[ell - ld] - log_z_);
    return p;
}

double StationaryDistribution::marginal_cdf(double x) const
{
    if (x < 0.0)
        return 0.0;
    const int lu = model_.ell_u();
    const double fl = std::floor(x);
    if (fl <= lu)
        return cdf_[static_cast<std::size_t>(fl)];
    const double above = fl - lu;
    const double r2 = model_.ratios().rho2;
    return cdf_[lu] + tail_head_ * (-std::expm1(above * log_rho2_)) / (1.0 - r2);
}

DistributionTable StationaryDistribution::table(int l_max) const
{
    const int ld = model_.ell_d();
    const int lu = model_.ell_u();
    if (l_max < lu + 1)
        throw Error(ErrorCode::precondition,
                    "l_max must be at least ell_u + 1 = " + std::to_string(lu + 1));
    DistributionTable t;
    t.rows.reserve(static_cast<std::size_t>(l_max) + model_.band() + 1);
    for (int l = 0; l <= l_max; ++l) {
        if (l <= lu)
            t.rows.push_back({l, 1, pi(State{l, 1})});
        if (l >= ld)
            t.rows.push_back({l, 2, pi(State{l, 2})});
    }
    const double r2 = model_.ratios().rho2;
    t.tail_mass = tail_head_ * std::pow(r2, l_max - lu) / (1.0 - r2);
    return t;
}

double StationaryDistribution::mgf_component(Region region, double theta) const
{
    const int ld = model_.ell_d();
    const int lu = model_.ell_u();
    const int band = model_.band();
    const auto& r = model_.ratios();
    switch (region) {
    case Region::S11:
        return std::exp(log_pi0_ + log_geometric_sum(log_rho1_ + theta, ld - 1));
    case Region::S21:
        return mgf_s21(theta);
    case Region::S12: {
        // sum_{k<band} e^{theta k} (1 - rho2^{k+1}) written as a scaled
        // difference that never cancels.
        const double lg_y = log_geometric_sum(theta, band - 1);
        const double lg_ry = log_geometric_sum(log_rho2_ + theta, band - 1);
        const double prefix = log_pi0_ + std::log(r.rho12) + lu * log_rho1_ - log_phi_band_ - std::log1p(-r.rho2) +
                              theta * ld;
        return std::exp(prefix + lg_y + log1mexp(log_rho2_ + lg_ry - lg_y));
    }
    case Region::S22: {
        if (theta + log_rho2_ >= 0.0)
            return kInf;
        return std::exp(std::log(tail_head_) + theta * (lu + 1.0) - log1mexp(log_rho2_ + theta));
    }
    }
    return 0.0;
}

double StationaryDistribution::mgf_s21(double theta) const
{
    const int ld = model_.ell_d();
    const int band = model_.band();
    const double m = band;
    const double lg_y = log_geometric_sum(theta, band - 1);

    if (branch_ == Rho1Branch::unit) {
        if (m * std::abs(theta) < kCancellationGuard)
            return mgf_s21_by_sum(theta);
        // pi0 e^{theta ld} (m - sum_{k=1}^{m} e^{theta k}) / ((m + 1)(1 - e^theta))
        const double lg_shift = theta + lg_y; // log sum_{k=1}^{m} e^{theta k}
        double log_ratio;
        if (theta > 0.0)
            log_ratio = lg_shift + log1mexp(std::log(m) - lg_shift) - std::log(std::expm1(theta));
        else
            log_ratio = std::log(m) + log1mexp(lg_shift - std::log(m)) - std::log(-std::expm1(theta));
        return std::exp(log_pi0_ + theta * ld + log_ratio - std::log(m + 1.0));
    }

    const double L1 = log_rho1_;
    if (m * std::abs(L1) < kCancellationGuard)
        return mgf_s21_by_sum(theta);
    // pi0 x^{ld} [g(x, m-1) - rho1^m g(e^theta, m-1)] / (1 - rho1^{m+1}), x = rho1 e^theta
    const double lg_x = log_geometric_sum(L1 + theta, band - 1);
    double log_bracket;
    if (L1 < 0.0)
        log_bracket = lg_x + log1mexp(m * L1 + lg_y - lg_x) - log1mexp((m + 1.0) * L1);
    else
        log_bracket = lg_y - L1 + log1mexp(lg_x - m * L1 - lg_y) - log1mexp(-(m + 1.0) * L1);
    return std::exp(log_pi0_ + ld * (L1 + theta) + log_bracket);
}

double StationaryDistribution::mgf_s21_by_sum(double theta) const
{
    const int ld = model_.ell_d();
    const int lu = model_.ell_u();
    double sum = 0.0;
    for (int l = ld; l <= lu; ++l)
        sum += std::exp(log_w1_[l] - log_z_ + theta * l);
    return sum;
}

} // namespace hdq
