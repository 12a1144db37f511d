#include "hdq/model.hpp"

#include "hdq/error.hpp"

#include <cmath>
#include <string>

namespace hdq {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::non_positive_rate: return "NonPositiveRate";
    case ErrorCode::level_order_violation: return "LevelOrderViolation";
    case ErrorCode::state_outside_space: return "StateOutsideS";
    case ErrorCode::domain_mismatch: return "DomainMismatch";
    case ErrorCode::precondition: return "PreconditionViolation";
    case ErrorCode::unstable: return "Unstable";
    case ErrorCode::infeasible_n: return "InfeasibleN";
    case ErrorCode::singular_system: return "SingularSystem";
    case ErrorCode::divergent_sum: return "DivergentSum";
    }
    return "Unknown";
}

std::string_view to_string(Region region) noexcept
{
    switch (region) {
    case Region::S11: return "S11";
    case Region::S21: return "S21";
    case Region::S12: return "S12";
    case Region::S22: return "S22";
    }
    return "?";
}

Ratios ratios_of(const ModelParams& p) noexcept
{
    return {p.lambda1 / p.mu1, p.lambda2 / p.mu2, p.lambda1 / p.mu2};
}

namespace {

bool positive_finite(double x) noexcept { return std::isfinite(x) && x > 0.0; }

void check_levels(int ell_d, int ell_u)
{
    if (ell_d < 1)
        throw Error(ErrorCode::level_order_violation, "ell_d must be at least 1, got " + std::to_string(ell_d));
    if (ell_d >= ell_u)
        throw Error(ErrorCode::level_order_violation,
                    "ell_d < ell_u required, got ell_d=" + std::to_string(ell_d) + " ell_u=" + std::to_string(ell_u));
}

} // namespace

ModelParams from_ratios(const Ratios& r, int ell_d, int ell_u)
{
    if (!positive_finite(r.rho1) || !positive_finite(r.rho2) || !positive_finite(r.rho12))
        throw Error(ErrorCode::non_positive_rate, "ratios must be positive and finite");
    check_levels(ell_d, ell_u);
    ModelParams p;
    p.mu1 = 1.0;
    p.lambda1 = r.rho1;
    p.mu2 = r.rho1 / r.rho12;
    p.lambda2 = r.rho2 * p.mu2;
    p.ell_d = ell_d;
    p.ell_u = ell_u;
    return p;
}

Model::Model(const ModelParams& p) : params_(p), ratios_(ratios_of(p)) {}

Model Model::validate(const ModelParams& p)
{
    if (!positive_finite(p.lambda1) || !positive_finite(p.mu1) || !positive_finite(p.lambda2) ||
        !positive_finite(p.mu2))
        throw Error(ErrorCode::non_positive_rate, "all four rates must be positive and finite");
    check_levels(p.ell_d, p.ell_u);
    return Model(p);
}

Model Model::from_ratios(const Ratios& r, int ell_d, int ell_u)
{
    return validate(hdq::from_ratios(r, ell_d, ell_u));
}

bool Model::contains(State s) const noexcept
{
    if (s.k == 1)
        return s.ell >= 0 && s.ell <= params_.ell_u;
    if (s.k == 2)
        return s.ell >= params_.ell_d;
    return false;
}

Region Model::region_of(State s) const
{
    if (!contains(s))
        throw Error(ErrorCode::state_outside_space,
                    "(" + std::to_string(s.ell) + "," + std::to_string(s.k) + ") is not in S");
    if (s.k == 1)
        return s.ell < params_.ell_d ? Region::S11 : Region::S21;
    return s.ell <= params_.ell_u ? Region::S12 : Region::S22;
}

Transitions Model::transitions(State s) const
{
    if (!contains(s))
        throw Error(ErrorCode::state_outside_space,
                    "(" + std::to_string(s.ell) + "," + std::to_string(s.k) + ") is not in S");
    const auto& p = params_;
    Transitions out;
    auto push = [&out](State to, double rate) { out.edges[out.count++] = Transition{to, rate}; };
    if (s.k == 1) {
        push(s.ell == p.ell_u ? State{s.ell + 1, 2} : State{s.ell + 1, 1}, p.lambda1);
        if (s.ell > 0)
            push(State{s.ell - 1, 1}, p.mu1);
    } else {
        push(State{s.ell + 1, 2}, p.lambda2);
        push(s.ell == p.ell_d ? State{s.ell - 1, 1} : State{s.ell - 1, 2}, p.mu2);
    }
    return out;
}

} // namespace hdq
