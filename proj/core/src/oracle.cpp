#include "hdq/oracle.hpp"

#include "hdq/error.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <string>

namespace hdq::oracle {

TruncatedGenerator::TruncatedGenerator(const Model& model, int l_max) : model_(model), l_max_(l_max)
{
    const int ld = model.ell_d();
    const int lu = model.ell_u();
    if (l_max < lu + 2)
        throw Error(ErrorCode::precondition, "l_max must be at least ell_u + 2 = " + std::to_string(lu + 2));

    states_.reserve(static_cast<std::size_t>(lu + 1 + l_max - ld + 1));
    for (int l = 0; l <= lu; ++l)
        states_.push_back({l, 1});
    for (int l = ld; l <= l_max; ++l)
        states_.push_back({l, 2});

    entries_.reserve(3 * states_.size());
    std::vector<double> diag(states_.size(), 0.0);
    for (std::size_t i = 0; i < states_.size(); ++i) {
        for (const auto& t : model.transitions(states_[i])) {
            if (t.to.ell > l_max)
                continue;
            entries_.push_back({i, index_of(t.to), t.rate});
            diag[i] -= t.rate;
        }
    }
    for (std::size_t i = 0; i < states_.size(); ++i)
        entries_.push_back({i, i, diag[i]});
}

std::size_t TruncatedGenerator::index_of(State s) const
{
    const int ld = model_.ell_d();
    const int lu = model_.ell_u();
    if (s.k == 1 && s.ell >= 0 && s.ell <= lu)
        return static_cast<std::size_t>(s.ell);
    if (s.k == 2 && s.ell >= ld && s.ell <= l_max_)
        return static_cast<std::size_t>(lu + 1 + s.ell - ld);
    throw Error(ErrorCode::state_outside_space,
                "(" + std::to_string(s.ell) + "," + std::to_string(s.k) + ") is not in the truncated space");
}

double ProbabilityMap::total() const
{
    double s = 0.0;
    for (double p : probs)
        s += p;
    return s;
}

int truncate_level(const Model& model, double eps)
{
    if (!(eps > 0.0 && eps < 1.0))
        throw Error(ErrorCode::precondition, "eps must lie in (0, 1)");
    if (!model.stable())
        throw Error(ErrorCode::unstable, "truncation requires rho2 < 1");
    const double steps = std::ceil(std::log(eps) / std::log(model.ratios().rho2));
    return std::max(model.ell_u() + static_cast<int>(steps), model.ell_u() + 2);
}

ProbabilityMap solve_balance(const Model& model, int l_max)
{
    if (!model.stable())
        throw Error(ErrorCode::unstable, "balance solve requires rho2 < 1");
    const TruncatedGenerator gen(model, l_max);
    const auto n = static_cast<Eigen::Index>(gen.size());

    // Rows of A are the columns of Q (x Q = 0 <=> Q^T x^T = 0). Row 0 pins
    // x_0 = 1 so A stays banded; the solution is normalized afterwards.
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(gen.entries().size() + 1);
    for (const auto& e : gen.entries()) {
        if (e.col == 0)
            continue;
        trips.emplace_back(static_cast<Eigen::Index>(e.col), static_cast<Eigen::Index>(e.row), e.rate);
    }
    trips.emplace_back(0, 0, 1.0);
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    a.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success)
        throw Error(ErrorCode::singular_system, "sparse LU factorization failed: " + lu.lastErrorMessage());
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(0) = 1.0;
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success || !x.allFinite())
        throw Error(ErrorCode::singular_system, "sparse LU solve failed");

    ProbabilityMap out;
    out.states = gen.states();
    out.probs.resize(gen.size());
    const double total = x.sum();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double v = x(i);
        if (v < -1e-10 * total)
            throw Error(ErrorCode::singular_system, "balance solution has a negative component " + std::to_string(v / total));
        v = std::max(v, 0.0);
        out.probs[static_cast<std::size_t>(i)] = v;
        sum += v;
    }
    for (double& p : out.probs)
        p /= sum;
    return out;
}

double generator_residual(const TruncatedGenerator& gen, const ProbabilityMap& x)
{
    if (x.probs.size() != gen.size())
        throw Error(ErrorCode::domain_mismatch, "probability map does not match the generator");
    std::vector<double> flow(gen.size(), 0.0);
    double scale = 0.0;
    for (const auto& e : gen.entries()) {
        const double f = x.probs[e.row] * e.rate;
        flow[e.col] += f;
        if (e.row == e.col)
            scale = std::max(scale, std::abs(f));
    }
    double worst = 0.0;
    for (double f : flow)
        worst = std::max(worst, std::abs(f));
    return scale > 0.0 ? worst / scale : worst;
}

double total_variation(const ProbabilityMap& p, const ProbabilityMap& q)
{
    if (p.states != q.states || p.probs.size() != q.probs.size() || p.probs.size() != p.states.size())
        throw Error(ErrorCode::domain_mismatch, "total variation needs maps over the same states");
    double s = 0.0;
    for (std::size_t i = 0; i < p.probs.size(); ++i)
        s += std::abs(p.probs[i] - q.probs[i]);
    return 0.5 * s;
}

ProbabilityMap restrict_to(const StationaryDistribution& dist, const std::vector<State>& states)
{
    ProbabilityMap out;
    out.states = states;
    out.probs.reserve(states.size());
    for (const auto& s : states)
        out.probs.push_back(dist.pi(s));
    return out;
}

double mgf_by_summation(const StationaryDistribution& dist, Region region, double theta, int l_max)
{
    const auto& model = dist.model();
    const int ld = model.ell_d();
    const int lu = model.ell_u();
    if (l_max < lu + 1)
        throw Error(ErrorCode::precondition, "l_max must be at least ell_u + 1");
    const double rho2 = model.ratios().rho2;
    double sum = 0.0;
    switch (region) {
    case Region::S11:
        for (int l = 0; l < ld; ++l)
            sum += std::exp(theta * l) * dist.pi({l, 1});
        return sum;
    case Region::S21:
        for (int l = ld; l <= lu; ++l)
            sum += std::exp(theta * l) * dist.pi({l, 1});
        return sum;
    case Region::S12:
        for (int l = ld; l <= lu; ++l)
            sum += std::exp(theta * l) * dist.pi({l, 2});
        return sum;
    case Region::S22: {
        const double log_step = std::log(rho2) + theta;
        if (!(log_step < 0.0))
            throw Error(ErrorCode::divergent_sum, "psi_22 diverges for theta >= log(1/rho2)");
        for (int l = lu + 1; l <= l_max; ++l)
            sum += std::exp(theta * l) * dist.pi({l, 2});
        sum += std::exp(theta * (l_max + 1)) * dist.pi({l_max + 1, 2}) / -std::expm1(log_step);
        return sum;
    }
    }
    return sum;
}

BalanceResidual balance_residual(const Model& model, const std::function<double(State)>& pi, int l_max)
{
    const int ld = model.ell_d();
    const int lu = model.ell_u();
    if (l_max < lu + 1)
        throw Error(ErrorCode::precondition, "l_max must be at least ell_u + 1");

    // Flows are accumulated over ell <= l_max + 1 so every checked state
    // receives all of its in-flow.
    const int top = l_max + 1;
    auto idx = [&](State s) -> std::size_t {
        return s.k == 1 ? static_cast<std::size_t>(s.ell) : static_cast<std::size_t>(lu + 1 + s.ell - ld);
    };
    const std::size_t n = static_cast<std::size_t>(lu + 1 + top - ld + 1);
    std::vector<double> inflow(n, 0.0);
    std::vector<double> outflow(n, 0.0);
    auto visit = [&](State s) {
        const double p = pi(s);
        for (const auto& t : model.transitions(s)) {
            outflow[idx(s)] += p * t.rate;
            if (t.to.ell <= top)
                inflow[idx(t.to)] += p * t.rate;
        }
    };
    for (int l = 0; l <= lu; ++l)
        visit({l, 1});
    for (int l = ld; l <= top; ++l)
        visit({l, 2});

    BalanceResidual res;
    auto check = [&](State s) {
        const double out = outflow[idx(s)];
        const double in = inflow[idx(s)];
        const double denom = std::max(std::abs(out), std::abs(in));
        const double rel = denom > 0.0 ? std::abs(out - in) / denom : 0.0;
        if (!(rel <= res.max_relative)) {
            res.max_relative = rel;
            res.worst = s;
        }
    };
    for (int l = 0; l <= lu; ++l)
        check({l, 1});
    for (int l = ld; l <= l_max; ++l)
        check({l, 2});
    return res;
}

} // namespace hdq::oracle
