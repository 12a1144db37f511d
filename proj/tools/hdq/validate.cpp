#include "cli.hpp"

#include <hdq/diffusion.hpp>
#include <hdq/error.hpp>
#include <hdq/oracle.hpp>
#include <hdq/stationary.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace hdq::cli {

namespace {

constexpr double kFault = 1e-6;

std::vector<Model> model_grid(int count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> r1(0.5, 1.5), r2(0.3, 0.97), r12(0.3, 1.5);
    std::vector<Model> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const Ratios r{r1(rng), r2(rng), r12(rng)};
        const int lu = std::uniform_int_distribution<int>(2, 60)(rng);
        const int ld = std::uniform_int_distribution<int>(1, lu - 1)(rng);
        out.push_back(Model::from_ratios(r, ld, lu));
    }
    return out;
}

std::vector<DiffusionParams> diffusion_grid()
{
    std::vector<DiffusionParams> out;
    for (double b1 : {-10.0, -1.0, 0.0, 1.0, 10.0})
        for (double b2 : {-0.5, -2.0})
            for (double rho : {0.3, 1.2})
                out.push_back({b1, b2, 1.0 + rho, 4.0 + 2.0 * rho, rho});
    return out;
}

double rel_gap(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

} // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& opts)
{
    if (opts.grid < 1)
        throw Error(ErrorCode::precondition, "grid size must be at least 1");
    const auto models = model_grid(opts.grid, opts.seed);
    const auto fault = [&](const char* name) { return opts.fault == name ? 1.0 + kFault : 1.0; };

    CheckResult tv{"oracle_tv", 0.0, 1e-10};
    CheckResult bal{"balance_residual", 0.0, 1e-12};
    CheckResult norm{"normalization", 0.0, 1e-10};
    CheckResult cont{"continuity", 0.0, 1e-6};
    CheckResult dcont{"diffusion_continuity", 0.0, 1e-5};

    for (const auto& m : models) {
        const StationaryDistribution d(m);
        const int l_max = oracle::truncate_level(m, 1e-17);
        const auto solved = oracle::solve_balance(m, l_max);
        auto closed = oracle::restrict_to(d, solved.states);
        closed.probs[0] *= fault("oracle_tv");
        tv.max_residual = std::max(tv.max_residual, oracle::total_variation(solved, closed));

        const double f = fault("balance_residual");
        const int ld = m.ell_d();
        const auto r = oracle::balance_residual(
            m, [&](State s) { return d.pi(s) * (s == State{ld, 2} ? f : 1.0); }, m.ell_u() + 20);
        bal.max_residual = std::max(bal.max_residual, r.max_relative);

        double total = 0.0;
        for (auto region : kAllRegions)
            total += d.region_mass(region);
        norm.max_residual = std::max(norm.max_residual, std::abs(total * fault("normalization") - 1.0));
    }

    for (const auto& dp : diffusion_grid()) {
        const LimitLaw law(dp);
        double total = 0.0;
        for (auto region : kAllRegions)
            total += law.region_mass(region);
        norm.max_residual = std::max({norm.max_residual, std::abs(total - 1.0), std::abs(law.cdf(INFINITY) - 1.0)});
    }

    // Closed forms either side of rho1 = 1 against the unit branch.
    for (const auto& m : models) {
        const auto& r0 = m.ratios();
        const Model unit = Model::from_ratios({1.0, r0.rho2, r0.rho12}, m.ell_d(), m.ell_u());
        const StationaryDistribution du(unit, Rho1Branch::unit);
        for (double eps : {-1e-9, 1e-9}) {
            const Model near = Model::from_ratios({1.0 + eps, r0.rho2, r0.rho12}, m.ell_d(), m.ell_u());
            const StationaryDistribution dn(near, Rho1Branch::generic);
            for (int l = 0; l <= m.ell_u() + 5; ++l) {
                for (int k : {1, 2}) {
                    const State s{l, k};
                    if (!m.contains(s))
                        continue;
                    const double v = dn.pi(s) * (s == State{0, 1} ? fault("continuity") : 1.0);
                    cont.max_residual = std::max(cont.max_residual, rel_gap(v, du.pi(s)));
                }
            }
        }
    }
    for (const auto& dp0 : diffusion_grid()) {
        if (dp0.b1 != 0.0)
            continue;
        const LimitLaw at0(dp0);
        for (double eps : {-1e-7, 1e-7}) {
            DiffusionParams dp = dp0;
            dp.b1 = eps;
            const LimitLaw near(dp);
            const double mean = near.mean() * (opts.fault == "diffusion_continuity" ? 1.0 + 100.0 * kFault : 1.0);
            double gap = std::max(rel_gap(mean, at0.mean()), rel_gap(near.limit_sqrtn_pi0(), at0.limit_sqrtn_pi0()));
            for (double x : {0.5 * dp.ell_d, 0.5 * (dp.ell_d + dp.ell_u), dp.ell_u + 1.0})
                gap = std::max(gap, rel_gap(near.density(x), at0.density(x)));
            dcont.max_residual = std::max(dcont.max_residual, gap);
        }
    }

    return {tv, bal, norm, cont, dcont};
}

} // namespace hdq::cli
