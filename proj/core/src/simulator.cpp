#include "hdq/simulator.hpp"

#include "hdq/error.hpp"
#include "hdq/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <span>

namespace hdq::sim {

namespace {

double unit_open_closed(Rng& rng)
{
    // (0, 1]: 53 random mantissa bits, shifted away from zero.
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

struct BatchStats {
    double mean = 0.0;
    double halfwidth = 0.0;
};

BatchStats batch_means(std::span<const double> values, double t975)
{
    const auto b = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values)
        mean += v;
    mean /= b;
    double ss = 0.0;
    for (double v : values)
        ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (b - 1.0));
    return {mean, t975 * sd / std::sqrt(b)};
}

} // namespace

double standard_exponential(Rng& rng)
{
    return -std::log(unit_open_closed(rng));
}

Step step(State state, const Model& model, Rng& rng)
{
    const Transitions out = model.transitions(state);
    const double total = out.total_rate();
    const double holding = standard_exponential(rng) / total;
    if (out.count == 1)
        return {out.edges[0].to, holding};
    const double u = unit_open_closed(rng) * total;
    return {u <= out.edges[0].rate ? out.edges[0].to : out.edges[1].to, holding};
}

SimResult simulate(const SimConfig& cfg)
{
    if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon))
        throw Error(ErrorCode::precondition, "horizon must be positive and finite");
    if (!(cfg.warmup_fraction >= 0.0 && cfg.warmup_fraction < 1.0))
        throw Error(ErrorCode::precondition, "warmup_fraction must lie in [0, 1)");
    if (cfg.batches < 2)
        throw Error(ErrorCode::precondition, "at least two batches are required");
    const Model model = Model::validate(cfg.model);
    if (!model.stable())
        throw Error(ErrorCode::unstable, "simulation requires rho2 < 1");

    const int ld = model.ell_d();
    const int lu = model.ell_u();
    const int nb = cfg.batches;
    const double start = cfg.warmup_fraction * cfg.horizon;
    const double window = cfg.horizon - start;
    const double batch_len = window / nb;

    std::vector<double> t1(static_cast<std::size_t>(lu) + 1, 0.0);
    std::vector<double> t2(static_cast<std::size_t>(lu - ld) + 1, 0.0);
    std::vector<double> b_area(static_cast<std::size_t>(nb), 0.0);
    std::vector<double> b_empty(static_cast<std::size_t>(nb), 0.0);
    std::vector<std::array<double, 4>> b_region(static_cast<std::size_t>(nb), std::array<double, 4>{});

    Rng rng(cfg.seed);
    State s{0, 1};
    double t = 0.0;
    std::uint64_t events = 0;

    // Adds the part of [a, a + h) inside batch j to the batch accumulators.
    auto credit = [&](State st, double dt, std::size_t j) {
        b_area[j] += st.ell * dt;
        if (st.ell == 0)
            b_empty[j] += dt;
        b_region[j][index_of(model.region_of(st))] += dt;
    };

    while (t < cfg.horizon) {
        const Step nx = step(s, model, rng);
        const double end = std::min(t + nx.holding, cfg.horizon);
        if (end > start) {
            const double a = std::max(t, start);
            const double dt = end - a;
            if (s.k == 1) {
                t1[static_cast<std::size_t>(s.ell)] += dt;
            } else {
                const auto i = static_cast<std::size_t>(s.ell - ld);
                if (i >= t2.size())
                    t2.resize(i + 1, 0.0);
                t2[i] += dt;
            }
            auto j = static_cast<std::size_t>(std::min<double>((a - start) / batch_len, nb - 1));
            double lo = a;
            while (lo < end) {
                const double edge = j + 1 < static_cast<std::size_t>(nb) ? start + (j + 1) * batch_len : end;
                const double hi = std::min(end, edge);
                credit(s, hi - lo, j);
                lo = hi;
                ++j;
            }
        }
        t += nx.holding;
        s = nx.next;
        ++events;
    }

    SimResult res;
    res.events = events;
    res.level1.resize(t1.size());
    res.level2.resize(t2.size());
    const std::size_t top = std::max<std::size_t>(static_cast<std::size_t>(lu) + 1, ld + t2.size());
    res.occupancy.assign(top, 0.0);
    for (std::size_t l = 0; l < t1.size(); ++l) {
        res.level1[l] = t1[l] / window;
        res.occupancy[l] += res.level1[l];
    }
    for (std::size_t i = 0; i < t2.size(); ++i) {
        res.level2[i] = t2[i] / window;
        res.occupancy[ld + i] += res.level2[i];
    }

    const double t975 = numerics::student_t_975(nb - 1);
    res.batch_mean_L.resize(static_cast<std::size_t>(nb));
    std::vector<double> tmp(static_cast<std::size_t>(nb));
    for (std::size_t j = 0; j < tmp.size(); ++j)
        res.batch_mean_L[j] = b_area[j] / batch_len;
    const BatchStats lstat = batch_means(res.batch_mean_L, t975);
    res.time_avg_L = lstat.mean;
    res.ci_halfwidth = lstat.halfwidth;

    for (std::size_t j = 0; j < tmp.size(); ++j)
        tmp[j] = b_empty[j] / batch_len;
    const BatchStats estat = batch_means(tmp, t975);
    res.empty = {estat.mean, estat.halfwidth};

    for (auto region : kAllRegions) {
        const int r = index_of(region);
        for (std::size_t j = 0; j < tmp.size(); ++j)
            tmp[j] = b_region[j][r] / batch_len;
        const BatchStats rs = batch_means(tmp, t975);
        res.region_occupancy[r] = rs.mean;
        res.region_ci[r] = rs.halfwidth;
    }
    return res;
}

std::array<Estimate, 4> estimate_regions(const SimConfig& cfg)
{
    const SimResult r = simulate(cfg);
    std::array<Estimate, 4> out{};
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = {r.region_occupancy[i], r.region_ci[i]};
    return out;
}

} // namespace hdq::sim
