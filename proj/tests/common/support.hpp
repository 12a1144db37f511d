#pragma once

#include <hdq/diffusion.hpp>
#include <hdq/model.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace hdq::test {

inline double rel_gap(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

template <class F>
double integrate(F f, double a, double b)
{
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-12, &err);
}

inline Model tiny_model() { return Model::from_ratios({1.0, 0.5, 1.0}, 1, 2); }

/// The ranges of the oracle-equivalence grid.
inline std::vector<Model> random_models(int count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> r1(0.5, 1.5), r2(0.3, 0.97), r12(0.3, 1.5);
    std::vector<Model> out;
    for (int i = 0; i < count; ++i) {
        const Ratios r{r1(rng), r2(rng), r12(rng)};
        const int lu = std::uniform_int_distribution<int>(2, 60)(rng);
        const int ld = std::uniform_int_distribution<int>(1, lu - 1)(rng);
        out.push_back(Model::from_ratios(r, ld, lu));
    }
    return out;
}

/// 20 parameter sets, b1 in {-10, -1, 0, 1, 10}.
inline std::vector<DiffusionParams> diffusion_grid()
{
    std::vector<DiffusionParams> out;
    for (double b1 : {-10.0, -1.0, 0.0, 1.0, 10.0})
        for (double b2 : {-0.5, -2.0})
            for (double rho : {0.3, 1.2})
                out.push_back({b1, b2, 1.0 + rho, 4.0 + 2.0 * rho, rho});
    return out;
}

} // namespace hdq::test
