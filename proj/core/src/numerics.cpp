#include "hdq/numerics.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hdq::numerics {

namespace {

// log(1 - exp(x)) for x < 0.
double log1mexp(double x)
{
    return x < -std::numbers::ln2 ? std::log1p(-std::exp(x)) : std::log(-std::expm1(x));
}

} // namespace

double log_geometric_sum(double log_ratio, long i)
{
    if (i <= 0)
        return 0.0;
    if (log_ratio == 0.0)
        return std::log(static_cast<double>(i) + 1.0);
    if (log_ratio > 0.0)
        return static_cast<double>(i) * log_ratio + log_geometric_sum(-log_ratio, i);
    return log1mexp(static_cast<double>(i + 1) * log_ratio) - log1mexp(log_ratio);
}

double expm1_ratio(double z)
{
    if (z == 0.0)
        return 1.0;
    return std::expm1(z) / z;
}

double expm1_second_ratio(double z)
{
    if (std::abs(z) < 0.1) {
        // sum_k z^k / (k+2)!
        double term = 0.5;
        double sum = term;
        for (int k = 1; k < 20; ++k) {
            term *= z / static_cast<double>(k + 2);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum))
                break;
        }
        return sum;
    }
    return (std::expm1(z) - z) / (z * z);
}

double log_sum_exp(std::span<const double> values)
{
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values)
        m = std::max(m, v);
    if (!std::isfinite(m))
        return m;
    double s = 0.0;
    for (double v : values)
        s += std::exp(v - m);
    return m + std::log(s);
}

double student_t_975(int degrees_of_freedom)
{
    boost::math::students_t dist(static_cast<double>(degrees_of_freedom));
    return boost::math::quantile(dist, 0.975);
}

} // namespace hdq::numerics
