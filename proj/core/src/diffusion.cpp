#include "hdq/diffusion.hpp"

#include "hdq/error.hpp"
#include "hdq/numerics.hpp"

#include <cmath>
#include <limits>

namespace hdq {

namespace {

using numerics::expm1_ratio;
using numerics::expm1_second_ratio;

constexpr double kInf = std::numeric_limits<double>::infinity();

// [(e^{zD} - 1)/z^3 + e^{z u}(z P/2 - D)/z^2] with P = u^2 - d^2, D = u - d.
// The two terms cancel to O(1) as z -> 0, so small |z u| uses the Taylor
// series  sum_{n>=3} [D^3 (zD)^{n-3}/n! + (P/2) u (zu)^{n-3}/(n-2)!
//                     - D u^2 (zu)^{n-3}/(n-1)!].
double band_first_moment(double z, double d, double u)
{
    const double width = u - d;
    const double p = u * u - d * d;
    if (std::abs(z) * u >= 0.5) {
        return std::expm1(z * width) / (z * z * z) + std::exp(z * u) * (z * p / 2.0 - width) / (z * z);
    }
    const double wd = z * width;
    const double wu = z * u;
    double pow_d = 1.0;
    double pow_u = 1.0;
    double fact_n = 6.0;  // n!
    double fact_n2 = 1.0; // (n-2)!
    double fact_n1 = 2.0; // (n-1)!
    double sum = 0.0;
    for (int n = 3; n < 60; ++n) {
        const double term = width * width * width * pow_d / fact_n + (p / 2.0) * u * pow_u / fact_n2 -
                            width * u * u * pow_u / fact_n1;
        sum += term;
        if (n > 6 && std::abs(term) < 1e-17 * std::abs(sum))
            break;
        pow_d *= wd;
        pow_u *= wu;
        fact_n *= n + 1;
        fact_n2 *= n - 1;
        fact_n1 *= n;
    }
    return sum;
}

} // namespace

LimitLaw::LimitLaw(const DiffusionParams& params) : p_(params)
{
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(p_.b1) || !finite(p_.b2) || !finite(p_.ell_d) || !finite(p_.ell_u) || !finite(p_.rho12))
        throw Error(ErrorCode::precondition, "diffusion parameters must be finite");
    if (!(p_.b2 < 0.0))
        throw Error(ErrorCode::precondition, "b2 must be negative");
    if (!(p_.ell_d > 0.0 && p_.ell_u > p_.ell_d))
        throw Error(ErrorCode::precondition, "0 < ell_d < ell_u required");
    if (!(p_.rho12 > 0.0))
        throw Error(ErrorCode::precondition, "rho12 must be positive");

    const double b1 = p_.b1;
    const double b2 = p_.b2;
    const double d = p_.ell_d;
    const double u = p_.ell_u;
    const double r = p_.rho12;
    width_ = u - d;

    if (b1 == 0.0) {
        c0_ = 1.0 / ((u + d) / 2.0 - r / b2);
        kappa_ = c0_ / width_;
        head_ = c0_;
        level2_ = c0_ * r / (b2 * width_);
    } else {
        // 1 / (b1^2 C0), regrouped so that no term is O(1/b1).
        const double k = width_ * u * expm1_ratio(b1 * u) - width_ * width_ * expm1_second_ratio(b1 * width_) -
                         width_ * r / b2 * std::exp(b1 * u);
        kappa_ = 1.0 / k;
        c0_ = kappa_ / (b1 * b1);
        head_ = kappa_ * width_ * expm1_ratio(b1 * width_);
        level2_ = kappa_ * r * std::exp(b1 * u) / b2;
    }
}

double LimitLaw::density(Region region, double x) const
{
    const double b1 = p_.b1;
    const double b2 = p_.b2;
    const double d = p_.ell_d;
    const double u = p_.ell_u;
    switch (region) {
    case Region::S11:
        return (x >= 0.0 && x < d) ? head_ * std::exp(b1 * x) : 0.0;
    case Region::S21:
        if (!(x >= d && x <= u))
            return 0.0;
        return kappa_ * std::exp(b1 * x) * (u - x) * expm1_ratio(b1 * (u - x));
    case Region::S12:
        return (x >= d && x <= u) ? level2_ * std::expm1(b2 * (x - d)) : 0.0;
    case Region::S22:
        return x > u ? level2_ * std::expm1(b2 * width_) * std::exp(b2 * (x - u)) : 0.0;
    }
    return 0.0;
}

double LimitLaw::density(double x) const
{
    double f = 0.0;
    for (auto region : kAllRegions)
        f += density(region, x);
    return f;
}

double LimitLaw::cdf_band(double x) const
{
    // Mass of f21 + f12 on [ell_d, x] for x in the band.
    const double b1 = p_.b1;
    const double b2 = p_.b2;
    const double rest = p_.ell_u - x;
    const double y = x - p_.ell_d;
    const double upper = kappa_ * std::exp(b1 * p_.ell_u) *
                         (width_ * width_ * expm1_second_ratio(-b1 * width_) - rest * rest * expm1_second_ratio(-b1 * rest));
    const double lower = level2_ * b2 * y * y * expm1_second_ratio(b2 * y);
    return upper + lower;
}

double LimitLaw::cdf(double x) const
{
    const double b1 = p_.b1;
    const double b2 = p_.b2;
    const double d = p_.ell_d;
    const double u = p_.ell_u;
    if (!(x > 0.0))
        return 0.0;
    if (x < d)
        return head_ * x * expm1_ratio(b1 * x);
    const double at_d = head_ * d * expm1_ratio(b1 * d);
    if (x <= u)
        return at_d + cdf_band(x);
    const double at_u = at_d + cdf_band(u);
    if (std::isinf(x))
        return at_u - level2_ * std::expm1(b2 * width_) / b2;
    const double over = x - u;
    return at_u + level2_ * std::expm1(b2 * width_) * over * expm1_ratio(b2 * over);
}

double LimitLaw::mean() const
{
    const double b1 = p_.b1;
    const double b2 = p_.b2;
    const double d = p_.ell_d;
    const double u = p_.ell_u;
    const double r = p_.rho12;
    if (b1 == 0.0)
        return c0_ * ((u * u + u * d + d * d) / 6.0 + r / (b2 * b2) * (1.0 - b2 * (u + d) / 2.0));
    const double p = u * u - d * d;
    return kappa_ * (band_first_moment(b1, d, u) + r * std::exp(b1 * u) / (b2 * b2) * (width_ - b2 * p / 2.0));
}

double LimitLaw::mgf_component(Region region, double theta) const
{
    const double b1 = p_.b1;
    const double b2 = p_.b2;
    const double d = p_.ell_d;
    const double u = p_.ell_u;
    switch (region) {
    case Region::S11:
        return head_ * d * expm1_ratio((theta + b1) * d);
    case Region::S21:
        if (b1 == 0.0)
            return kappa_ * width_ * width_ * std::exp(theta * d) * expm1_second_ratio(theta * width_);
        return kappa_ / b1 * width_ *
               (std::exp(b1 * u + theta * d) * expm1_ratio(theta * width_) -
                std::exp((theta + b1) * d) * expm1_ratio((theta + b1) * width_));
    case Region::S12:
        return level2_ * std::exp(theta * d) * width_ *
               (expm1_ratio((theta + b2) * width_) - expm1_ratio(theta * width_));
    case Region::S22:
        if (theta + b2 >= 0.0)
            return kInf;
        return -level2_ * std::expm1(b2 * width_) * std::exp(theta * u) / (theta + b2);
    }
    return 0.0;
}

} // namespace hdq
