#pragma once

#include "hdq/model.hpp"

namespace hdq {

/// Parameters of the heavy-traffic limit law.
struct DiffusionParams {
    double b1 = 0.0;    ///< drift scale of background 1, any sign
    double b2 = -1.0;   ///< drift scale of background 2, must be negative
    double ell_d = 0.0; ///< scaled lower threshold
    double ell_u = 0.0; ///< scaled upper threshold, > ell_d
    double rho12 = 0.0; ///< limit of lambda1 / mu2
};

/// Stationary law nu of the diffusion limit of L / sqrt(n).
///
/// The density is f = f11 + f21 + f12 + f22 with supports [0, ell_d),
/// [ell_d, ell_u], [ell_d, ell_u] and (ell_u, inf). Every quantity has a
/// b1 == 0 branch and a b1 != 0 branch; the latter is written in terms of
/// expm1-type kernels so it stays accurate as b1 -> 0.
class LimitLaw {
public:
    /// Throws hdq::Error(precondition) if b2 >= 0, ell_d <= 0,
    /// ell_u <= ell_d or rho12 <= 0.
    explicit LimitLaw(const DiffusionParams& params);

    const DiffusionParams& params() const noexcept { return p_; }

    /// Normalization constant C0. On the b1 != 0 branch it scales like
    /// 1 / b1^2 and so is not continuous at b1 = 0 by itself; the products
    /// that enter the density are.
    double c0() const noexcept { return c0_; }

    /// Limit of sqrt(n) * pi^(n)(0, 1); also the height of f11 at x = 0.
    double limit_sqrtn_pi0() const noexcept { return head_; }

    double density(Region region, double x) const;
    double density(double x) const;
    double cdf(double x) const;
    /// Integral of x nu(dx).
    double mean() const;
    double region_mass(Region region) const { return mgf_component(region, 0.0); }

    /// Integral of exp(theta x) f_region(x) dx; +infinity for S22 when
    /// theta >= -b2.
    double mgf_component(Region region, double theta) const;

private:
    double cdf_band(double x) const;

    DiffusionParams p_;
    double width_ = 0.0;     ///< ell_u - ell_d
    double c0_ = 0.0;
    double kappa_ = 0.0;     ///< b1^2 C0, or C0 / width when b1 == 0
    double head_ = 0.0;      ///< f11(0)
    double level2_ = 0.0;    ///< common factor of f12 and f22
};

} // namespace hdq
