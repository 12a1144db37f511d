#pragma once

#include <cmath>
#include <span>

namespace hdq::numerics {

/// log of sum_{j=0}^{i} exp(j * log_ratio), stable for any sign of log_ratio
/// and for log_ratio arbitrarily close to 0.
double log_geometric_sum(double log_ratio, long i);

inline double geometric_sum(double log_ratio, long i) { return std::exp(log_geometric_sum(log_ratio, i)); }

/// (exp(z) - 1) / z, equal to 1 at z = 0.
double expm1_ratio(double z);

/// (exp(z) - 1 - z) / z^2, equal to 1/2 at z = 0.
double expm1_second_ratio(double z);

/// log(sum exp(v)) over a non-empty span.
double log_sum_exp(std::span<const double> values);

/// 97.5% quantile of Student's t with the given degrees of freedom.
double student_t_975(int degrees_of_freedom);

} // namespace hdq::numerics

