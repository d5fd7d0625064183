#pragma once

namespace nbmeans {

/// Standard normal CDF.
double normal_cdf(double x);

/// Upper tail 1 - Phi(x), accurate far into the tail.
double normal_upper_tail(double x);

/// Inverse standard normal CDF for p in (0, 1). Absolute error below 1e-12.
double normal_quantile(double p);

/// z_{1 - alpha/2}.
double two_sided_critical_value(double alpha);

} // namespace nbmeans
