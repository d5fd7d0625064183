#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nbmeans/distributions.hpp"

namespace nbmeans {

/// Parameters of the bounded Bernstein inequality
///
///   P(|mean(Z) - E mean(Z)| > eps) <= 2 exp(-n eps^2 / (2 (sigma2 + eps (b - a) / 3)))
///
/// for n independent variables supported on (a, b) with average variance
/// sigma2. `c_a` and `c_b` record the support inflation used to build a and b.
struct BernsteinContext {
    std::size_t n = 0;
    double sigma2 = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c_a = 1.0;
    double c_b = 1.0;

    double width() const noexcept { return b - a; }
};

/// Maps two samples onto one whose mean is mean(x) - mean(y):
/// Z_i = (n/n_x) X_i for the x block, Z_i = -(n/n_y) Y_j for the y block,
/// with n = n_x + n_y.
std::vector<double> two_sample_transform(std::span<const std::int64_t> x,
                                         std::span<const std::int64_t> y);

/// Plug-in context for the transformed sample:
///   n = n_x + n_y,
///   sigma2 = (n/n_x) s_x^2 + (n/n_y) s_y^2,
///   a = -c_a (n/n_y) max(Y),  b = c_b (n/n_x) max(X).
/// Throws DegenerateContext when both maxima are zero, InvalidArgument when
/// c_a or c_b is below one.
BernsteinContext build_context(const SampleStats& x, const SampleStats& y,
                               double c_a = 1.0, double c_b = 1.0);

/// One-sample context: n, sigma2 = s^2, a = 0, b = c_b max(sample).
BernsteinContext build_one_sample_context(const SampleStats& stats, double c_b = 1.0);

/// Half-width eps at which the Bernstein bound equals alpha: the positive
/// root of n eps^2 + (2/3)(b - a) L eps + 2 L sigma2 = 0 with L = log(alpha/2).
double epsilon_for_alpha(const BernsteinContext& ctx, double alpha);

/// Bernstein tail bound at eps, capped at one. Exact inverse of
/// epsilon_for_alpha on (0, 1).
double alpha_for_epsilon(const BernsteinContext& ctx, double epsilon);

} // namespace nbmeans
