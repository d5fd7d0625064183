#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nbmeans/concentration.hpp"
#include "nbmeans/distributions.hpp"

namespace nbmeans {

enum class MethodKind { Normal, Gamma, ChiSquare, Bernstein, Mixture, Bootstrap };

std::string_view to_string(MethodKind kind) noexcept;
/// Accepts the lowercase names produced by to_string ("chisquare" also as
/// "chi-square"). Throws ParseError otherwise.
MethodKind parse_method(std::string_view name);

struct IntervalEstimate {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.95;
    MethodKind method = MethodKind::Normal;
    /// Zero-width interval produced from data with no spread (warning).
    bool degenerate = false;

    double length() const noexcept { return upper - lower; }
    double center() const noexcept { return 0.5 * (lower + upper); }
    bool contains(double value) const noexcept { return lower <= value && value <= upper; }
};

struct TestResult {
    double null_value = 0.0;
    /// mean(x) - mean(y) - null_value
    double statistic = 0.0;
    double p_value = 1.0;
    MethodKind method = MethodKind::Normal;
    bool degenerate = false;
};

/// One arm of a parametric variance-grid cell.
struct GridArm {
    MethodKind kind;
    NegBinParams params;
    std::size_t n;
    /// Per-observation variance for a Normal arm; defaults to mu + mu^2/theta.
    std::optional<double> variance;
};

/// Variance of mean(X) - mean(Y) for one of the nine Normal/Gamma/ChiSquare
/// combinations. Per-arm contributions:
///   Normal:    sigma^2 / n      (sigma^2 = mu (mu + theta) / theta by default)
///   Gamma:     mu^2 / (n theta)
///   ChiSquare: 2 mu
double variance_of_difference(const GridArm& x, const GridArm& y);

struct SelectorThresholds {
    std::size_t n_large = 100;
    double theta_large = 0.1;
    double chi_square_tolerance = 0.1;
};

/// Rule-of-thumb choice of one-sample method.
///
/// ChiSquare when mu is within the relative tolerance of 2 n theta; otherwise
/// small n / small theta -> Bernstein, large n / small theta -> Gamma,
/// large theta -> Normal. "Large" means at or above the threshold.
MethodKind select_method(std::size_t n, double mu, double theta,
                         const SelectorThresholds& thresholds = {});

enum class VarianceMode { Direct, Grid };

struct GridCell {
    GridArm x;
    GridArm y;
};

/// mean(x) - mean(y) +- z_{1-alpha/2} sqrt(V). In Direct mode
/// V = s_x^2/n_x + s_y^2/n_y; in Grid mode V comes from `cell`.
IntervalEstimate ci_normal_two_sample(const SampleStats& x, const SampleStats& y, double alpha,
                                      VarianceMode mode = VarianceMode::Direct,
                                      const std::optional<GridCell>& cell = std::nullopt);

/// mean(x) - mean(y) +- eps from the two-sample Bernstein context. An all-zero
/// pair of samples yields a zero-width interval at 0 flagged degenerate.
IntervalEstimate ci_bernstein_two_sample(const SampleStats& x, const SampleStats& y,
                                         double alpha, double c_a = 1.0, double c_b = 1.0);
IntervalEstimate ci_bernstein_two_sample(std::span<const std::int64_t> x,
                                         std::span<const std::int64_t> y, double alpha,
                                         double c_a = 1.0, double c_b = 1.0);

/// Endpoint-wise w * normal + (1 - w) * bernstein.
IntervalEstimate ci_mixture(const IntervalEstimate& normal_ci,
                            const IntervalEstimate& bernstein_ci, double w = 0.5);

/// Two-sided p-value for H0: mu_x - mu_y = null_value, from the Normal z
/// statistic or the Bernstein bound at eps = |mean(x) - mean(y) - null_value|.
TestResult test_mean_difference(const SampleStats& x, const SampleStats& y, double null_value,
                                MethodKind method, double c_a = 1.0, double c_b = 1.0);
TestResult test_mean_difference(std::span<const std::int64_t> x,
                                std::span<const std::int64_t> y, double null_value,
                                MethodKind method, double c_a = 1.0, double c_b = 1.0);

IntervalEstimate ci_normal_one_sample(const SampleStats& stats, double alpha);
IntervalEstimate ci_bernstein_one_sample(const SampleStats& stats, double alpha,
                                         double c_b = 1.0);
IntervalEstimate ci_bernstein_one_sample(std::span<const std::int64_t> sample, double alpha,
                                         double c_b = 1.0);

struct GammaParams {
    double shape;
    double rate;
};

/// Gamma approximation to the mean of n NB(mu, theta) draws:
/// shape n theta, rate n theta / mu.
GammaParams gamma_approx_params(double mu, double theta, std::size_t n);

/// `trials` draws of Gamma_x - Gamma_y, each gamma the approximation to one
/// sample mean (shape n theta, rate n theta / mu).
std::vector<double> simulate_gamma_difference(const NegBinParams& x, const NegBinParams& y,
                                              std::size_t n_x, std::size_t n_y,
                                              std::size_t trials, std::uint64_t seed);

/// Kolmogorov-Smirnov distance between simulated Gamma_x - Gamma_y (the gamma
/// approximations to the two sample means) and the Normal with matching mean
/// and variance mu_x^2/(n_x theta_x) + mu_y^2/(n_y theta_y).
double normal_approx_divergence(const NegBinParams& x, const NegBinParams& y, std::size_t n_x,
                                std::size_t n_y, std::size_t trials, std::uint64_t seed);

} // namespace nbmeans
