#include "nbmeans/inference.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "nbmeans/errors.hpp"
#include "nbmeans/normal.hpp"
#include "nbmeans/random.hpp"

namespace nbmeans {

std::string_view to_string(MethodKind kind) noexcept {
    switch (kind) {
    case MethodKind::Normal: return "normal";
    case MethodKind::Gamma: return "gamma";
    case MethodKind::ChiSquare: return "chisquare";
    case MethodKind::Bernstein: return "bernstein";
    case MethodKind::Mixture: return "mixture";
    case MethodKind::Bootstrap: return "bootstrap";
    }
    return "unknown";
}

MethodKind parse_method(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "normal") return MethodKind::Normal;
    if (lower == "gamma") return MethodKind::Gamma;
    if (lower == "chisquare" || lower == "chi-square") return MethodKind::ChiSquare;
    if (lower == "bernstein") return MethodKind::Bernstein;
    if (lower == "mixture") return MethodKind::Mixture;
    if (lower == "bootstrap") return MethodKind::Bootstrap;
    throw ParseError("unknown method '" + std::string(name) + "'");
}

namespace {

constexpr double kMinPValue = std::numeric_limits<double>::min();

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
}

void check_two_plus(const SampleStats& stats, const char* which) {
    if (stats.n < 2)
        throw InvalidArgument(std::string("sample ") + which + " needs at least two observations");
}

double arm_contribution(const GridArm& arm) {
    if (arm.n == 0) throw InvalidArgument("grid arm needs n >= 1");
    const double mu = arm.params.mu();
    const double theta = arm.params.theta();
    const double n = static_cast<double>(arm.n);
    switch (arm.kind) {
    case MethodKind::Normal: {
        const double variance = arm.variance.value_or(mu * (mu + theta) / theta);
        if (!(variance > 0.0)) throw InvalidArgument("Normal arm variance must be positive");
        return variance / n;
    }
    case MethodKind::Gamma: return mu * mu / (n * theta);
    case MethodKind::ChiSquare: return 2.0 * mu;
    default:
        throw InvalidArgument("variance grid cells exist only for normal, gamma and chisquare, not " +
                              std::string(to_string(arm.kind)));
    }
}

IntervalEstimate centered(double center, double half_width, double alpha, MethodKind method) {
    IntervalEstimate ci;
    ci.lower = center - half_width;
    ci.upper = center + half_width;
    ci.level = 1.0 - alpha;
    ci.method = method;
    ci.degenerate = !(half_width > 0.0);
    return ci;
}

double normal_p_value(double statistic, double variance) {
    if (!(variance > 0.0)) return statistic == 0.0 ? 1.0 : kMinPValue;
    const double z = std::fabs(statistic) / std::sqrt(variance);
    return std::clamp(2.0 * normal_upper_tail(z), kMinPValue, 1.0);
}

} // namespace

double variance_of_difference(const GridArm& x, const GridArm& y) {
    return arm_contribution(x) + arm_contribution(y);
}

MethodKind select_method(std::size_t n, double mu, double theta,
                         const SelectorThresholds& thresholds) {
    if (n == 0) throw InvalidArgument("sample size must be positive");
    if (!(mu > 0.0) || !(theta > 0.0)) throw InvalidArgument("mu and theta must be positive");
    if (thresholds.n_large == 0 || !(thresholds.theta_large > 0.0) ||
        !(thresholds.chi_square_tolerance >= 0.0))
        throw InvalidArgument("selector thresholds must be positive");

    const double nd = static_cast<double>(n);
    if (std::fabs(mu - 2.0 * nd * theta) / mu <= thresholds.chi_square_tolerance)
        return MethodKind::ChiSquare;
    const bool large_n = n >= thresholds.n_large;
    const bool large_theta = theta >= thresholds.theta_large;
    if (!large_theta) return large_n ? MethodKind::Gamma : MethodKind::Bernstein;
    // Small n with large theta admits Normal, Bootstrap or Bernstein; Normal is
    // the cheapest of the three.
    return MethodKind::Normal;
}

IntervalEstimate ci_normal_two_sample(const SampleStats& x, const SampleStats& y, double alpha,
                                      VarianceMode mode, const std::optional<GridCell>& cell) {
    check_alpha(alpha);
    check_two_plus(x, "x");
    check_two_plus(y, "y");
    double variance;
    if (mode == VarianceMode::Direct) {
        variance = x.variance / static_cast<double>(x.n) + y.variance / static_cast<double>(y.n);
    } else {
        if (!cell) throw InvalidArgument("grid variance mode needs a grid cell");
        variance = variance_of_difference(cell->x, cell->y);
    }
    const double half = two_sided_critical_value(alpha) * std::sqrt(variance);
    return centered(x.mean - y.mean, half, alpha, MethodKind::Normal);
}

IntervalEstimate ci_bernstein_two_sample(const SampleStats& x, const SampleStats& y,
                                         double alpha, double c_a, double c_b) {
    check_alpha(alpha);
    const double center = x.mean - y.mean;
    try {
        const BernsteinContext ctx = build_context(x, y, c_a, c_b);
        return centered(center, epsilon_for_alpha(ctx, alpha), alpha, MethodKind::Bernstein);
    } catch (const DegenerateContext&) {
        return centered(center, 0.0, alpha, MethodKind::Bernstein);
    }
}

IntervalEstimate ci_bernstein_two_sample(std::span<const std::int64_t> x,
                                         std::span<const std::int64_t> y, double alpha,
                                         double c_a, double c_b) {
    return ci_bernstein_two_sample(summarize(x), summarize(y), alpha, c_a, c_b);
}

IntervalEstimate ci_mixture(const IntervalEstimate& normal_ci,
                            const IntervalEstimate& bernstein_ci, double w) {
    if (!(w >= 0.0 && w <= 1.0)) throw InvalidArgument("mixture weight must lie in [0, 1]");
    if (std::fabs(normal_ci.level - bernstein_ci.level) > 1e-12)
        throw InvalidArgument("mixture components must share a confidence level");
    IntervalEstimate ci;
    ci.lower = w * normal_ci.lower + (1.0 - w) * bernstein_ci.lower;
    ci.upper = w * normal_ci.upper + (1.0 - w) * bernstein_ci.upper;
    ci.level = normal_ci.level;
    ci.method = MethodKind::Mixture;
    ci.degenerate = normal_ci.degenerate && bernstein_ci.degenerate;
    return ci;
}

TestResult test_mean_difference(const SampleStats& x, const SampleStats& y, double null_value,
                                MethodKind method, double c_a, double c_b) {
    if (!std::isfinite(null_value)) throw InvalidArgument("null value must be finite");
    TestResult result;
    result.null_value = null_value;
    result.statistic = x.mean - y.mean - null_value;
    result.method = method;
    const double eps = std::fabs(result.statistic);

    switch (method) {
    case MethodKind::Normal: {
        check_two_plus(x, "x");
        check_two_plus(y, "y");
        const double variance =
            x.variance / static_cast<double>(x.n) + y.variance / static_cast<double>(y.n);
        result.degenerate = !(variance > 0.0);
        result.p_value = normal_p_value(result.statistic, variance);
        return result;
    }
    case MethodKind::Bernstein: {
        try {
            const BernsteinContext ctx = build_context(x, y, c_a, c_b);
            result.p_value = eps > 0.0 ? alpha_for_epsilon(ctx, eps) : 1.0;
        } catch (const DegenerateContext&) {
            result.degenerate = true;
            result.p_value = eps > 0.0 ? kMinPValue : 1.0;
        }
        return result;
    }
    default:
        throw InvalidArgument("mean-difference tests support normal and bernstein, not " +
                              std::string(to_string(method)));
    }
}

TestResult test_mean_difference(std::span<const std::int64_t> x,
                                std::span<const std::int64_t> y, double null_value,
                                MethodKind method, double c_a, double c_b) {
    return test_mean_difference(summarize(x), summarize(y), null_value, method, c_a, c_b);
}

IntervalEstimate ci_normal_one_sample(const SampleStats& stats, double alpha) {
    check_alpha(alpha);
    check_two_plus(stats, "");
    const double half = two_sided_critical_value(alpha) *
                        std::sqrt(stats.variance / static_cast<double>(stats.n));
    return centered(stats.mean, half, alpha, MethodKind::Normal);
}

IntervalEstimate ci_bernstein_one_sample(const SampleStats& stats, double alpha, double c_b) {
    check_alpha(alpha);
    try {
        const BernsteinContext ctx = build_one_sample_context(stats, c_b);
        return centered(stats.mean, epsilon_for_alpha(ctx, alpha), alpha, MethodKind::Bernstein);
    } catch (const DegenerateContext&) {
        return centered(stats.mean, 0.0, alpha, MethodKind::Bernstein);
    }
}

IntervalEstimate ci_bernstein_one_sample(std::span<const std::int64_t> sample, double alpha,
                                         double c_b) {
    return ci_bernstein_one_sample(summarize(sample), alpha, c_b);
}

GammaParams gamma_approx_params(double mu, double theta, std::size_t n) {
    if (!(mu > 0.0) || !(theta > 0.0) || n == 0)
        throw InvalidArgument("gamma approximation needs positive mu, theta and n");
    const double shape = static_cast<double>(n) * theta;
    return {shape, shape / mu};
}

std::vector<double> simulate_gamma_difference(const NegBinParams& x, const NegBinParams& y,
                                              std::size_t n_x, std::size_t n_y,
                                              std::size_t trials, std::uint64_t seed) {
    const GammaParams gx = gamma_approx_params(x.mu(), x.theta(), n_x);
    const GammaParams gy = gamma_approx_params(y.mu(), y.theta(), n_y);
    RandomStream rng(seed);
    std::vector<double> diffs(trials);
    for (auto& d : diffs) d = rng.gamma(gx.shape) / gx.rate - rng.gamma(gy.shape) / gy.rate;
    return diffs;
}

double normal_approx_divergence(const NegBinParams& x, const NegBinParams& y, std::size_t n_x,
                                std::size_t n_y, std::size_t trials, std::uint64_t seed) {
    if (trials < 1000) throw InvalidArgument("divergence estimate needs at least 1000 trials");
    std::vector<double> diffs = simulate_gamma_difference(x, y, n_x, n_y, trials, seed);
    std::sort(diffs.begin(), diffs.end());

    // Second-order cumulant expansion: N(mu_x - mu_y, mu_x^2/(n_x theta_x) + mu_y^2/(n_y theta_y)).
    const double mean = x.mu() - y.mu();
    const double sd = std::sqrt(x.mu() * x.mu() / (static_cast<double>(n_x) * x.theta()) +
                                y.mu() * y.mu() / (static_cast<double>(n_y) * y.theta()));
    const double t = static_cast<double>(trials);
    double ks = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
        const double f = normal_cdf((diffs[i] - mean) / sd);
        ks = std::max({ks, static_cast<double>(i + 1) / t - f, f - static_cast<double>(i) / t});
    }
    return ks;
}

} // namespace nbmeans
