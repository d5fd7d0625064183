#include "nbmeans/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nbmeans/errors.hpp"

namespace nbmeans {

std::vector<double> two_sample_transform(std::span<const std::int64_t> x,
                                         std::span<const std::int64_t> y) {
    if (x.empty() || y.empty()) throw InvalidArgument("both samples must be non-empty");
    const double n = static_cast<double>(x.size() + y.size());
    const double scale_x = n / static_cast<double>(x.size());
    const double scale_y = n / static_cast<double>(y.size());
    std::vector<double> z;
    z.reserve(x.size() + y.size());
    for (std::int64_t v : x) z.push_back(scale_x * static_cast<double>(v));
    for (std::int64_t v : y) z.push_back(-scale_y * static_cast<double>(v));
    return z;
}

namespace {

void check_constant(double c, const char* name) {
    if (!(c >= 1.0) || !std::isfinite(c))
        throw InvalidArgument(std::string(name) + " must be a finite value >= 1");
}

void check_context(const BernsteinContext& ctx) {
    if (ctx.n == 0) throw InvalidArgument("Bernstein context needs n >= 1");
    if (!(ctx.sigma2 >= 0.0) || !std::isfinite(ctx.sigma2))
        throw InvalidArgument("Bernstein sigma2 must be finite and non-negative");
    if (!(ctx.a < ctx.b)) throw DegenerateContext("Bernstein support requires a < b");
}

} // namespace

BernsteinContext build_context(const SampleStats& x, const SampleStats& y, double c_a,
                               double c_b) {
    check_constant(c_a, "c_a");
    check_constant(c_b, "c_b");
    if (x.n == 0 || y.n == 0) throw InvalidArgument("both samples must be non-empty");
    BernsteinContext ctx;
    ctx.n = x.n + y.n;
    const double n = static_cast<double>(ctx.n);
    const double scale_x = n / static_cast<double>(x.n);
    const double scale_y = n / static_cast<double>(y.n);
    ctx.sigma2 = scale_x * x.variance + scale_y * y.variance;
    ctx.a = -c_a * scale_y * static_cast<double>(y.max);
    ctx.b = c_b * scale_x * static_cast<double>(x.max);
    ctx.c_a = c_a;
    ctx.c_b = c_b;
    if (!(ctx.a < ctx.b))
        throw DegenerateContext("both samples are identically zero; Bernstein support is empty");
    return ctx;
}

BernsteinContext build_one_sample_context(const SampleStats& stats, double c_b) {
    check_constant(c_b, "c_b");
    if (stats.n == 0) throw InvalidArgument("sample must be non-empty");
    BernsteinContext ctx;
    ctx.n = stats.n;
    ctx.sigma2 = stats.variance;
    ctx.a = 0.0;
    ctx.b = c_b * static_cast<double>(stats.max);
    ctx.c_b = c_b;
    if (!(ctx.a < ctx.b))
        throw DegenerateContext("sample is identically zero; Bernstein support is empty");
    return ctx;
}

double epsilon_for_alpha(const BernsteinContext& ctx, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
    check_context(ctx);
    const double n = static_cast<double>(ctx.n);
    const double w = ctx.width();
    const double neg_log = -std::log(0.5 * alpha); // -log(alpha/2) > 0
    // Positive root of n e^2 - (2/3) w g e - 2 g sigma2 = 0 with g = -log(alpha/2).
    const double lin = (2.0 / 3.0) * w * neg_log;
    const double disc = lin * lin + 8.0 * n * ctx.sigma2 * neg_log;
    return (lin + std::sqrt(disc)) / (2.0 * n);
}

double alpha_for_epsilon(const BernsteinContext& ctx, double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw InvalidArgument("epsilon must be positive and finite");
    check_context(ctx);
    const double n = static_cast<double>(ctx.n);
    const double exponent = -0.5 * n * epsilon * epsilon / (ctx.sigma2 + epsilon * ctx.width() / 3.0);
    // Floor at the smallest normal double so the bound stays in (0, 1].
    return std::clamp(2.0 * std::exp(exponent), std::numeric_limits<double>::min(), 1.0);
}

} // namespace nbmeans
