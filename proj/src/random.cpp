#include "nbmeans/random.hpp"

#include <cmath>
#include <limits>

#include "nbmeans/errors.hpp"

namespace nbmeans {

double RandomStream::uniform() {
    // 53 random bits centred in their cell: never exactly 0 or 1.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::standard_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    // Marsaglia polar method.
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

namespace {

// Marsaglia & Tsang (2000) for shape >= 1.
double marsaglia_tsang(RandomStream& rng, double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.standard_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

} // namespace

double RandomStream::log_gamma_variate(double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape))
        throw InvalidArgument("gamma shape must be positive and finite");
    if (shape >= 1.0) return std::log(marsaglia_tsang(*this, shape));
    // Shape boost: G(a) = G(a + 1) U^(1/a). Kept in log space because U^(1/a)
    // underflows for shapes near 0.01.
    const double boosted = marsaglia_tsang(*this, shape + 1.0);
    return std::log(boosted) + std::log(uniform()) / shape;
}

double RandomStream::gamma(double shape) {
    if (shape >= 1.0) {
        if (!std::isfinite(shape)) throw InvalidArgument("gamma shape must be finite");
        return marsaglia_tsang(*this, shape);
    }
    return std::exp(log_gamma_variate(shape));
}

std::int64_t RandomStream::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw InvalidArgument("poisson mean must be non-negative and finite");
    if (mean == 0.0) return 0;
    if (mean < 10.0) {
        // Sequential inversion.
        double p = std::exp(-mean);
        double cumulative = p;
        const double u = uniform();
        std::int64_t k = 0;
        while (u > cumulative) {
            ++k;
            p *= mean / static_cast<double>(k);
            cumulative += p;
            if (p < std::numeric_limits<double>::min() && cumulative < u) {
                // Rounding left mass short of u; the remaining tail is negligible.
                break;
            }
        }
        return k;
    }
    // Hoermann (1993) PTRS transformed rejection.
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = uniform() - 0.5;
        const double v = uniform();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -mean + k * loglam - std::lgamma(k + 1.0))
            return static_cast<std::int64_t>(k);
    }
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::span<const std::uint64_t> words) noexcept {
    std::uint64_t h = mix64(master);
    for (std::uint64_t w : words) h = mix64(h ^ mix64(w));
    return h;
}

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> words) noexcept {
    return derive_seed(master, std::span<const std::uint64_t>(words.begin(), words.size()));
}

} // namespace nbmeans
