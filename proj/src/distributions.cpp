#include "nbmeans/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nbmeans/errors.hpp"
#include "nbmeans/random.hpp"

namespace nbmeans {

NegBinParams::NegBinParams(double mu, double theta) : mu_(mu), theta_(theta) {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw InvalidArgument("NB mean must be positive and finite, got " + std::to_string(mu));
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw InvalidArgument("NB dispersion must be positive and finite, got " +
                              std::to_string(theta));
}

double nb_log_pmf(std::int64_t k, const NegBinParams& params) {
    if (k < 0) throw InvalidArgument("NB support is the non-negative integers");
    const double mu = params.mu();
    const double theta = params.theta();
    const double kd = static_cast<double>(k);

    // log Gamma(theta + k) - log Gamma(theta) - log k!
    double log_coef;
    if (k <= 32) {
        // Direct product avoids cancellation between two huge lgamma values
        // when theta is large.
        log_coef = 0.0;
        for (std::int64_t j = 0; j < k; ++j)
            log_coef += std::log((theta + static_cast<double>(j)) / static_cast<double>(j + 1));
    } else {
        log_coef = std::lgamma(theta + kd) - std::lgamma(theta) - std::lgamma(kd + 1.0);
    }
    return log_coef - kd * std::log1p(theta / mu) - theta * std::log1p(mu / theta);
}

double nb_pmf(std::int64_t k, const NegBinParams& params) {
    return std::exp(nb_log_pmf(k, params));
}

Moments nb_moments(const NegBinParams& params) {
    const double mu = params.mu();
    return {mu, mu + mu * mu / params.theta()};
}

std::int64_t nb_draw(RandomStream& rng, const NegBinParams& params) {
    // The gamma draw is formed in log space: for theta near 0.01 the rate
    // itself can underflow, which correctly yields a zero count.
    const double log_rate =
        std::log(params.mu() / params.theta()) + rng.log_gamma_variate(params.theta());
    return rng.poisson(std::exp(log_rate));
}

std::vector<std::int64_t> nb_sample(const NegBinParams& params, std::size_t count,
                                    std::uint64_t seed) {
    if (count == 0) throw InvalidArgument("nb_sample needs count >= 1");
    RandomStream rng(seed);
    std::vector<std::int64_t> out(count);
    for (auto& value : out) value = nb_draw(rng, params);
    return out;
}

SampleStats summarize(std::span<const std::int64_t> sample) {
    if (sample.empty()) throw InvalidArgument("cannot summarize an empty sample");
    SampleStats stats;
    stats.n = sample.size();
    double sum = 0.0;
    for (std::int64_t v : sample) {
        if (v < 0) throw InvalidArgument("counts must be non-negative");
        sum += static_cast<double>(v);
        stats.max = std::max(stats.max, v);
    }
    stats.mean = sum / static_cast<double>(stats.n);
    if (stats.n == 1) {
        stats.degenerate = true;
        return stats;
    }
    double ss = 0.0;
    for (std::int64_t v : sample) {
        const double d = static_cast<double>(v) - stats.mean;
        ss += d * d;
    }
    stats.variance = ss / static_cast<double>(stats.n - 1);
    return stats;
}

double mom_dispersion(const SampleStats& stats) {
    if (stats.n < 2) throw InvalidArgument("dispersion estimate needs n >= 2");
    const double excess = stats.variance - stats.mean;
    if (!(excess > 0.0) || !(stats.mean > 0.0))
        throw DispersionInestimable("sample variance " + std::to_string(stats.variance) +
                                    " does not exceed sample mean " +
                                    std::to_string(stats.mean));
    return stats.mean * stats.mean / excess;
}

} // namespace nbmeans
