#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace nbmeans {

class RandomStream;

/// Negative Binomial population in the mean/dispersion parameterization.
///
/// X ~ NB(mu, theta) has mean mu and variance mu + mu^2/theta. In the
/// classical (r, p) form r = theta and the success probability is
/// p = theta / (theta + mu). theta -> infinity recovers the Poisson.
class NegBinParams {
public:
    /// Throws InvalidArgument unless mu > 0 and theta > 0 (both finite).
    NegBinParams(double mu, double theta);

    double mu() const noexcept { return mu_; }
    double theta() const noexcept { return theta_; }

    /// Classical number of successes r (equal to theta).
    double r() const noexcept { return theta_; }
    /// Classical success probability p = theta / (theta + mu).
    double p() const noexcept { return theta_ / (theta_ + mu_); }

    friend bool operator==(const NegBinParams&, const NegBinParams&) = default;

private:
    double mu_;
    double theta_;
};

/// Sufficient summary of one observed sample of counts.
struct SampleStats {
    std::size_t n = 0;
    double mean = 0.0;
    /// Unbiased sample variance (divisor n - 1); zero when n == 1.
    double variance = 0.0;
    std::int64_t max = 0;
    /// True when n == 1 and the variance is undefined.
    bool degenerate = false;
};

/// Natural log of P(X = k) for X ~ NB(mu, theta).
double nb_log_pmf(std::int64_t k, const NegBinParams& params);

/// P(X = k), evaluated in log space so tiny theta and large k do not overflow.
double nb_pmf(std::int64_t k, const NegBinParams& params);

struct Moments {
    double mean;
    double variance;
};

Moments nb_moments(const NegBinParams& params);

/// One NB draw from `rng`: Poisson(lambda) with lambda ~ Gamma(theta, scale mu/theta).
std::int64_t nb_draw(RandomStream& rng, const NegBinParams& params);

/// Draws `count` NB variates from a gamma-Poisson mixture seeded by `seed`.
std::vector<std::int64_t> nb_sample(const NegBinParams& params, std::size_t count,
                                    std::uint64_t seed);

/// Throws InvalidArgument on an empty sample or a negative count.
SampleStats summarize(std::span<const std::int64_t> sample);

/// Method-of-moments dispersion: mean^2 / (variance - mean).
///
/// Solves variance = mean + mean^2/theta for theta. Throws
/// DispersionInestimable when variance <= mean, where the solution would be
/// negative or infinite.
double mom_dispersion(const SampleStats& stats);

} // namespace nbmeans
