#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "nbmeans/distributions.hpp"
#include "nbmeans/errors.hpp"

using namespace nbmeans;

namespace {

// Sum of the PMF from 0 until the remaining mass is below 1e-12 (bounded by
// a hard cap far beyond any study-grid tail).
double pmf_total(const NegBinParams& p) {
    const auto m = nb_moments(p);
    const auto start_cap = static_cast<std::int64_t>(m.mean + 50.0 * std::sqrt(m.variance));
    double sum = 0.0, comp = 0.0;
    for (std::int64_t k = 0; k < 50'000'000; ++k) {
        const double term = nb_pmf(k, p);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (k > start_cap && term * (k + 1) < 1e-13) break;
    }
    return sum;
}

// Raw NB cumulants in the (r, q) form, q = mu / (mu + theta), p = 1 - q.
struct Cumulants {
    double k2, k4;
};
Cumulants nb_cumulants(const NegBinParams& params) {
    const double r = params.theta();
    const double p = params.p();
    const double q = 1.0 - p;
    return {r * q / (p * p), r * q * (1.0 + 4.0 * q + q * q) / (p * p * p * p)};
}

} // namespace

TEST(NegBinParams, RejectsNonPositive) {
    EXPECT_THROW(NegBinParams(0.0, 1.0), InvalidArgument);
    EXPECT_THROW(NegBinParams(5.0, -1.0), InvalidArgument);
    EXPECT_THROW(NegBinParams(5.0, std::nan("")), InvalidArgument);
    EXPECT_THROW(NegBinParams(INFINITY, 1.0), InvalidArgument);
    const NegBinParams p(5.0, 0.025);
    EXPECT_DOUBLE_EQ(p.r(), 0.025);
    EXPECT_DOUBLE_EQ(p.p(), 0.025 / 5.025);
}

TEST(NbPmf, GeometricSpecialCaseValues) {
    const NegBinParams p(5.0, 1.0);
    EXPECT_NEAR(nb_pmf(0, p), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(nb_pmf(1, p), 5.0 / 36.0, 1e-15);
}

TEST(NbPmf, MatchesHighPrecisionOracle) {
    // Frozen from tests/oracles/compute_oracles.py (mpmath, 50 digits).
    EXPECT_NEAR(nb_pmf(3, NegBinParams(5.0, 0.025)) / 0.0074620742230583774463, 1.0, 1e-12);
    EXPECT_NEAR(nb_pmf(0, NegBinParams(5.0, 0.025)) / 0.87583056762915386376, 1.0, 1e-12);
    EXPECT_NEAR(nb_pmf(2000, NegBinParams(10.0, 0.01)) / 6.859480080200142603e-7, 1.0, 1e-11);
}

TEST(NbPmf, GeometricClosedFormProperty) {
    for (double mu : {0.3, 1.0, 5.0, 10.0, 250.0}) {
        const NegBinParams p(mu, 1.0);
        const double q = mu / (1.0 + mu);
        for (std::int64_t k : {0, 1, 2, 7, 40, 100, 500}) {
            const double expected = (1.0 - q) * std::pow(q, static_cast<double>(k));
            EXPECT_NEAR(nb_pmf(k, p) / expected, 1.0, 1e-12) << "mu=" << mu << " k=" << k;
        }
    }
}

TEST(NbPmf, SurvivesTinyThetaAndLargeK) {
    const NegBinParams p(10.0, 0.01);
    for (std::int64_t k : {1000, 5000, 20000}) {
        const double v = nb_pmf(k, p);
        EXPECT_TRUE(std::isfinite(v));
        EXPECT_GT(v, 0.0);
    }
}

TEST(NbPmf, RejectsNegativeK) {
    EXPECT_THROW(nb_pmf(-1, NegBinParams(5.0, 1.0)), InvalidArgument);
}

TEST(NbPmf, NormalizesOverStudyParameters) {
    for (double mu : {5.0, 10.0})
        for (double theta : {0.01, 0.025, 0.05, 0.075, 0.1}) {
            const double total = pmf_total(NegBinParams(mu, theta));
            EXPECT_NEAR(total, 1.0, 1e-9) << "mu=" << mu << " theta=" << theta;
        }
}

TEST(NbMoments, ClosedForm) {
    auto m = nb_moments(NegBinParams(5.0, 1.0));
    EXPECT_DOUBLE_EQ(m.mean, 5.0);
    EXPECT_DOUBLE_EQ(m.variance, 30.0);
    m = nb_moments(NegBinParams(5.0, 0.025));
    EXPECT_NEAR(m.variance, 1005.0, 1e-9);
    m = nb_moments(NegBinParams(5.0, 1e9));
    EXPECT_GT(m.variance, 5.0);
    EXPECT_NEAR(m.variance, 5.0, 1e-7);
}

TEST(NbMoments, AlwaysOverdispersed) {
    for (double mu : {0.01, 1.0, 5.0, 1e3})
        for (double theta : {1e-3, 0.1, 1.0, 1e3, 1e6}) {
            const auto m = nb_moments(NegBinParams(mu, theta));
            EXPECT_GT(m.variance, m.mean);
        }
}

TEST(NbSample, DeterministicPerSeed) {
    const NegBinParams p(5.0, 0.1);
    EXPECT_EQ(nb_sample(p, 1000, 42), nb_sample(p, 1000, 42));
    EXPECT_NE(nb_sample(p, 1000, 42), nb_sample(p, 1000, 43));
    EXPECT_THROW(nb_sample(p, 0, 1), InvalidArgument);
}

TEST(NbSample, MomentsWithinTolerance) {
    const NegBinParams p(5.0, 0.1);
    const auto stats = summarize(nb_sample(p, 1'000'000, 2010));
    EXPECT_NEAR(stats.mean, 5.0, 5.0 * 0.02);
    EXPECT_NEAR(stats.variance, 255.0, 255.0 * 0.05);
}

TEST(NbSample, MomentsWithinThreeStandardErrors) {
    for (auto [mu, theta] : {std::pair{5.0, 0.1}, {5.0, 0.025}, {10.0, 0.05}}) {
        const NegBinParams p(mu, theta);
        const auto stats = summarize(nb_sample(p, 1'000'000, 77));
        const auto c = nb_cumulants(p);
        const double n = 1e6;
        const double se_mean = std::sqrt(c.k2 / n);
        // Var(s^2) ~ (mu_4 - sigma^4)/n with mu_4 = k4 + 3 k2^2.
        const double se_var = std::sqrt((c.k4 + 2.0 * c.k2 * c.k2) / n);
        EXPECT_NEAR(stats.mean, mu, 3.0 * se_mean) << mu << "," << theta;
        EXPECT_NEAR(stats.variance, c.k2, 3.0 * se_var) << mu << "," << theta;
    }
}

TEST(NbSample, ZeroMassMatchesPmfAtTinyTheta) {
    const NegBinParams p(5.0, 0.025);
    const auto draws = nb_sample(p, 1'000'000, 99);
    const double zeros = static_cast<double>(std::count(draws.begin(), draws.end(), 0));
    EXPECT_NEAR(zeros / 1e6, nb_pmf(0, p), 0.005);
}

TEST(NbSample, HandlesThetaPointZeroOne) {
    const NegBinParams p(10.0, 0.01);
    const auto stats = summarize(nb_sample(p, 200'000, 5));
    EXPECT_GE(stats.max, 0);
    EXPECT_NEAR(stats.mean, 10.0, 10.0 * 0.15);
}

TEST(Summarize, Basic) {
    const std::vector<std::int64_t> v{1, 2, 3};
    const auto s = summarize(v);
    EXPECT_EQ(s.n, 3u);
    EXPECT_DOUBLE_EQ(s.mean, 2.0);
    EXPECT_DOUBLE_EQ(s.variance, 1.0);
    EXPECT_EQ(s.max, 3);
    EXPECT_FALSE(s.degenerate);
}

TEST(Summarize, SingleObservationIsFlagged) {
    const std::vector<std::int64_t> v{7};
    const auto s = summarize(v);
    EXPECT_EQ(s.n, 1u);
    EXPECT_DOUBLE_EQ(s.mean, 7.0);
    EXPECT_DOUBLE_EQ(s.variance, 0.0);
    EXPECT_EQ(s.max, 7);
    EXPECT_TRUE(s.degenerate);
}

TEST(Summarize, RejectsEmptyAndNegative) {
    EXPECT_THROW(summarize(std::vector<std::int64_t>{}), InvalidArgument);
    EXPECT_THROW(summarize(std::vector<std::int64_t>{1, -1}), InvalidArgument);
}

TEST(Summarize, ConsistentWithMomentsOnLargeSample) {
    const NegBinParams p(10.0, 0.05);
    const auto s = summarize(nb_sample(p, 100'000, 3));
    const auto c = nb_cumulants(p);
    EXPECT_NEAR(s.mean, 10.0, 4.0 * std::sqrt(c.k2 / 1e5));
    EXPECT_NEAR(s.variance, c.k2, 4.0 * std::sqrt((c.k4 + 2.0 * c.k2 * c.k2) / 1e5));
    EXPECT_GE(static_cast<double>(s.max), s.mean);
}

TEST(MomDispersion, Examples) {
    SampleStats s{10, 5.0, 30.0, 40, false};
    EXPECT_NEAR(mom_dispersion(s), 1.0, 1e-14);
    s.variance = 1005.0;
    EXPECT_NEAR(mom_dispersion(s), 0.025, 1e-15);
    s.variance = 5.0;
    EXPECT_THROW(mom_dispersion(s), DispersionInestimable);
    s.variance = 2.0;
    EXPECT_THROW(mom_dispersion(s), DispersionInestimable);
    s.n = 1;
    EXPECT_THROW(mom_dispersion(s), InvalidArgument);
}

TEST(MomDispersion, RoundTripsThroughMoments) {
    for (double mu : {0.5, 5.0, 10.0, 100.0})
        for (double theta : {0.01, 0.025, 0.05, 0.075, 0.1, 1.0, 10.0}) {
            const auto m = nb_moments(NegBinParams(mu, theta));
            const SampleStats s{100, m.mean, m.variance, 0, false};
            EXPECT_NEAR(mom_dispersion(s) / theta, 1.0, 1e-12) << mu << "," << theta;
        }
}
