#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "nbmeans/errors.hpp"
#include "nbmeans/random.hpp"

using namespace nbmeans;

TEST(RandomStream, UniformIsOpenInterval) {
    RandomStream rng(1);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(RandomStream, NormalMoments) {
    RandomStream rng(2);
    const int n = 400000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.standard_normal();
        s += z;
        s2 += z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 4.0 / std::sqrt(n));
    EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
}

class GammaShape : public ::testing::TestWithParam<double> {};

TEST_P(GammaShape, MeanAndVarianceEqualShape) {
    const double shape = GetParam();
    RandomStream rng(3);
    const int n = 400000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gamma(shape);
        ASSERT_GE(g, 0.0);
        s += g;
        s2 += g * g;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    // SE of the mean is sqrt(shape/n); of the variance roughly sqrt((6 shape + 2 shape^2) ... )
    EXPECT_NEAR(mean, shape, 5.0 * std::sqrt(shape / n));
    EXPECT_NEAR(var / shape, 1.0, 5.0 * std::sqrt((6.0 / shape + 2.0) / n) + 0.01);
}

INSTANTIATE_TEST_SUITE_P(Shapes, GammaShape, ::testing::Values(0.05, 0.5, 1.0, 1.25, 10.0, 250.0));

TEST(RandomStream, TinyShapeLogGammaIsFinite) {
    RandomStream rng(4);
    double sum_log = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double lg = rng.log_gamma_variate(0.01);
        ASSERT_TRUE(std::isfinite(lg));
        sum_log += lg;
    }
    // E[log G(a)] = digamma(a); digamma(0.01) = -100.5608...
    EXPECT_NEAR(sum_log / n, -100.56088545786867, 2.0);
}

TEST(RandomStream, PoissonMoments) {
    for (double lambda : {0.3, 4.0, 9.99, 10.0, 55.0, 4000.0}) {
        RandomStream rng(5);
        const int n = 200000;
        double s = 0, s2 = 0;
        for (int i = 0; i < n; ++i) {
            const auto k = static_cast<double>(rng.poisson(lambda));
            ASSERT_GE(k, 0.0);
            s += k;
            s2 += k * k;
        }
        const double mean = s / n;
        const double var = s2 / n - mean * mean;
        EXPECT_NEAR(mean, lambda, 5.0 * std::sqrt(lambda / n)) << lambda;
        EXPECT_NEAR(var / lambda, 1.0, 0.02) << lambda;
    }
}

TEST(RandomStream, PoissonZeroAndInvalid) {
    RandomStream rng(6);
    EXPECT_EQ(rng.poisson(0.0), 0);
    EXPECT_THROW(rng.poisson(-1.0), InvalidArgument);
    EXPECT_THROW(rng.gamma(0.0), InvalidArgument);
}

TEST(DeriveSeed, DependsOnEveryWord) {
    const auto base = derive_seed(1, {1, 2, 3});
    EXPECT_EQ(base, derive_seed(1, {1, 2, 3}));
    EXPECT_NE(base, derive_seed(2, {1, 2, 3}));
    EXPECT_NE(base, derive_seed(1, {1, 2, 4}));
    EXPECT_NE(base, derive_seed(1, {2, 1, 3}));
}
