#include <gtest/gtest.h>

#include <boost/math/distributions/normal.hpp>

#include "nbmeans/errors.hpp"
#include "nbmeans/normal.hpp"

using namespace nbmeans;

TEST(NormalQuantile, FrozenValues) {
    EXPECT_NEAR(normal_quantile(0.975), 1.9599639845400542355, 1e-14);
    EXPECT_NEAR(two_sided_critical_value(0.05), 1.9599639845400542355, 1e-14);
    EXPECT_NEAR(two_sided_critical_value(0.01), 2.575829303548900761, 1e-14);
    EXPECT_DOUBLE_EQ(normal_quantile(0.5), 0.0);
}

TEST(NormalQuantile, AgreesWithBoostAcrossRange) {
    const boost::math::normal_distribution<double> std_normal;
    for (double p : {1e-300, 1e-20, 1e-9, 1e-4, 0.01, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.9, 0.97575,
                     0.999, 1.0 - 1e-9}) {
        EXPECT_NEAR(normal_quantile(p), boost::math::quantile(std_normal, p), 1e-12) << p;
    }
}

TEST(NormalQuantile, InvertsCdf) {
    // Above x = 3 the CDF rounds too close to one to carry x back.
    for (double x = -8.0; x <= 3.0; x += 0.25) {
        const double p = normal_cdf(x);
        EXPECT_NEAR(normal_quantile(p), x, 1e-9 * std::max(1.0, std::fabs(x))) << x;
    }
}

TEST(NormalQuantile, RejectsOutOfRange) {
    EXPECT_THROW(normal_quantile(0.0), InvalidArgument);
    EXPECT_THROW(normal_quantile(1.0), InvalidArgument);
    EXPECT_THROW(two_sided_critical_value(1.5), InvalidArgument);
}

TEST(NormalCdf, TailsAreComplementary) {
    for (double x : {-3.0, -1.0, 0.0, 0.5, 2.0, 9.0})
        EXPECT_NEAR(normal_cdf(x) + normal_upper_tail(x), 1.0, 1e-15);
    EXPECT_NEAR(2.0 * normal_upper_tail(1.9599639845400542355), 0.05, 1e-15);
}
