#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "screenopt/order_stats.hpp"
#include "support/oracles.hpp"

using namespace screenopt;

TEST_CASE("boundary values") {
    CHECK(order_stat_cdf(0.0, 200, 3) == 0.0);
    CHECK(order_stat_cdf(1.0, 200, 3) == 1.0);
}

TEST_CASE("five genes, validate two, fair coin") {
    // Sum_{j=3}^{4} C(4,j) / 16 = 5/16.
    CHECK(order_stat_cdf(0.5, 5, 2) == doctest::Approx(0.3125).epsilon(1e-14));
}

TEST_CASE("monotone non-decreasing in the argument probability") {
    double prev = -1.0;
    for (double q = 0.0; q <= 1.0; q += 0.01) {
        double c = order_stat_cdf(q, 100, 5);
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("matches direct summation for small gene counts") {
    for (std::int64_t r : {2, 3, 5, 10, 23, 50}) {
        for (int v = 1; v < r; ++v) {
            for (double q = 0.01; q < 1.0; q += 0.07) {
                double exact = testing::order_stat_sum_direct(q, r, v);
                double fast = order_stat_cdf(q, r, v);
                CHECK(std::fabs(fast - exact) <= 1e-12 * std::fabs(exact));
            }
        }
    }
}

TEST_CASE("matches log-sum-exp summation for two thousand genes") {
    for (double q : {0.9, 0.99, 0.999, 0.9995, 0.99999}) {
        double oracle = testing::order_stat_sum_logsumexp(q, 2000, 3);
        double fast = order_stat_cdf(q, 2000, 3);
        CHECK(std::fabs(fast - oracle) <= 1e-10 * std::fabs(oracle));
    }
    // Frozen from 30-digit exact summation.
    CHECK(order_stat_cdf(0.999, 2000, 3) ==
          doctest::Approx(0.67694724475356828).epsilon(1e-12));
    CHECK(order_stat_cdf(0.9995, 2000, 3) ==
          doctest::Approx(0.91983655578335159).epsilon(1e-12));
}

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(order_stat_cdf(0.5, 1, 1), std::domain_error);
    CHECK_THROWS_AS(order_stat_cdf(0.5, 10, 0), std::domain_error);
    CHECK_THROWS_AS(order_stat_cdf(0.5, 10, 10), std::domain_error);
    CHECK_THROWS_AS(order_stat_cdf(-0.1, 10, 2), std::domain_error);
    CHECK_THROWS_AS(order_stat_cdf(1.1, 10, 2), std::domain_error);
}
