#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "screenopt/fluorescence.hpp"
#include "screenopt/normal.hpp"
#include "support/checks.hpp"

using namespace screenopt;

namespace {
const FluorescenceModel kDefault({0.4, 1.0}, {0.0, 1.0});
}

TEST_CASE("normal cdf matches high-precision reference values") {
    // Reference values computed with 30-digit arithmetic.
    const struct {
        double z, phi;
    } table[] = {
        {-8, 6.2209605742717841e-16}, {-6, 9.8658764503769814e-10},
        {-4, 3.1671241833119921e-5},  {-2, 0.022750131948179207},
        {-1, 0.15865525393145705},    {-0.5, 0.3085375387259869},
        {0, 0.5},                     {0.3, 0.61791142218895264},
        {0.5, 0.6914624612740131},    {1, 0.84134474606854295},
        {1.5, 0.93319279873114193},   {2, 0.97724986805182079},
        {4, 0.99996832875816688},     {6, 0.99999999901341235},
        {8, 0.99999999999999938},
    };
    for (const auto& row : table) {
        CHECK_ABS_TOL(normal_cdf(row.z), row.phi, 1e-13);
        CHECK_ABS_TOL(normal_survival(-row.z), row.phi, 1e-13);
    }
}

TEST_CASE("normal log survival stays accurate past the underflow point") {
    const struct {
        double z, log_tail;
    } table[] = {
        {8, -35.01343715991455},    {10, -53.231285150512471},
        {15, -116.1313848457117},   {20, -203.91715537109726},
        {30, -454.3212439563432},   {40, -804.60844201375379},
        {50, -1254.8313611394199},
    };
    for (const auto& row : table) {
        CHECK(normal_log_survival(row.z) == doctest::Approx(row.log_tail).epsilon(1e-12));
    }
    CHECK(normal_survival(50.0) == 0.0);  // underflows; the log form does not
}

TEST_CASE("normal quantile inverts the cdf") {
    CHECK_ABS_TOL(normal_quantile(0.5), 0.0, 1e-15);
    CHECK(normal_quantile(0.6) == doctest::Approx(0.2533471031357998).epsilon(1e-13));
    for (double p = 0.0005; p < 1.0; p += 0.0123) {
        CHECK_ABS_TOL(normal_cdf(normal_quantile(p)), p, 1e-12);
    }
    CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
    CHECK_THROWS_AS(normal_quantile(-0.2), std::domain_error);
}

TEST_CASE("survival at the mean is one half") {
    CHECK_ABS_TOL(kDefault.survival(Population::nontarget, 0.0), 0.5, 1e-14);
    CHECK_ABS_TOL(kDefault.survival(Population::target, 0.4), 0.5, 1e-14);
}

TEST_CASE("target survival at zero equals Phi(0.4)") {
    CHECK_ABS_TOL(kDefault.survival(Population::target, 0.0), 0.65542174161032417, 1e-12);
}

TEST_CASE("survival limits and monotonicity") {
    CHECK_ABS_TOL(kDefault.survival(Population::target, 0.4 - 12.0), 1.0, 1e-12);
    CHECK_ABS_TOL(kDefault.survival(Population::target, 0.4 + 12.0), 0.0, 1e-12);
    double prev = 1.1;
    for (double a = -12.0; a <= 12.0; a += 0.125) {
        double s = kDefault.survival(Population::nontarget, a);
        CHECK(s <= prev);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        prev = s;
    }
}

TEST_CASE("stochastic order holds on a grid for shifted normals") {
    for (double a = -10.0; a <= 10.0; a += 0.25) {
        CHECK(kDefault.survival(Population::target, a) >=
              kDefault.survival(Population::nontarget, a));
    }
}

TEST_CASE("quantile round-trips through survival") {
    for (double p = 0.01; p < 1.0; p += 0.07) {
        double a = kDefault.quantile(Population::target, p);
        CHECK_ABS_TOL(kDefault.survival(Population::target, a), 1.0 - p, 1e-10);
    }
    CHECK_ABS_TOL(kDefault.quantile(Population::nontarget, 0.5), 0.0, 1e-12);
    CHECK_THROWS_AS(kDefault.quantile(Population::target, 0.0), std::domain_error);
}

TEST_CASE("percentile criterion converts to a fixed threshold") {
    SUBCASE("pure non-target mixture") {
        CHECK_ABS_TOL(kDefault.percentile_to_threshold(0.0, 0.5), 0.0, 1e-10);
    }
    SUBCASE("pure target mixture") {
        CHECK_ABS_TOL(kDefault.percentile_to_threshold(1.0, 0.5), 0.4, 1e-10);
    }
    SUBCASE("realistic mixture, checked against the mixture survival") {
        double p_target = 1.0 / 200.0;
        double a = kDefault.percentile_to_threshold(p_target, 0.1);
        double mix = p_target * kDefault.survival(Population::target, a) +
                     (1.0 - p_target) * kDefault.survival(Population::nontarget, a);
        CHECK_ABS_TOL(mix, 0.1, 1e-10);
        // Frozen from a 30-digit root find on the mixture survival.
        CHECK(a == doctest::Approx(1.284084733342221).epsilon(1e-9));
    }
    CHECK_THROWS_AS(kDefault.percentile_to_threshold(0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(kDefault.percentile_to_threshold(0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(kDefault.percentile_to_threshold(-0.1, 0.5), std::domain_error);
}

TEST_CASE("log-normal model equals its log-domain normal model on mapped grids") {
    FluorescenceModel log_model = FluorescenceModel::lognormal({0.4, 1.0}, {0.0, 1.0});
    for (double a = -6.0; a <= 6.0; a += 0.2) {
        for (auto which : {Population::target, Population::nontarget}) {
            CHECK_ABS_TOL(log_model.survival(which, std::exp(a)),
                          kDefault.survival(which, a), 1e-14);
        }
    }
    // Quantiles map through exp.
    CHECK(log_model.quantile(Population::target, 0.25) ==
          doctest::Approx(std::exp(kDefault.quantile(Population::target, 0.25))).epsilon(1e-12));
    // Left of the log-normal support.
    CHECK(log_model.survival(Population::target, -1.0) == 1.0);
    CHECK(log_model.cdf(Population::target, 0.0) == 0.0);
}

TEST_CASE("invalid models are rejected") {
    CHECK_THROWS_AS(FluorescenceModel({0.4, 0.0}, {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(FluorescenceModel({0.4, 1.0}, {0.0, -1.0}), std::invalid_argument);
    // Dominance violated: target mean below non-target mean at equal sd.
    CHECK_THROWS_AS(FluorescenceModel({-0.4, 1.0}, {0.0, 1.0}), std::invalid_argument);
    // Equal distributions are allowed (no-signal case).
    CHECK_NOTHROW(FluorescenceModel({0.0, 1.0}, {0.0, 1.0}));
}
