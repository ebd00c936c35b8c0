#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "scpim/device.hpp"

using namespace scpim;

namespace {

// Values below were evaluated with 40-digit arithmetic (mpmath) directly
// from exp(-tau * exp(-delta * (1 - I / I_c))).
constexpr double kP_Ic_0p3 = 0.7408182206817178661;
constexpr double kP_76uA_1ns = 0.9535186334353320750;

const MtjParams kDefault{};

}  // namespace

TEST_CASE("p_unswitched golden values") {
    CHECK(p_unswitched(kDefault, {80.0, 0.3}) == doctest::Approx(kP_Ic_0p3).epsilon(1e-14));
    CHECK(p_unswitched(kDefault, {76.0, 1.0}) == doctest::Approx(kP_76uA_1ns).epsilon(1e-14));
    // I = 0: exp(-delta) ~ 3.5e-27, so P is 1 to double precision.
    CHECK(p_unswitched(kDefault, {0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p_unswitched(kDefault, {0.0, 1e6}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p_unswitched(kDefault, {80.0, 0.0}) == 1.0);
    CHECK(p_unswitched(kDefault, {800.0, 0.0}) == 1.0);
}

TEST_CASE("p_unswitched rejects invalid inputs") {
    CHECK_THROWS_AS(p_unswitched(kDefault, {-1.0, 0.3}), std::invalid_argument);
    CHECK_THROWS_AS(p_unswitched(kDefault, {80.0, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(p_unswitched(kDefault, {80.0, NAN}), std::invalid_argument);
    CHECK_THROWS_AS(p_unswitched(MtjParams{0.0, 80.0}, {80.0, 0.3}), std::invalid_argument);
    CHECK_THROWS_AS(p_unswitched(MtjParams{60.9, -5.0}, {80.0, 0.3}), std::invalid_argument);
}

TEST_CASE("p_unswitched stays in [0, 1] at extremes") {
    for (double current : {0.0, 1.0, 40.0, 79.9, 80.0, 160.0, 800.0, 8000.0}) {
        for (double tau : {0.0, 1e-12, 1e-3, 0.3, 10.0, 1e6, 1e9}) {
            const double p = p_unswitched(kDefault, {current, tau});
            REQUIRE(std::isfinite(p));
            REQUIRE(p >= 0.0);
            REQUIRE(p <= 1.0);
        }
    }
    CHECK(p_unswitched(kDefault, {800.0, 1e9}) == 0.0);
    CHECK(p_unswitched(kDefault, {80.0, 1e6}) == 0.0);
}

TEST_CASE("p_unswitched is monotone in duration and current") {
    for (double current : {60.0, 76.0, 80.0, 84.0}) {
        double prev = 1.0;
        for (int i = 0; i <= 200; ++i) {
            const double p = p_unswitched(kDefault, {current, 0.025 * i});
            REQUIRE(p <= prev);
            prev = p;
        }
    }
    for (double tau : {0.1, 0.3, 1.0, 5.0}) {
        double prev = 1.0;
        for (int i = 0; i <= 200; ++i) {
            const double p = p_unswitched(kDefault, {0.6 * i, tau});
            REQUIRE(p <= prev);
            prev = p;
        }
    }
}

TEST_CASE("durations compose multiplicatively at fixed current") {
    for (double current : {70.0, 78.0, 80.0, 82.0}) {
        for (double t1 : {0.0, 0.1, 0.3, 0.7, 2.0}) {
            for (double t2 : {0.0, 0.05, 0.4, 1.3}) {
                const double joint = p_unswitched(kDefault, {current, t1 + t2});
                const double split =
                    p_unswitched(kDefault, {current, t1}) * p_unswitched(kDefault, {current, t2});
                REQUIRE(std::fabs(joint - split) < 1e-12);
            }
        }
    }
}

TEST_CASE("sample_unswitched edge cases") {
    RngStream rng(11);
    for (int i = 0; i < 10000; ++i) {
        REQUIRE(sample_unswitched(kDefault, {80.0, 0.0}, rng));
        REQUIRE_FALSE(sample_unswitched(kDefault, {80.0, 1e6}, rng));
    }
}

TEST_CASE("sample_unswitched empirical mean matches the law") {
    RngStream rng(2024);
    const int n = 1000000;
    int ones = 0;
    for (int i = 0; i < n; ++i) ones += sample_unswitched(kDefault, {80.0, 0.3}, rng) ? 1 : 0;
    const double p = kP_Ic_0p3;
    CHECK(std::fabs(static_cast<double>(ones) / n - p) < 3.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("sampling is reproducible from the seed") {
    RngStream a(99), b(99);
    std::vector<bool> sa, sb;
    for (int i = 0; i < 5000; ++i) {
        sa.push_back(sample_unswitched(kDefault, {80.0, 0.5}, a));
        sb.push_back(sample_unswitched(kDefault, {80.0, 0.5}, b));
    }
    CHECK(sa == sb);
}
