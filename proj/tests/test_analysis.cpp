#include <cmath>

#include "doctest.h"
#include "noisy_majority/analysis.hpp"
#include "noisy_majority/errors.hpp"

using namespace noisy_majority;

TEST_CASE("expected bias") {
    CHECK(expected_bias(0.0, 1000, NoiseParam(0.2)) == 0.0);
    CHECK(expected_bias(100.0, 1000, NoiseParam(0.2)) == doctest::Approx(119.744).epsilon(1e-12));
    for (double p : {0.0, 0.1, 0.2, 0.3}) {
        const double s_eq = *equilibrium_bias(1000, NoiseParam(p));
        CHECK(expected_bias(s_eq, 1000, NoiseParam(p)) == doctest::Approx(s_eq).epsilon(1e-12));
    }
}

TEST_CASE("expected bias is odd") {
    for (double p : {0.0, 0.15, 1.0 / 3.0, 0.7})
        for (double s = 0.0; s <= 500.0; s += 7.5)
            CHECK(expected_bias(-s, 500, NoiseParam(p)) == -expected_bias(s, 500, NoiseParam(p)));
}

TEST_CASE("drift direction on either side of the equilibrium") {
    const std::int64_t n = 10000;
    for (double p = 0.01; p < 1.0 / 3.0 - 1e-9; p += 0.02) {
        const NoiseParam noise(p);
        const double s_eq = *equilibrium_bias(n, noise);
        for (double s = 1.0; s <= static_cast<double>(n); s += 13.0) {
            if (std::abs(s - s_eq) < 1e-6) continue;
            if (s < s_eq)
                CHECK(expected_bias(s, n, noise) > s);
            else
                CHECK(expected_bias(s, n, noise) < s);
        }
    }
    for (double p = 0.34; p < 1.0; p += 0.02)
        for (double s = 1.0; s <= static_cast<double>(n); s += 13.0)
            CHECK(expected_bias(s, n, NoiseParam(p)) < s);
}

TEST_CASE("equilibrium bias") {
    CHECK_FALSE(equilibrium_bias(1000, NoiseParam(1.0 / 3.0)).has_value());
    CHECK_FALSE(equilibrium_bias(1000, NoiseParam(0.5)).has_value());
    CHECK(*equilibrium_bias(1000, NoiseParam(0.0)) == doctest::Approx(1000.0));
    CHECK(*equilibrium_bias(1000, NoiseParam(0.2)) == doctest::Approx(883.8834764831844).epsilon(1e-12));
    CHECK(*equilibrium_bias(100000, NoiseParam(0.2)) == doctest::Approx(88388.34764831843).epsilon(1e-12));

    double prev = 2000.0;
    for (double p = 0.0; p < 1.0 / 3.0; p += 0.001) {
        const double v = *equilibrium_bias(1000, NoiseParam(p));
        CHECK(v < prev);
        CHECK(v > 0.0);
        prev = v;
    }
    CHECK(*equilibrium_bias(1000, NoiseParam(1.0 / 3.0 - 1e-12)) < 0.01);

    const auto d = predict_drift(100.0, 1000, NoiseParam(0.4));
    CHECK_FALSE(d.equilibrium_bias.has_value());
    CHECK(d.threshold == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("metastable interval") {
    const auto [lo, hi] = metastable_interval(1000, NoiseParam(0.2), 0.1);
    CHECK(lo == doctest::Approx(795.4951288348659).epsilon(1e-12));
    CHECK(hi == doctest::Approx(972.2718241315029).epsilon(1e-12));
    const auto [tlo, thi] = metastable_interval(1000, NoiseParam(0.2), 1e-12);
    CHECK(thi - tlo < 1e-8);
    CHECK_THROWS_AS(metastable_interval(1000, NoiseParam(0.3), 0.3), InvalidEpsilon);
    CHECK_THROWS_AS(metastable_interval(1000, NoiseParam(0.2), 0.34), InvalidEpsilon);
    CHECK_THROWS_AS(metastable_interval(1000, NoiseParam(0.4), 0.01), InvalidEpsilon);
    CHECK_THROWS_AS(metastable_interval(1000, NoiseParam(0.2), 0.0), InvalidEpsilon);
}

TEST_CASE("noise-regime epsilon hypotheses") {
    CHECK(noise_epsilon_admissible(NoiseParam(0.5), 0.2));
    CHECK_FALSE(noise_epsilon_admissible(NoiseParam(0.5), 0.25));
    CHECK_FALSE(noise_epsilon_admissible(NoiseParam(0.35), 0.05));
    CHECK_FALSE(noise_epsilon_admissible(NoiseParam(0.2), 0.05));
    CHECK(noise_epsilon_admissible(NoiseParam(0.9), 0.05));
    CHECK_FALSE(noise_epsilon_admissible(NoiseParam(0.9), 0.1));
}

TEST_CASE("theorem thresholds") {
    const auto e = theorem_thresholds(std::exp(1.0), 1.0, 0.05);
    CHECK(e.symmetry_break_level == doctest::Approx(std::sqrt(std::exp(1.0))));
    const auto big = theorem_thresholds(1e4, 1.0, 0.5);
    CHECK(big.symmetry_break_level == doctest::Approx(303.4854258770293).epsilon(1e-12));
    CHECK(big.noise_collapse_level == doctest::Approx(400.0));
    CHECK(big.bounded_band == big.symmetry_break_level);
    CHECK(theorem_thresholds(1e4, 2.0, 0.5).symmetry_break_level ==
          doctest::Approx(2.0 * 303.4854258770293));
    CHECK_THROWS_AS(theorem_thresholds(1.0, 1.0, 0.1), InvalidArgument);
}
