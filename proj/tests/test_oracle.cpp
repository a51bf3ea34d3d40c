#include <cmath>
#include <sstream>

#include "doctest.h"
#include "noisy_majority/analysis.hpp"
#include "noisy_majority/errors.hpp"
#include "noisy_majority/oracle.hpp"
#include "support.hpp"

using namespace noisy_majority;

TEST_CASE("binomial pmf agrees with the product formula") {
    for (std::int64_t n : {1, 5, 30, 200}) {
        for (double q : {0.0, 0.01, 0.3, 0.5, 0.97, 1.0}) {
            const auto a = binomial_pmf(n, q);
            const auto b = test_support::binomial_by_recurrence(n, q);
            for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-12);
        }
    }
}

TEST_CASE("chain construction") {
    const auto tiny = build_chain(1, NoiseParam(0.5), ChainDynamics::ThreeMajority);
    CHECK(tiny.prob(0, 1) == doctest::Approx(0.15625).epsilon(1e-12));
    CHECK(tiny.prob(1, 0) == doctest::Approx(0.15625).epsilon(1e-12));

    for (auto dyn : {ChainDynamics::ThreeMajority, ChainDynamics::TwoChoices}) {
        for (std::int64_t n : {1, 4, 9, 40}) {
            for (double p : {0.0, 0.1, 0.5, 0.9}) {
                const auto chain = build_chain(n, NoiseParam(p), dyn);
                for (std::int64_t b = 0; b <= n; ++b) {
                    CHECK(std::abs(chain.rows().row(b).sum() - 1.0) <= 1e-10);
                    for (std::int64_t c = 0; c <= n; ++c) {
                        CHECK(chain.prob(b, c) >= 0.0);
                        CHECK(chain.prob(b, c) <= 1.0);
                        if (p > 0.0) CHECK(chain.prob(b, c) > 0.0);
                        CHECK(std::abs(chain.prob(b, c) - chain.prob(n - b, n - c)) <= 1e-12);
                    }
                }
                if (p == 0.0) {
                    CHECK(chain.prob(0, 0) == 1.0);
                    CHECK(chain.prob(n, n) == 1.0);
                }
            }
        }
    }
    CHECK_THROWS_AS(build_chain(3000, NoiseParam(0.1), ChainDynamics::ThreeMajority), CapExceeded);
    CHECK_THROWS_AS(build_chain(20, NoiseParam(0.1), ChainDynamics::ThreeMajority, 10), CapExceeded);
}

TEST_CASE("2-Choices rows are the convolution of two binomials") {
    // Brute-force oracle: sum over the two independent binomial outcomes.
    const std::int64_t n = 7, b = 3;
    const double p = 0.2;
    const auto chain = build_chain(n, NoiseParam(p), ChainDynamics::TwoChoices);
    const auto d = pull_probabilities(Configuration(n, b), NoiseParam(p));
    const auto stay = test_support::binomial_by_recurrence(b, 1.0 - d.alpha * d.alpha);
    const auto join = test_support::binomial_by_recurrence(n - b, d.beta * d.beta);
    for (std::int64_t c = 0; c <= n; ++c) {
        double want = 0.0;
        for (std::int64_t i = 0; i <= b; ++i)
            if (c - i >= 0 && c - i <= n - b) want += stay[i] * join[c - i];
        CHECK(chain.prob(b, c) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("evolve") {
    const auto chain = build_chain(10, NoiseParam(0.3), ChainDynamics::ThreeMajority);
    const auto start = StateDistribution::point_mass(10, 5);
    CHECK(evolve(start, chain, 0).weights() == start.weights());
    for (std::int64_t t : {1, 3, 17}) {
        const auto d = evolve(start, chain, t);
        CHECK(std::abs(d.weights().sum() - 1.0) <= 1e-10);
        for (std::int64_t b = 0; b <= 10; ++b) CHECK(std::abs(d[b] - d[10 - b]) <= 1e-12);
    }
    const auto absorbing = build_chain(10, NoiseParam(0.0), ChainDynamics::ThreeMajority);
    CHECK(evolve(StateDistribution::point_mass(10, 10), absorbing, 25)[10] == doctest::Approx(1.0));
    CHECK_THROWS_AS(evolve(StateDistribution::point_mass(9, 5), chain, 1), DimensionMismatch);
}

TEST_CASE("one-step mean bias equals the drift closed form") {
    for (std::int64_t n : {4, 10, 33, 100}) {
        for (double p : {0.0, 0.1, 0.2, 1.0 / 3.0, 0.5, 0.9}) {
            const auto chain = build_chain(n, NoiseParam(p), ChainDynamics::ThreeMajority);
            for (std::int64_t b = 0; b <= n; ++b)
                CHECK(std::abs(one_step_mean_bias(chain, b) -
                               expected_bias(static_cast<double>(2 * b - n), n, NoiseParam(p))) <= 1e-9);
        }
    }
    const auto c10 = build_chain(10, NoiseParam(0.2), ChainDynamics::ThreeMajority);
    CHECK(one_step_mean_bias(c10, 8) == doctest::Approx(6.64704).epsilon(1e-12));
    CHECK(std::abs(one_step_mean_bias(c10, 5)) <= 1e-12);
    const auto c0 = build_chain(10, NoiseParam(0.0), ChainDynamics::ThreeMajority);
    CHECK(one_step_mean_bias(c0, 10) == doctest::Approx(10.0));
}

TEST_CASE("expected hitting time") {
    const auto tiny = build_chain(1, NoiseParam(0.5), ChainDynamics::ThreeMajority);
    CHECK(expected_hitting_time(tiny, 1, {1}) == 0.0);
    CHECK(expected_hitting_time(tiny, 0, {1}) == doctest::Approx(6.4).epsilon(1e-12));

    // Monte Carlo cross-check with the chain's own rows as sampler.
    const auto chain = build_chain(4, NoiseParam(0.4), ChainDynamics::ThreeMajority);
    const double exact = expected_hitting_time(chain, 2, {0, 1, 3, 4});
    RngStream rng(99, 0);
    const NoiseParam noise(0.4);
    double total = 0.0;
    const int trials = 1000000;
    for (int i = 0; i < trials; ++i) {
        Configuration cfg(4, 2);
        int t = 0;
        do {
            cfg = step_aggregate_3maj(cfg, noise, rng);
            ++t;
        } while (cfg.beta() == 2);
        total += t;
    }
    CHECK(std::abs(total / trials - exact) <= 0.01 * exact);
    // From b = 2 the exit is geometric.
    CHECK(exact == doctest::Approx(1.0 / (1.0 - chain.prob(2, 2))).epsilon(1e-12));

    const auto absorbing = build_chain(6, NoiseParam(0.0), ChainDynamics::ThreeMajority);
    CHECK_THROWS_AS(expected_hitting_time(absorbing, 3, {2}), SingularSystem);
    CHECK_THROWS_AS(expected_hitting_time(absorbing, 6, {0}), SingularSystem);
    CHECK(expected_hitting_time(absorbing, 3, {0, 6}) > 0.0);
    CHECK_THROWS_AS(expected_hitting_time(tiny, 0, {}), InvalidArgument);
}

TEST_CASE("hitting time solve above the direct-solve limit") {
    const auto chain = build_chain(600, NoiseParam(0.3), ChainDynamics::ThreeMajority);
    std::vector<std::int64_t> target;
    for (std::int64_t b = 0; b <= 600; ++b)
        if (std::abs(2 * b - 600) >= 100) target.push_back(b);
    const double h = expected_hitting_time(chain, 300, target);
    CHECK(std::isfinite(h));
    CHECK(h > 1.0);
}

TEST_CASE("band mass") {
    const auto chain = build_chain(20, NoiseParam(0.2), ChainDynamics::ThreeMajority);
    const auto start = StateDistribution::point_mass(20, 15);
    CHECK(quasi_stationary_band_mass(chain, 0, 20, start, 7) == doctest::Approx(1.0));
    CHECK(quasi_stationary_band_mass(chain, 5, 4, start, 7) == 0.0);

    // Frozen regression: n = 200, p = 0.1, eps = 0.2, start near (n + s_eq)/2, 50 rounds.
    const std::int64_t n = 200;
    const NoiseParam noise(0.1);
    const auto [lo_s, hi_s] = metastable_interval(n, noise, 0.2);
    const auto [lo, hi] = states_for_bias_band(n, lo_s, hi_s);
    const double s_eq = *equilibrium_bias(n, noise);
    const auto b0 = static_cast<std::int64_t>(std::lround((n + s_eq) / 2.0));
    const auto big = build_chain(n, noise, ChainDynamics::ThreeMajority);
    const double mass = quasi_stationary_band_mass(big, lo, hi, StateDistribution::point_mass(n, b0), 50);
    CHECK(lo == 179);
    CHECK(hi == 200);
    CHECK(b0 == 198);
    CHECK(mass >= 0.9);
    CHECK(mass == doctest::Approx(0.99999999997956757).epsilon(1e-12));
}

TEST_CASE("states for bias band") {
    const auto [lo, hi] = states_for_bias_band(10, 1.5, 6.2);
    // bias 2b - 10 in [1.5, 6.2] -> b in {6, 7, 8}.
    CHECK(lo == 6);
    CHECK(hi == 8);
}

TEST_CASE("chain CSV export") {
    const auto chain = build_chain(1, NoiseParam(0.5), ChainDynamics::ThreeMajority);
    std::ostringstream out;
    write_chain_csv(chain, out);
    CHECK(out.str() == "from,to,prob\n0,0,0.84375\n0,1,0.15625\n1,0,0.15625\n1,1,0.84375\n");
}
