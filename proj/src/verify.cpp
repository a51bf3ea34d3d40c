#include "noisy_majority/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "noisy_majority/analysis.hpp"
#include "noisy_majority/dynamics.hpp"
#include "noisy_majority/harness.hpp"
#include "noisy_majority/oracle.hpp"

namespace noisy_majority {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

CheckResult check_drift_identity() {
    double worst = 0.0;
    for (std::int64_t n : {4, 10, 100, 1000}) {
        for (double p : {0.0, 0.1, 0.2, 1.0 / 3.0, 0.5, 0.9}) {
            for (std::int64_t b = 0; b <= n; ++b) {
                const Configuration cfg(n, b);
                const double lhs = static_cast<double>(n) *
                                   (2.0 * adopt_beta_probability_3maj(cfg, NoiseParam(p)) - 1.0);
                const double rhs = expected_bias(static_cast<double>(2 * b - n), n, NoiseParam(p));
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
    }
    return {"drift closed form = n(2q - 1)", worst <= 1e-9, fmt("max abs error %.3g", worst)};
}

CheckResult check_chain_mean() {
    double worst = 0.0;
    for (std::int64_t n : {4, 10, 50}) {
        for (double p : {0.0, 0.1, 0.2, 0.5}) {
            const BiasChain chain = build_chain(n, NoiseParam(p), ChainDynamics::ThreeMajority);
            for (std::int64_t b = 0; b <= n; ++b) {
                const double rhs = expected_bias(static_cast<double>(2 * b - n), n, NoiseParam(p));
                worst = std::max(worst, std::abs(one_step_mean_bias(chain, b) - rhs));
            }
        }
    }
    return {"chain one-step mean = drift closed form", worst <= 1e-9,
            fmt("max abs error %.3g", worst)};
}

CheckResult check_stubborn() {
    double worst = 0.0;
    const std::pair<std::int64_t, double> cases[] = {{100, 1.0 / 3.0}, {100, 0.5}, {300, 0.25}};
    for (const auto& [n, p] : cases) {
        for (std::int64_t b = 0; b <= n; ++b) {
            const Configuration cfg(n, b);
            const auto scfg = to_stubborn_model(cfg, NoiseParam(p));
            worst = std::max(worst, std::abs(adopt_beta_probability_stubborn(scfg) -
                                             adopt_beta_probability_3maj(cfg, NoiseParam(p))));
        }
    }
    return {"stubborn model adoption = noisy adoption", worst <= 1e-12,
            fmt("max abs error %.3g", worst)};
}

CheckResult check_oracle_agreement(const VerifyOptions& options) {
    struct Case {
        std::int64_t n;
        double p;
    };
    std::vector<Case> cases;
    for (std::int64_t n : {4, 8, 12})
        for (double p : {0.1, 0.2, 0.5}) cases.push_back({n, p});
    const std::int64_t checkpoints[] = {1, 5, 20};

    std::vector<double> worst(cases.size(), 0.0);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < cases.size(); i = next++) {
            const auto [n, p] = cases[i];
            const NoiseParam noise(p);
            const BiasChain chain = build_chain(n, noise, ChainDynamics::ThreeMajority);
            const auto start = StateDistribution::point_mass(n, n / 2);
            std::vector<Eigen::RowVectorXd> counts(3, Eigen::RowVectorXd::Zero(n + 1));
            RngStream rng(options.seed, i);
            for (std::int64_t trial = 0; trial < options.samples; ++trial) {
                Configuration cfg(n, n / 2);
                std::size_t k = 0;
                for (std::int64_t t = 1; t <= 20; ++t) {
                    cfg = step_agentwise_3maj(cfg, noise, rng);
                    if (t == checkpoints[k]) counts[k++](cfg.beta()) += 1.0;
                }
            }
            for (std::size_t k = 0; k < 3; ++k) {
                const auto exact = evolve(start, chain, checkpoints[k]).weights();
                const double tv =
                    total_variation(exact, counts[k] / static_cast<double>(options.samples));
                worst[i] = std::max(worst[i], tv);
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const unsigned workers = std::min<unsigned>(resolve_threads(options.threads),
                                                    static_cast<unsigned>(cases.size()));
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    const double max_tv = *std::max_element(worst.begin(), worst.end());
    return {"exact chain vs agent-level simulation (TV)", max_tv <= 0.015,
            fmt("max TV %.4f over %.0f samples", max_tv, static_cast<double>(options.samples))};
}

}  // namespace

std::vector<CheckResult> run_verify_suite(const VerifyOptions& options) {
    return {check_drift_identity(), check_chain_mean(), check_stubborn(),
            check_oracle_agreement(options)};
}

}  // namespace noisy_majority
