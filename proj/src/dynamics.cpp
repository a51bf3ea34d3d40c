#include "noisy_majority/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "noisy_majority/errors.hpp"

namespace noisy_majority {

Configuration::Configuration(std::int64_t n, std::int64_t b) : n_(n), b_(b) {
    if (n < 1) throw InvalidArgument("population size must be positive, got " + std::to_string(n));
    if (b < 0 || b > n)
        throw InvalidArgument("beta count " + std::to_string(b) + " outside [0, " +
                              std::to_string(n) + "]");
}

Configuration Configuration::from_bias(std::int64_t n, std::int64_t bias) {
    if (bias < -n || bias > n || (bias + n) % 2 != 0)
        throw InvalidArgument("bias " + std::to_string(bias) + " incompatible with n = " +
                              std::to_string(n));
    return Configuration(n, (n + bias) / 2);
}

TernaryConfiguration::TernaryConfiguration(std::int64_t n, std::int64_t b, std::int64_t u)
    : n_(n), b_(b), u_(u) {
    if (n < 1) throw InvalidArgument("population size must be positive");
    if (b < 0 || u < 0 || b + u > n)
        throw InvalidArgument("ternary counts (b=" + std::to_string(b) + ", u=" +
                              std::to_string(u) + ") do not fit n = " + std::to_string(n));
}

NoiseParam::NoiseParam(double p) : p_(p) {
    if (!(p >= 0.0 && p < 1.0))
        throw InvalidArgument("noise probability must lie in [0, 1), got " + std::to_string(p));
}

PullDistribution pull_probabilities(const Configuration& cfg, NoiseParam noise) {
    const double p = noise.value();
    const double n = static_cast<double>(cfg.n());
    PullDistribution d;
    d.beta = (static_cast<double>(cfg.beta()) / n) * (1.0 - p) + p / 2.0;
    d.alpha = (static_cast<double>(cfg.alpha()) / n) * (1.0 - p) + p / 2.0;
    return d;
}

PullDistribution pull_probabilities(const TernaryConfiguration& cfg, NoiseParam noise,
                                    UndecidedNoise mode) {
    const double p = noise.value();
    const double n = static_cast<double>(cfg.n());
    const double share = mode == UndecidedNoise::AllSymbols ? p / 3.0 : p / 2.0;
    PullDistribution d;
    d.beta = (static_cast<double>(cfg.beta()) / n) * (1.0 - p) + share;
    d.alpha = (static_cast<double>(cfg.alpha()) / n) * (1.0 - p) + share;
    d.undecided = (static_cast<double>(cfg.undecided()) / n) * (1.0 - p) +
                  (mode == UndecidedNoise::AllSymbols ? share : 0.0);
    return d;
}

double adopt_beta_probability_3maj(const Configuration& cfg, NoiseParam noise) {
    const PullDistribution d = pull_probabilities(cfg, noise);
    // Three beta messages, or exactly two out of three.
    return d.beta * d.beta * d.beta + 3.0 * d.alpha * d.beta * d.beta;
}

Configuration step_aggregate_3maj(const Configuration& cfg, NoiseParam noise, RngStream& rng) {
    const double q = adopt_beta_probability_3maj(cfg, noise);
    return Configuration(cfg.n(), rng.binomial(cfg.n(), q));
}

Configuration step_agentwise_3maj(const Configuration& cfg, NoiseParam noise, RngStream& rng) {
    const std::int64_t n = cfg.n();
    std::vector<std::uint8_t> holds_beta(static_cast<std::size_t>(n), 0);
    for (std::int64_t i = 0; i < cfg.beta(); ++i) holds_beta[static_cast<std::size_t>(i)] = 1;

    const double p = noise.value();
    std::int64_t next_beta = 0;
    for (std::int64_t agent = 0; agent < n; ++agent) {
        int beta_votes = 0;
        for (int k = 0; k < 3; ++k) {
            if (p > 0.0 && rng.bernoulli(p)) {
                beta_votes += rng.bernoulli(0.5) ? 1 : 0;
            } else {
                beta_votes += holds_beta[static_cast<std::size_t>(rng.below(n))];
            }
        }
        if (beta_votes >= 2) ++next_beta;
    }
    return Configuration(n, next_beta);
}

Configuration step_2choices(const Configuration& cfg, NoiseParam noise, RngStream& rng) {
    const PullDistribution d = pull_probabilities(cfg, noise);
    const std::int64_t stay_beta = rng.binomial(cfg.beta(), 1.0 - d.alpha * d.alpha);
    const std::int64_t join_beta = rng.binomial(cfg.alpha(), d.beta * d.beta);
    return Configuration(cfg.n(), stay_beta + join_beta);
}

TernaryConfiguration step_undecided(const TernaryConfiguration& cfg, NoiseParam noise,
                                    RngStream& rng, UndecidedNoise mode) {
    const PullDistribution d = pull_probabilities(cfg, noise, mode);

    // Decided agents turn undecided on pulling the opposite opinion.
    const std::int64_t alpha_lost = rng.binomial(cfg.alpha(), d.beta);
    const std::int64_t beta_lost = rng.binomial(cfg.beta(), d.alpha);

    // Undecided agents adopt whichever opinion they pull.
    const std::int64_t to_alpha = rng.binomial(cfg.undecided(), d.alpha);
    const double rest = 1.0 - d.alpha;
    const std::int64_t to_beta =
        rest > 0.0 ? rng.binomial(cfg.undecided() - to_alpha, d.beta / rest) : 0;

    const std::int64_t b = cfg.beta() - beta_lost + to_beta;
    const std::int64_t u = cfg.undecided() - to_alpha - to_beta + alpha_lost + beta_lost;
    return TernaryConfiguration(cfg.n(), b, u);
}

StubbornConfiguration to_stubborn_model(const Configuration& cfg, NoiseParam noise) {
    const double p = noise.value();
    const double size = p * static_cast<double>(cfg.n()) / (2.0 * (1.0 - p));
    const double rounded = std::round(size);
    if (std::abs(size - rounded) > 1e-9 * std::max(1.0, size))
        throw NonIntegralStubbornSize("stubborn community size pn/(2(1-p)) = " +
                                      std::to_string(size) + " is not an integer for n = " +
                                      std::to_string(cfg.n()) + ", p = " + std::to_string(p));
    return StubbornConfiguration{cfg, static_cast<std::int64_t>(rounded)};
}

double adopt_beta_probability_stubborn(const StubbornConfiguration& scfg) {
    const double qb = static_cast<double>(scfg.regular.beta() + scfg.stubborn_per_opinion) /
                      static_cast<double>(scfg.total());
    const double qa = 1.0 - qb;
    return qb * qb * qb + 3.0 * qa * qb * qb;
}

StubbornConfiguration step_stubborn_3maj(const StubbornConfiguration& scfg, RngStream& rng) {
    const std::int64_t n = scfg.regular.n();
    const std::int64_t k = scfg.stubborn_per_opinion;
    const std::int64_t total = scfg.total();
    // Layout: [0, b) regular beta, [b, n) regular alpha,
    // [n, n + k) stubborn beta, [n + k, n + 2k) stubborn alpha.
    std::vector<std::uint8_t> holds_beta(static_cast<std::size_t>(total), 0);
    for (std::int64_t i = 0; i < scfg.regular.beta(); ++i) holds_beta[static_cast<std::size_t>(i)] = 1;
    for (std::int64_t i = n; i < n + k; ++i) holds_beta[static_cast<std::size_t>(i)] = 1;

    std::int64_t next_beta = 0;
    for (std::int64_t agent = 0; agent < n; ++agent) {
        int beta_votes = 0;
        for (int j = 0; j < 3; ++j) beta_votes += holds_beta[static_cast<std::size_t>(rng.below(total))];
        if (beta_votes >= 2) ++next_beta;
    }
    return StubbornConfiguration{Configuration(n, next_beta), k};
}

}  // namespace noisy_majority
