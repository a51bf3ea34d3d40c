#pragma once

#include <cstdint>

#include "noisy_majority/rng.hpp"

namespace noisy_majority {

// Binary configuration on the complete graph: n agents, b of them hold beta.
// The alpha count is always derived as n - b.
class Configuration {
public:
    Configuration(std::int64_t n, std::int64_t b);

    std::int64_t n() const noexcept { return n_; }
    std::int64_t beta() const noexcept { return b_; }
    std::int64_t alpha() const noexcept { return n_ - b_; }
    // s = b - a = 2b - n.
    std::int64_t bias() const noexcept { return 2 * b_ - n_; }

    // Configuration with the given bias; throws unless |s| <= n and s = n (mod 2).
    static Configuration from_bias(std::int64_t n, std::int64_t bias);

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    std::int64_t n_;
    std::int64_t b_;
};

// (alpha, beta, undecided) counts for the Undecided-State dynamics.
class TernaryConfiguration {
public:
    TernaryConfiguration(std::int64_t n, std::int64_t b, std::int64_t u);

    std::int64_t n() const noexcept { return n_; }
    std::int64_t beta() const noexcept { return b_; }
    std::int64_t undecided() const noexcept { return u_; }
    std::int64_t alpha() const noexcept { return n_ - b_ - u_; }
    std::int64_t bias() const noexcept { return b_ - alpha(); }

    friend bool operator==(const TernaryConfiguration&, const TernaryConfiguration&) = default;

private:
    std::int64_t n_;
    std::int64_t b_;
    std::int64_t u_;
};

// Probability that any single pulled message is replaced by noise.
// p = 0 is the noiseless baseline.
class NoiseParam {
public:
    explicit NoiseParam(double p);
    double value() const noexcept { return p_; }

private:
    double p_;
};

struct PullDistribution {
    double alpha = 0.0;
    double beta = 0.0;
    double undecided = 0.0;
};

// What a noisy message may turn into under the Undecided-State dynamics.
enum class UndecidedNoise {
    AllSymbols,    // uniform over {alpha, beta, undecided}
    OpinionsOnly,  // uniform over {alpha, beta}
};

struct StubbornConfiguration {
    Configuration regular;
    std::int64_t stubborn_per_opinion = 0;

    std::int64_t total() const noexcept { return regular.n() + 2 * stubborn_per_opinion; }
};

PullDistribution pull_probabilities(const Configuration& cfg, NoiseParam noise);
PullDistribution pull_probabilities(const TernaryConfiguration& cfg, NoiseParam noise,
                                    UndecidedNoise mode = UndecidedNoise::AllSymbols);

// Probability that one agent adopts beta after a 3-Majority round.
double adopt_beta_probability_3maj(const Configuration& cfg, NoiseParam noise);

// One synchronous 3-Majority round as a single Binomial(n, q) draw.
Configuration step_aggregate_3maj(const Configuration& cfg, NoiseParam noise, RngStream& rng);

// Same round, simulated agent by agent. Only used for cross-validation.
Configuration step_agentwise_3maj(const Configuration& cfg, NoiseParam noise, RngStream& rng);

// 2-Choices: an agent switches only when both samples disagree with it.
Configuration step_2choices(const Configuration& cfg, NoiseParam noise, RngStream& rng);

TernaryConfiguration step_undecided(const TernaryConfiguration& cfg, NoiseParam noise,
                                    RngStream& rng,
                                    UndecidedNoise mode = UndecidedNoise::AllSymbols);

// Noiseless model with two stubborn communities of size pn / (2(1-p)).
// Throws NonIntegralStubbornSize when that size is not an integer.
StubbornConfiguration to_stubborn_model(const Configuration& cfg, NoiseParam noise);

double adopt_beta_probability_stubborn(const StubbornConfiguration& scfg);

// Noiseless 3-Majority for the regular agents over the enlarged population,
// simulated agent by agent. Stubborn agents never move.
StubbornConfiguration step_stubborn_3maj(const StubbornConfiguration& scfg, RngStream& rng);

}  // namespace noisy_majority
