#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "noisy_majority/dynamics.hpp"

namespace noisy_majority {

enum class ChainDynamics { ThreeMajority, TwoChoices };

inline constexpr std::int64_t kDefaultChainCap = 2048;

// Exact transition matrix of the beta-count chain on {0, ..., n}.
// Immutable once built; safe to share across threads.
class BiasChain {
public:
    std::int64_t n() const noexcept { return n_; }
    double noise() const noexcept { return p_; }
    ChainDynamics dynamics() const noexcept { return dynamics_; }
    std::int64_t states() const noexcept { return n_ + 1; }
    const Eigen::MatrixXd& rows() const noexcept { return rows_; }
    double prob(std::int64_t from, std::int64_t to) const { return rows_(from, to); }

private:
    friend BiasChain build_chain(std::int64_t, NoiseParam, ChainDynamics, std::int64_t);
    BiasChain(std::int64_t n, double p, ChainDynamics d, Eigen::MatrixXd rows)
        : n_(n), p_(p), dynamics_(d), rows_(std::move(rows)) {}

    std::int64_t n_;
    double p_;
    ChainDynamics dynamics_;
    Eigen::MatrixXd rows_;
};

class StateDistribution {
public:
    explicit StateDistribution(Eigen::RowVectorXd weights);

    static StateDistribution point_mass(std::int64_t n, std::int64_t b);

    std::int64_t size() const noexcept { return weights_.size(); }
    const Eigen::RowVectorXd& weights() const noexcept { return weights_; }
    double operator[](std::int64_t b) const { return weights_(b); }

private:
    Eigen::RowVectorXd weights_;
};

// Binomial(trials, prob) probability mass function on {0, ..., trials},
// evaluated through log-factorials.
std::vector<double> binomial_pmf(std::int64_t trials, double prob);

BiasChain build_chain(std::int64_t n, NoiseParam noise, ChainDynamics dynamics,
                      std::int64_t cap = kDefaultChainCap);

// dist * P^t by t vector-matrix products.
StateDistribution evolve(const StateDistribution& dist, const BiasChain& chain, std::int64_t rounds);

// Sum over b' of P(b -> b') (2b' - n).
double one_step_mean_bias(const BiasChain& chain, std::int64_t b);

// Expected rounds to first enter `target` from `start`. Throws SingularSystem
// when the target is not reached almost surely.
double expected_hitting_time(const BiasChain& chain, std::int64_t start,
                             const std::vector<std::int64_t>& target);

// Mass on beta-counts [lo, hi] after `rounds` steps from dist0; an empty
// interval (lo > hi) has mass zero.
double quasi_stationary_band_mass(const BiasChain& chain, std::int64_t lo, std::int64_t hi,
                                  const StateDistribution& dist0, std::int64_t rounds);

// Beta-count interval whose bias 2b - n lies in [bias_lo, bias_hi].
std::pair<std::int64_t, std::int64_t> states_for_bias_band(std::int64_t n, double bias_lo,
                                                           double bias_hi);

double total_variation(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b);

// Row-major CSV with header "from,to,prob".
void write_chain_csv(const BiasChain& chain, std::ostream& out);

}  // namespace noisy_majority
