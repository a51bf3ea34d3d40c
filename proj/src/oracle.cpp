#include "noisy_majority/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "noisy_majority/errors.hpp"

namespace noisy_majority {

namespace {

constexpr double kRenormalizeResidual = 1e-12;
constexpr double kMaxResidual = 1e-10;
constexpr std::int64_t kDirectSolveLimit = 512;

void normalize_row(std::vector<double>& row, std::int64_t from) {
    double sum = 0.0;
    for (double w : row) sum += w;
    const double residual = std::abs(sum - 1.0);
    if (residual > kMaxResidual)
        throw Error("transition row " + std::to_string(from) + " sums to " + std::to_string(sum));
    if (residual > kRenormalizeResidual)
        for (double& w : row) w /= sum;
}

}  // namespace

StateDistribution::StateDistribution(Eigen::RowVectorXd weights) : weights_(std::move(weights)) {
    if (weights_.size() == 0) throw InvalidArgument("empty state distribution");
    if ((weights_.array() < 0.0).any()) throw InvalidArgument("negative probability weight");
    if (std::abs(weights_.sum() - 1.0) > kMaxResidual)
        throw InvalidArgument("state distribution does not sum to 1");
}

StateDistribution StateDistribution::point_mass(std::int64_t n, std::int64_t b) {
    if (b < 0 || b > n) throw InvalidArgument("point mass outside {0, ..., n}");
    Eigen::RowVectorXd w = Eigen::RowVectorXd::Zero(n + 1);
    w(b) = 1.0;
    return StateDistribution(std::move(w));
}

std::vector<double> binomial_pmf(std::int64_t trials, double prob) {
    std::vector<double> pmf(static_cast<std::size_t>(trials + 1), 0.0);
    if (prob <= 0.0) {
        pmf.front() = 1.0;
        return pmf;
    }
    if (prob >= 1.0) {
        pmf.back() = 1.0;
        return pmf;
    }
    const double log_p = std::log(prob);
    const double log_q = std::log1p(-prob);
    const double log_n_fact = std::lgamma(static_cast<double>(trials) + 1.0);
    for (std::int64_t k = 0; k <= trials; ++k) {
        const double kd = static_cast<double>(k);
        const double rest = static_cast<double>(trials - k);
        const double log_mass = log_n_fact - std::lgamma(kd + 1.0) - std::lgamma(rest + 1.0) +
                                kd * log_p + rest * log_q;
        pmf[static_cast<std::size_t>(k)] = std::exp(log_mass);
    }
    return pmf;
}

BiasChain build_chain(std::int64_t n, NoiseParam noise, ChainDynamics dynamics, std::int64_t cap) {
    if (n < 1) throw InvalidArgument("chain needs n >= 1");
    if (n > cap)
        throw CapExceeded("n = " + std::to_string(n) + " exceeds the chain cap " +
                          std::to_string(cap));
    const auto states = n + 1;
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(states, states);
    for (std::int64_t b = 0; b <= n; ++b) {
        const Configuration cfg(n, b);
        std::vector<double> row;
        if (dynamics == ChainDynamics::ThreeMajority) {
            row = binomial_pmf(n, adopt_beta_probability_3maj(cfg, noise));
        } else {
            const PullDistribution d = pull_probabilities(cfg, noise);
            const auto stay = binomial_pmf(b, 1.0 - d.alpha * d.alpha);
            const auto join = binomial_pmf(n - b, d.beta * d.beta);
            row.assign(static_cast<std::size_t>(states), 0.0);
            for (std::size_t i = 0; i < stay.size(); ++i)
                for (std::size_t j = 0; j < join.size(); ++j) row[i + j] += stay[i] * join[j];
        }
        normalize_row(row, b);
        for (std::int64_t to = 0; to <= n; ++to) rows(b, to) = row[static_cast<std::size_t>(to)];
    }
    return BiasChain(n, noise.value(), dynamics, std::move(rows));
}

StateDistribution evolve(const StateDistribution& dist, const BiasChain& chain, std::int64_t rounds) {
    if (dist.size() != chain.states())
        throw DimensionMismatch("distribution over " + std::to_string(dist.size()) +
                                " states, chain has " + std::to_string(chain.states()));
    if (rounds < 0) throw InvalidArgument("negative round count");
    Eigen::RowVectorXd w = dist.weights();
    for (std::int64_t t = 0; t < rounds; ++t) {
        w = w * chain.rows();
        w /= w.sum();
    }
    return StateDistribution(std::move(w));
}

double one_step_mean_bias(const BiasChain& chain, std::int64_t b) {
    if (b < 0 || b > chain.n()) throw InvalidArgument("state outside the chain");
    double mean = 0.0;
    for (std::int64_t to = 0; to <= chain.n(); ++to)
        mean += chain.prob(b, to) * static_cast<double>(2 * to - chain.n());
    return mean;
}

double expected_hitting_time(const BiasChain& chain, std::int64_t start,
                             const std::vector<std::int64_t>& target) {
    const std::int64_t states = chain.states();
    if (target.empty()) throw InvalidArgument("empty hitting target");
    if (start < 0 || start >= states) throw InvalidArgument("start state outside the chain");

    std::vector<char> is_target(static_cast<std::size_t>(states), 0);
    for (auto t : target) {
        if (t < 0 || t >= states) throw InvalidArgument("target state outside the chain");
        is_target[static_cast<std::size_t>(t)] = 1;
    }
    if (is_target[static_cast<std::size_t>(start)]) return 0.0;

    const auto& P = chain.rows();

    // States that can still reach the target.
    std::vector<char> reaches(is_target);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::int64_t i = 0; i < states; ++i) {
            if (reaches[static_cast<std::size_t>(i)]) continue;
            for (std::int64_t j = 0; j < states; ++j) {
                if (P(i, j) > 0.0 && reaches[static_cast<std::size_t>(j)]) {
                    reaches[static_cast<std::size_t>(i)] = 1;
                    changed = true;
                    break;
                }
            }
        }
    }

    // Non-target states visited from start before the first hit.
    std::vector<char> visited(static_cast<std::size_t>(states), 0);
    std::vector<std::int64_t> frontier{start};
    std::vector<std::int64_t> transient;
    visited[static_cast<std::size_t>(start)] = 1;
    while (!frontier.empty()) {
        const std::int64_t i = frontier.back();
        frontier.pop_back();
        if (!reaches[static_cast<std::size_t>(i)])
            throw SingularSystem("target is not reached almost surely from state " +
                                 std::to_string(start));
        transient.push_back(i);
        for (std::int64_t j = 0; j < states; ++j) {
            if (P(i, j) > 0.0 && !is_target[static_cast<std::size_t>(j)] &&
                !visited[static_cast<std::size_t>(j)]) {
                visited[static_cast<std::size_t>(j)] = 1;
                frontier.push_back(j);
            }
        }
    }

    // (I - Q) h = 1 on the transient states.
    const auto m = static_cast<Eigen::Index>(transient.size());
    Eigen::MatrixXd A(m, m);
    for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index c = 0; c < m; ++c)
            A(r, c) = (r == c ? 1.0 : 0.0) - P(transient[static_cast<std::size_t>(r)],
                                               transient[static_cast<std::size_t>(c)]);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd h = lu.solve(ones);
    if (m > kDirectSolveLimit) h += lu.solve(ones - A * h);
    if (!h.allFinite()) throw SingularSystem("hitting-time system is singular");

    for (Eigen::Index r = 0; r < m; ++r)
        if (transient[static_cast<std::size_t>(r)] == start) return h(r);
    return h(0);
}

double quasi_stationary_band_mass(const BiasChain& chain, std::int64_t lo, std::int64_t hi,
                                  const StateDistribution& dist0, std::int64_t rounds) {
    if (lo > hi) return 0.0;
    if (lo < 0 || hi > chain.n()) throw InvalidArgument("band outside the state space");
    const StateDistribution dist = evolve(dist0, chain, rounds);
    return dist.weights().segment(lo, hi - lo + 1).sum();
}

std::pair<std::int64_t, std::int64_t> states_for_bias_band(std::int64_t n, double bias_lo,
                                                           double bias_hi) {
    const double nd = static_cast<double>(n);
    auto lo = static_cast<std::int64_t>(std::ceil((nd + bias_lo) / 2.0));
    auto hi = static_cast<std::int64_t>(std::floor((nd + bias_hi) / 2.0));
    lo = std::max<std::int64_t>(lo, 0);
    hi = std::min<std::int64_t>(hi, n);
    return {lo, hi};
}

double total_variation(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
    if (a.size() != b.size()) throw DimensionMismatch("TV between vectors of different sizes");
    return 0.5 * (a - b).cwiseAbs().sum();
}

void write_chain_csv(const BiasChain& chain, std::ostream& out) {
    out << "from,to,prob\n";
    char buf[64];
    for (std::int64_t i = 0; i <= chain.n(); ++i) {
        for (std::int64_t j = 0; j <= chain.n(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", chain.prob(i, j));
            out << i << ',' << j << ',' << buf << '\n';
        }
    }
}

}  // namespace noisy_majority
