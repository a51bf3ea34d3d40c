#pragma once

#include <cstdint>
#include <random>

namespace noisy_majority {

// Seeded random stream. Identical (seed, stream_id) pairs replay identical
// sequences; distinct stream ids feed distinct seed_seq inputs.
class RngStream {
public:
    using engine_type = std::mt19937_64;

    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    engine_type& engine() noexcept { return engine_; }

    // Uniform double in [0, 1).
    double uniform();
    // Uniform integer in [0, bound).
    std::int64_t below(std::int64_t bound);
    bool bernoulli(double prob) { return uniform() < prob; }
    // Exact Binomial(trials, prob) draw.
    std::int64_t binomial(std::int64_t trials, double prob);

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    engine_type engine_;
};

}  // namespace noisy_majority
