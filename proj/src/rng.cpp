#include "noisy_majority/rng.hpp"

#include <array>
#include <boost/random/binomial_distribution.hpp>

namespace noisy_majority {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream_id) {
    const std::array<std::uint32_t, 4> words{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(seeded_engine(seed, stream_id)) {}

double RngStream::uniform() {
    // 53 random mantissa bits; the std distributions are implementation-defined.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::int64_t RngStream::below(std::int64_t bound) {
    const auto range = static_cast<std::uint64_t>(bound);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::int64_t>(x % range);
}

std::int64_t RngStream::binomial(std::int64_t trials, double prob) {
    if (trials <= 0 || prob <= 0.0) return 0;
    if (prob >= 1.0) return trials;
    boost::random::binomial_distribution<std::int64_t, double> dist(trials, prob);
    return dist(engine_);
}

}  // namespace noisy_majority
