#include "noisy_majority/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "noisy_majority/errors.hpp"

namespace noisy_majority {

double expected_bias(double s, std::int64_t n, NoiseParam noise) {
    const double r = 1.0 - noise.value();
    const double x = s / static_cast<double>(n);
    return s * r / 2.0 * (3.0 - x * x * r * r);
}

std::optional<double> equilibrium_bias(std::int64_t n, NoiseParam noise) {
    const double p = noise.value();
    const double gap = 1.0 - 3.0 * p;
    if (gap <= 0.0) return std::nullopt;
    return static_cast<double>(n) / (1.0 - p) * std::sqrt(gap / (1.0 - p));
}

DriftPrediction predict_drift(double s, std::int64_t n, NoiseParam noise) {
    return DriftPrediction{expected_bias(s, n, noise), equilibrium_bias(n, noise), kCriticalNoise};
}

bool majority_epsilon_admissible(NoiseParam noise, double epsilon) {
    const double p = noise.value();
    return p < kCriticalNoise && epsilon > 0.0 && epsilon < 1.0 / 3.0 &&
           epsilon * epsilon <= (1.0 - 3.0 * p) / 2.0;
}

bool noise_epsilon_admissible(NoiseParam noise, double epsilon) {
    const double p = noise.value();
    return p > kCriticalNoise && epsilon > 0.0 &&
           epsilon < std::min({0.25, 1.0 - p, (3.0 * p - 1.0) / 2.0});
}

std::pair<double, double> metastable_interval(std::int64_t n, NoiseParam noise, double epsilon) {
    if (!majority_epsilon_admissible(noise, epsilon))
        throw InvalidEpsilon("epsilon = " + std::to_string(epsilon) +
                             " violates eps < 1/3 and eps^2 <= (1 - 3p)/2 at p = " +
                             std::to_string(noise.value()));
    const double s_eq = *equilibrium_bias(n, noise);
    return {(1.0 - epsilon) * s_eq, (1.0 + epsilon) * s_eq};
}

EventLevels theorem_thresholds(double n, double gamma, double epsilon) {
    if (n < 2.0) throw InvalidArgument("event levels need n >= 2");
    const double wide = gamma * std::sqrt(n * std::log(n));
    return EventLevels{wide, std::sqrt(n) / (epsilon * epsilon), wide};
}

}  // namespace noisy_majority
