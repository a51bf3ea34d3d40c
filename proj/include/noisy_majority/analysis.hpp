#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "noisy_majority/dynamics.hpp"

namespace noisy_majority {

// Noise level separating majority consensus from noise-dominated behaviour.
inline constexpr double kCriticalNoise = 1.0 / 3.0;

struct DriftPrediction {
    double expected_next_bias = 0.0;
    std::optional<double> equilibrium_bias;
    double threshold = kCriticalNoise;
};

// Event boundaries used by the trial detectors.
struct EventLevels {
    double symmetry_break_level = 0.0;  // gamma * sqrt(n ln n)
    double noise_collapse_level = 0.0;  // sqrt(n) / eps^2
    double bounded_band = 0.0;          // gamma * sqrt(n ln n)
};

// E[s_t | s_{t-1} = s] for 3-Majority with noise p:
//   s (1 - p) / 2 * (3 - (s / n)^2 (1 - p)^2)
// Defined for any real s so it can be probed off the lattice.
double expected_bias(double s, std::int64_t n, NoiseParam noise);

// Positive fixed point of expected_bias; absent when p >= 1/3.
std::optional<double> equilibrium_bias(std::int64_t n, NoiseParam noise);

DriftPrediction predict_drift(double s, std::int64_t n, NoiseParam noise);

// True when eps lies inside the hypotheses of the majority-victory result:
// 0 < eps < 1/3 and eps^2 <= (1 - 3p) / 2 (requires p < 1/3).
bool majority_epsilon_admissible(NoiseParam noise, double epsilon);

// Hypotheses of the noise-victory result (p > 1/3):
// 0 < eps < min{1/4, 1 - p, (3p - 1) / 2}.
bool noise_epsilon_admissible(NoiseParam noise, double epsilon);

// ((1 - eps) s_eq, (1 + eps) s_eq). Throws InvalidEpsilon outside the hypotheses.
std::pair<double, double> metastable_interval(std::int64_t n, NoiseParam noise, double epsilon);

EventLevels theorem_thresholds(double n, double gamma, double epsilon);

}  // namespace noisy_majority
