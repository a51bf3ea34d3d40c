#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "noisy_majority/dynamics.hpp"
#include "noisy_majority/rng.hpp"

namespace noisy_majority {

enum class Dynamics { ThreeMajority, TwoChoices, UndecidedState };
enum class RecordMode { EventsOnly, FullTrajectory };

struct SweepSettings {
    std::int64_t warmup = 0;
    std::int64_t horizon = 2000;
    std::optional<std::int64_t> s0;  // nullopt: start from s = n

    friend bool operator==(const SweepSettings&, const SweepSettings&) = default;
};

struct ExperimentConfig {
    std::int64_t n = 0;
    std::vector<double> p_grid;
    Dynamics dynamics = Dynamics::ThreeMajority;
    std::optional<std::int64_t> s0;  // nullopt: symmetric start, b = n / 2
    std::int64_t trials = 1;
    std::int64_t t_max = 1;
    double gamma = 1.0;
    double epsilon = 0.05;
    std::uint64_t seed = 0;
    RecordMode record_mode = RecordMode::EventsOnly;
    // Rounds after an event over which residence is measured; 0 means up to t_max.
    std::int64_t metastability_window = 0;
    UndecidedNoise undecided_noise = UndecidedNoise::AllSymbols;
    SweepSettings sweep;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// ceil(40 ln n): the default hitting-time horizon.
std::int64_t default_t_max(std::int64_t n);

// Throws ValidationError naming the violated constraint.
void validate_config(const ExperimentConfig& cfg);

std::int64_t start_bias(const ExperimentConfig& cfg);

// Stream id owned by trial (p_index, trial_index).
std::uint64_t stream_for(std::int64_t p_index, std::int64_t trials, std::int64_t trial_index);

struct TrialRecord {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    double p = 0.0;
    std::int64_t start_bias = 0;
    std::int64_t last_round = 0;

    std::optional<std::int64_t> first_hit_metastable;
    int metastable_sign = 0;
    std::optional<std::int64_t> first_hit_symmetry_break;
    std::optional<std::int64_t> first_hit_collapse;

    std::vector<std::int64_t> majority_switch_rounds;
    std::vector<std::int64_t> zero_rounds;

    // Residence in the metastable band over (first_hit_metastable, window end].
    std::optional<std::int64_t> band_exit_round;
    std::int64_t band_window_rounds = 0;
    std::int64_t band_inside_rounds = 0;
    double band_window_mean_bias = 0.0;  // signed towards the band that was hit

    // Behaviour over (first_hit_collapse, window end].
    std::int64_t collapse_window_rounds = 0;
    std::int64_t switches_after_collapse = 0;
    std::int64_t max_abs_bias_after_collapse = 0;

    double final_quarter_mean_abs_bias_over_n = 0.0;

    std::optional<std::vector<std::int64_t>> trajectory;  // bias at rounds 0..last_round

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct HittingStats {
    double fraction = 0.0;
    double mean = 0.0;    // NaN when no trial hit
    double median = 0.0;  // NaN when no trial hit
    double p10 = 0.0;
    double p90 = 0.0;
};

struct PointSummary {
    double p = 0.0;
    std::int64_t trials = 0;
    HittingStats metastable;
    HittingStats symmetry_break;
    HittingStats collapse;
    double mean_band_residence_rounds = 0.0;  // NaN when no trial hit the band
    double band_residence_frac = 0.0;         // NaN when no trial hit the band
    std::int64_t switch_count = 0;
    double switch_rate = 0.0;  // majority switches per simulated round
    double mean_abs_bias_over_n = 0.0;
};

struct ExperimentSummary {
    std::vector<PointSummary> points;
};

// Bias process of one trial, stepped with aggregate sampling.
class BiasProcess {
public:
    BiasProcess(Dynamics dynamics, std::int64_t n, std::int64_t bias, NoiseParam noise,
                UndecidedNoise undecided_noise = UndecidedNoise::AllSymbols);

    std::int64_t bias() const noexcept;
    void step(RngStream& rng);

private:
    Dynamics dynamics_;
    NoiseParam noise_;
    UndecidedNoise undecided_noise_;
    Configuration binary_;
    TernaryConfiguration ternary_;
};

// True iff the majority flips between two consecutive biases.
bool detect_majority_switch(std::int64_t prev_bias, std::int64_t next_bias);

// Counts flips through zero against the last nonzero sign, so a path
// +2, 0, -2 counts exactly one switch.
class MajorityTracker {
public:
    explicit MajorityTracker(std::int64_t initial_bias);
    // Feeds the next bias; true when it completes a switch.
    bool observe(std::int64_t bias);

private:
    int last_sign_;
};

TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t p_index, std::int64_t trial_index);

// Records ordered by (p_index, trial_index), independent of thread count.
std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg, unsigned threads = 0);

ExperimentSummary summarize(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records);

ExperimentSummary run_experiment(const ExperimentConfig& cfg, unsigned threads = 0);

struct PhaseRow {
    double p = 0.0;
    double mean_abs_bias_over_n = 0.0;
    double switch_rate = 0.0;
    double band_residence_frac = 0.0;  // NaN where no band exists
};

struct PhaseOptions {
    Dynamics dynamics = Dynamics::ThreeMajority;
    std::optional<std::int64_t> s0;  // defaults to n (all beta)
    double epsilon = 0.05;
    UndecidedNoise undecided_noise = UndecidedNoise::AllSymbols;
    unsigned threads = 0;
};

// Per p: run `trials` trials for `horizon` rounds and average over rounds
// [warmup, horizon].
std::vector<PhaseRow> phase_diagram(std::int64_t n, const std::vector<double>& p_grid,
                                    std::int64_t warmup, std::int64_t horizon,
                                    std::int64_t trials, std::uint64_t seed,
                                    const PhaseOptions& options = {});

std::vector<PhaseRow> phase_diagram(const ExperimentConfig& cfg, unsigned threads = 0);

unsigned resolve_threads(unsigned requested);

}  // namespace noisy_majority
