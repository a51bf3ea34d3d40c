#include "noisy_majority/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include "noisy_majority/analysis.hpp"
#include "noisy_majority/errors.hpp"

namespace noisy_majority {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int sign_of(std::int64_t v) { return (v > 0) - (v < 0); }

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    }
}

// Linear-interpolation quantile of sorted data.
double quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return kNaN;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

HittingStats hitting_stats(std::vector<double> times, std::int64_t trials) {
    HittingStats h;
    h.fraction = static_cast<double>(times.size()) / static_cast<double>(trials);
    std::sort(times.begin(), times.end());
    if (times.empty()) {
        h.mean = h.median = h.p10 = h.p90 = kNaN;
        return h;
    }
    double sum = 0.0;
    for (double t : times) sum += t;
    h.mean = sum / static_cast<double>(times.size());
    h.median = quantile(times, 0.5);
    h.p10 = quantile(times, 0.1);
    h.p90 = quantile(times, 0.9);
    return h;
}

struct Band {
    double lo = 0.0;
    double hi = 0.0;
};

std::optional<Band> band_for(Dynamics dynamics, std::int64_t n, NoiseParam noise, double epsilon) {
    if (dynamics != Dynamics::ThreeMajority) return std::nullopt;
    const auto s_eq = equilibrium_bias(n, noise);
    if (!s_eq) return std::nullopt;
    return Band{(1.0 - epsilon) * *s_eq, (1.0 + epsilon) * *s_eq};
}

bool inside(const Band& band, double signed_bias) {
    return signed_bias >= band.lo && signed_bias <= band.hi;
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

std::int64_t default_t_max(std::int64_t n) {
    return static_cast<std::int64_t>(std::ceil(40.0 * std::log(static_cast<double>(n))));
}

void validate_config(const ExperimentConfig& cfg) {
    auto fail = [](const std::string& what) { throw ValidationError(what); };
    if (cfg.n < 2) fail("n must be at least 2");
    if (cfg.trials < 1) fail("trials must be >= 1");
    if (cfg.t_max < 1) fail("t_max must be >= 1");
    if (!(cfg.gamma > 0.0)) fail("gamma must be > 0");
    if (!(cfg.epsilon > 0.0)) fail("epsilon must be > 0");
    if (cfg.metastability_window < 0) fail("metastability_window must be >= 0");
    if (cfg.sweep.warmup < 0 || cfg.sweep.warmup >= cfg.sweep.horizon)
        fail("sweep.warmup must satisfy 0 <= warmup < horizon");
    if (cfg.sweep.s0 && (*cfg.sweep.s0 < -cfg.n || *cfg.sweep.s0 > cfg.n ||
                         (*cfg.sweep.s0 + cfg.n) % 2 != 0))
        fail("sweep.s0 must satisfy |s0| <= n with s0 + n even");
    if (cfg.s0) {
        if (*cfg.s0 < -cfg.n || *cfg.s0 > cfg.n) fail("|s0| must not exceed n");
        if ((*cfg.s0 + cfg.n) % 2 != 0) fail("s0 + n must be even (bias parity)");
    } else if (cfg.n % 2 != 0) {
        fail("symmetric start needs even n");
    }
    for (double p : cfg.p_grid) {
        if (!(p >= 0.0 && p < 1.0)) fail("noise p = " + std::to_string(p) + " outside [0, 1)");
        if (cfg.dynamics != Dynamics::ThreeMajority) continue;
        const NoiseParam noise(p);
        if (p < kCriticalNoise && !majority_epsilon_admissible(noise, cfg.epsilon))
            fail("epsilon = " + std::to_string(cfg.epsilon) + " at p = " + std::to_string(p) +
                 " violates eps < 1/3 and eps^2 <= (1-3p)/2");
        if (p > kCriticalNoise && !noise_epsilon_admissible(noise, cfg.epsilon))
            fail("epsilon = " + std::to_string(cfg.epsilon) + " at p = " + std::to_string(p) +
                 " violates eps < min{1/4, 1-p, (3p-1)/2}");
    }
}

std::int64_t start_bias(const ExperimentConfig& cfg) { return cfg.s0.value_or(0); }

std::uint64_t stream_for(std::int64_t p_index, std::int64_t trials, std::int64_t trial_index) {
    return static_cast<std::uint64_t>(p_index * trials + trial_index);
}

BiasProcess::BiasProcess(Dynamics dynamics, std::int64_t n, std::int64_t bias, NoiseParam noise,
                         UndecidedNoise undecided_noise)
    : dynamics_(dynamics),
      noise_(noise),
      undecided_noise_(undecided_noise),
      binary_(Configuration::from_bias(n, bias)),
      ternary_(n, binary_.beta(), 0) {}

std::int64_t BiasProcess::bias() const noexcept {
    return dynamics_ == Dynamics::UndecidedState ? ternary_.bias() : binary_.bias();
}

void BiasProcess::step(RngStream& rng) {
    switch (dynamics_) {
        case Dynamics::ThreeMajority:
            binary_ = step_aggregate_3maj(binary_, noise_, rng);
            break;
        case Dynamics::TwoChoices:
            binary_ = step_2choices(binary_, noise_, rng);
            break;
        case Dynamics::UndecidedState:
            ternary_ = step_undecided(ternary_, noise_, rng, undecided_noise_);
            break;
    }
}

bool detect_majority_switch(std::int64_t prev_bias, std::int64_t next_bias) {
    return sign_of(prev_bias) * sign_of(next_bias) < 0;
}

MajorityTracker::MajorityTracker(std::int64_t initial_bias) : last_sign_(sign_of(initial_bias)) {}

bool MajorityTracker::observe(std::int64_t bias) {
    const int s = sign_of(bias);
    if (s == 0) return false;
    const bool switched = last_sign_ != 0 && s != last_sign_;
    last_sign_ = s;
    return switched;
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t p_index, std::int64_t trial_index) {
    const double p = cfg.p_grid.at(p_index);
    const NoiseParam noise(p);
    const std::int64_t n = cfg.n;
    const double nd = static_cast<double>(n);
    const std::int64_t s0 = start_bias(cfg);

    TrialRecord rec;
    rec.seed = cfg.seed;
    rec.stream_id = stream_for(static_cast<std::int64_t>(p_index), cfg.trials, trial_index);
    rec.p = p;
    rec.start_bias = s0;
    rec.last_round = cfg.t_max;

    const EventLevels levels = theorem_thresholds(nd, cfg.gamma, cfg.epsilon);
    const std::optional<Band> band = band_for(cfg.dynamics, n, noise, cfg.epsilon);
    // A symmetric or zero start may settle on either sign.
    const int wanted_sign = cfg.s0 ? sign_of(*cfg.s0) : 0;

    auto window_end = [&](std::int64_t event) {
        return cfg.metastability_window > 0 ? std::min(event + cfg.metastability_window, cfg.t_max)
                                            : cfg.t_max;
    };

    RngStream rng(cfg.seed, rec.stream_id);
    BiasProcess process(cfg.dynamics, n, s0, noise, cfg.undecided_noise);
    MajorityTracker tracker(s0);

    if (cfg.record_mode == RecordMode::FullTrajectory) {
        rec.trajectory.emplace();
        rec.trajectory->reserve(static_cast<std::size_t>(cfg.t_max + 1));
    }

    const std::int64_t quarter_start = cfg.t_max - cfg.t_max / 4;
    double quarter_sum = 0.0;
    std::int64_t quarter_rounds = 0;
    double band_sum = 0.0;

    for (std::int64_t t = 0; t <= cfg.t_max; ++t) {
        if (t > 0) process.step(rng);
        const std::int64_t s = process.bias();
        const double abs_s = static_cast<double>(std::llabs(s));
        if (rec.trajectory) rec.trajectory->push_back(s);

        if (t > 0) {
            const bool switched = tracker.observe(s);
            if (s == 0) rec.zero_rounds.push_back(t);
            if (switched) rec.majority_switch_rounds.push_back(t);
            if (rec.first_hit_collapse && t <= window_end(*rec.first_hit_collapse)) {
                ++rec.collapse_window_rounds;
                rec.max_abs_bias_after_collapse =
                    std::max<std::int64_t>(rec.max_abs_bias_after_collapse, std::llabs(s));
                if (switched) ++rec.switches_after_collapse;
            }
        }

        if (band) {
            if (!rec.first_hit_metastable) {
                for (int sign : {1, -1}) {
                    if (wanted_sign != 0 && sign != wanted_sign) continue;
                    if (inside(*band, static_cast<double>(sign * s))) {
                        rec.first_hit_metastable = t;
                        rec.metastable_sign = sign;
                        break;
                    }
                }
            } else {
                const double signed_s = static_cast<double>(rec.metastable_sign * s);
                const bool in_band = inside(*band, signed_s);
                if (!in_band && !rec.band_exit_round) rec.band_exit_round = t;
                if (t <= window_end(*rec.first_hit_metastable)) {
                    ++rec.band_window_rounds;
                    if (in_band) ++rec.band_inside_rounds;
                    band_sum += signed_s;
                }
            }
        }
        if (!rec.first_hit_symmetry_break && abs_s >= levels.symmetry_break_level)
            rec.first_hit_symmetry_break = t;
        if (!rec.first_hit_collapse && abs_s <= levels.noise_collapse_level) rec.first_hit_collapse = t;

        if (t >= quarter_start) {
            quarter_sum += abs_s / nd;
            ++quarter_rounds;
        }
    }

    if (rec.band_window_rounds > 0)
        rec.band_window_mean_bias = band_sum / static_cast<double>(rec.band_window_rounds);
    rec.final_quarter_mean_abs_bias_over_n = quarter_sum / static_cast<double>(quarter_rounds);
    return rec;
}

std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg, unsigned threads) {
    validate_config(cfg);
    const std::size_t per_p = static_cast<std::size_t>(cfg.trials);
    std::vector<TrialRecord> records(cfg.p_grid.size() * per_p);
    parallel_for(records.size(), threads, [&](std::size_t i) {
        records[i] = run_trial(cfg, i / per_p, static_cast<std::int64_t>(i % per_p));
    });
    return records;
}

ExperimentSummary summarize(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records) {
    const std::size_t per_p = static_cast<std::size_t>(cfg.trials);
    if (records.size() != cfg.p_grid.size() * per_p)
        throw InvalidArgument("record count does not match trials x |p_grid|");

    ExperimentSummary summary;
    for (std::size_t pi = 0; pi < cfg.p_grid.size(); ++pi) {
        PointSummary pt;
        pt.p = cfg.p_grid[pi];
        pt.trials = cfg.trials;

        std::vector<double> tau1, tau2, tau3;
        double residence_sum = 0.0;
        std::int64_t window_rounds = 0, inside_rounds = 0, rounds = 0;
        double abs_bias_sum = 0.0;
        for (std::size_t k = 0; k < per_p; ++k) {
            const TrialRecord& r = records[pi * per_p + k];
            if (r.first_hit_metastable) {
                tau1.push_back(static_cast<double>(*r.first_hit_metastable));
                const std::int64_t stay_end = r.band_exit_round.value_or(r.last_round + 1);
                residence_sum += static_cast<double>(stay_end - *r.first_hit_metastable);
            }
            if (r.first_hit_symmetry_break)
                tau2.push_back(static_cast<double>(*r.first_hit_symmetry_break));
            if (r.first_hit_collapse) tau3.push_back(static_cast<double>(*r.first_hit_collapse));
            window_rounds += r.band_window_rounds;
            inside_rounds += r.band_inside_rounds;
            pt.switch_count += static_cast<std::int64_t>(r.majority_switch_rounds.size());
            rounds += r.last_round;
            abs_bias_sum += r.final_quarter_mean_abs_bias_over_n;
        }
        pt.mean_band_residence_rounds =
            tau1.empty() ? kNaN : residence_sum / static_cast<double>(tau1.size());
        pt.band_residence_frac =
            window_rounds > 0 ? static_cast<double>(inside_rounds) / static_cast<double>(window_rounds)
                              : kNaN;
        pt.metastable = hitting_stats(std::move(tau1), cfg.trials);
        pt.symmetry_break = hitting_stats(std::move(tau2), cfg.trials);
        pt.collapse = hitting_stats(std::move(tau3), cfg.trials);
        pt.switch_rate =
            rounds > 0 ? static_cast<double>(pt.switch_count) / static_cast<double>(rounds) : 0.0;
        pt.mean_abs_bias_over_n = abs_bias_sum / static_cast<double>(cfg.trials);
        summary.points.push_back(pt);
    }
    return summary;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg, unsigned threads) {
    return summarize(cfg, run_trials(cfg, threads));
}

std::vector<PhaseRow> phase_diagram(std::int64_t n, const std::vector<double>& p_grid,
                                    std::int64_t warmup, std::int64_t horizon,
                                    std::int64_t trials, std::uint64_t seed,
                                    const PhaseOptions& options) {
    if (warmup < 0 || warmup >= horizon) throw InvalidArgument("phase diagram needs warmup < horizon");
    if (trials < 1) throw InvalidArgument("phase diagram needs trials >= 1");
    const std::int64_t s0 = options.s0.value_or(n);

    struct Tally {
        double abs_bias_sum = 0.0;
        std::int64_t rounds = 0;
        std::int64_t switches = 0;
        std::int64_t inside = 0;
    };
    const auto per_p = static_cast<std::size_t>(trials);
    std::vector<Tally> tallies(p_grid.size() * per_p);

    parallel_for(tallies.size(), options.threads, [&](std::size_t i) {
        const std::size_t pi = i / per_p;
        const auto trial = static_cast<std::int64_t>(i % per_p);
        const NoiseParam noise(p_grid[pi]);
        const auto band = band_for(options.dynamics, n, noise, options.epsilon);
        RngStream rng(seed, stream_for(static_cast<std::int64_t>(pi), trials, trial));
        BiasProcess process(options.dynamics, n, s0, noise, options.undecided_noise);
        MajorityTracker tracker(s0);
        Tally& tally = tallies[i];
        for (std::int64_t t = 0; t <= horizon; ++t) {
            if (t > 0) process.step(rng);
            const std::int64_t s = process.bias();
            const bool switched = t > 0 && tracker.observe(s);
            if (t < warmup) continue;
            tally.abs_bias_sum += static_cast<double>(std::llabs(s)) / static_cast<double>(n);
            ++tally.rounds;
            if (switched && t > warmup) ++tally.switches;
            if (band && inside(*band, static_cast<double>(std::llabs(s)))) ++tally.inside;
        }
    });

    std::vector<PhaseRow> rows;
    for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
        Tally total;
        for (std::size_t k = 0; k < per_p; ++k) {
            const Tally& t = tallies[pi * per_p + k];
            total.abs_bias_sum += t.abs_bias_sum;
            total.rounds += t.rounds;
            total.switches += t.switches;
            total.inside += t.inside;
        }
        const bool has_band = band_for(options.dynamics, n, NoiseParam(p_grid[pi]), options.epsilon).has_value();
        const double rounds = static_cast<double>(total.rounds);
        rows.push_back(PhaseRow{p_grid[pi], total.abs_bias_sum / rounds,
                                static_cast<double>(total.switches) / rounds,
                                has_band ? static_cast<double>(total.inside) / rounds : kNaN});
    }
    return rows;
}

std::vector<PhaseRow> phase_diagram(const ExperimentConfig& cfg, unsigned threads) {
    PhaseOptions options;
    options.dynamics = cfg.dynamics;
    options.s0 = cfg.sweep.s0;
    options.epsilon = cfg.epsilon;
    options.undecided_noise = cfg.undecided_noise;
    options.threads = threads;
    return phase_diagram(cfg.n, cfg.p_grid, cfg.sweep.warmup, cfg.sweep.horizon, cfg.trials,
                         cfg.seed, options);
}

}  // namespace noisy_majority
