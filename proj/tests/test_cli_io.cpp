#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "noisy_majority/config.hpp"
#include "noisy_majority/errors.hpp"
#include "noisy_majority/output.hpp"

using namespace noisy_majority;

namespace {

const char* kMinimal = "n: 1000\np_grid: [0.2, 0.5]\ntrials: 10\nseed: 7\n";

ExperimentSummary sample_summary() {
    ExperimentConfig cfg;
    cfg.n = 400;
    cfg.p_grid = {0.1, 0.5};
    cfg.trials = 3;
    cfg.t_max = 60;
    cfg.seed = 5;
    cfg.epsilon = 0.2;
    cfg.s0 = 400;
    return run_experiment(cfg, 1);
}

}  // namespace

TEST_CASE("minimal document gets documented defaults") {
    const auto cfg = parse_config(kMinimal);
    CHECK(cfg.n == 1000);
    CHECK(cfg.p_grid == std::vector<double>{0.2, 0.5});
    CHECK(cfg.trials == 10);
    CHECK(cfg.seed == 7);
    CHECK(cfg.dynamics == Dynamics::ThreeMajority);
    CHECK_FALSE(cfg.s0.has_value());
    CHECK(cfg.t_max == 277);  // ceil(40 ln 1000)
    CHECK(cfg.gamma == 1.0);
    CHECK(cfg.epsilon == 0.05);
    CHECK(cfg.record_mode == RecordMode::EventsOnly);
    CHECK(cfg.metastability_window == 0);
    CHECK(cfg.undecided_noise == UndecidedNoise::AllSymbols);
    CHECK(cfg.sweep.warmup == 277);
    CHECK(cfg.sweep.horizon == 2000);
    CHECK(cfg.sweep.s0 == 1000);
}

TEST_CASE("full document") {
    const auto cfg = parse_config(
        "n: 5000\n"
        "p_grid: [1/3, 0.6]\n"
        "trials: 4\n"
        "seed: 18446744073709551615\n"
        "dynamics: undecided_state\n"
        "s0: -40\n"
        "t_max: 12\n"
        "gamma: 2\n"
        "epsilon: 0.1\n"
        "record_mode: full_trajectory\n"
        "metastability_window: 5\n"
        "undecided_noise: opinions_only\n"
        "sweep:\n"
        "  warmup: 3\n"
        "  horizon: 9\n"
        "  s0: 0\n");
    CHECK(cfg.p_grid[0] == 1.0 / 3.0);
    CHECK(cfg.seed == 18446744073709551615ull);
    CHECK(cfg.dynamics == Dynamics::UndecidedState);
    CHECK(*cfg.s0 == -40);
    CHECK(cfg.record_mode == RecordMode::FullTrajectory);
    CHECK(cfg.undecided_noise == UndecidedNoise::OpinionsOnly);
    CHECK(cfg.sweep.horizon == 9);
    CHECK(*cfg.sweep.s0 == 0);
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_config("n: 10\np_grid: [0.2]\ntrials: 1\nseed: 1\ncolour: red\n"),
                         doctest::Contains("line 5"), ParseError);
    CHECK_THROWS_WITH_AS(parse_config("n: ten\np_grid: [0.2]\ntrials: 1\nseed: 1\n"),
                         doctest::Contains("line 1"), ParseError);
    CHECK_THROWS_WITH_AS(parse_config("n: 10\np_grid: [0.2]\ntrials: 1\nseed: 1\ndynamics: voter\n"),
                         doctest::Contains("three_majority"), ParseError);
    CHECK_THROWS_AS(parse_config("n: 10\np_grid: [0.2]\ntrials: 1\n"), ParseError);
    CHECK_THROWS_AS(parse_config("n: [1\n"), ParseError);
    CHECK_THROWS_AS(parse_config("- 1\n- 2\n"), ParseError);
    CHECK_THROWS_AS(parse_config("n: 10\np_grid: 0.2\ntrials: 1\nseed: 1\n"), ParseError);
}

TEST_CASE("validation errors name the violated constraint") {
    CHECK_THROWS_WITH_AS(parse_config("n: 1000\np_grid: [0.3]\ntrials: 1\nseed: 1\nepsilon: 0.3\n"),
                         doctest::Contains("eps^2 <= (1-3p)/2"), ValidationError);
    CHECK_THROWS_AS(parse_config("n: 1001\np_grid: [0.2]\ntrials: 1\nseed: 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("n: 1000\np_grid: [1.2]\ntrials: 1\nseed: 1\n"), ValidationError);
}

TEST_CASE("config round trip") {
    const char* docs[] = {
        kMinimal,
        "n: 999\np_grid: [0.1, 1/3, 0.123456789012345]\ntrials: 2\nseed: 3\ns0: 99\n"
        "dynamics: two_choices\nepsilon: 0.01\n",
        "n: 64\np_grid: []\ntrials: 1\nseed: 0\nrecord_mode: full_trajectory\nsweep:\n  horizon: 50\n  warmup: 1\n"};
    for (const char* doc : docs) {
        const auto once = parse_config(doc);
        const auto twice = parse_config(serialize_config(once));
        CHECK(once == twice);
        CHECK(serialize_config(twice) == serialize_config(once));
    }
}

TEST_CASE("summary CSV schema") {
    std::ostringstream empty;
    write_summary_csv(ExperimentSummary{}, empty);
    CHECK(empty.str() ==
          "p,frac_metastable_hit,median_tau1,mean_tau1,frac_symmetry_break,median_tau2,"
          "frac_collapse,median_tau3,switch_rate,band_residence_frac,mean_abs_bias_over_n\n");

    ExperimentConfig cfg;
    cfg.n = 200;
    cfg.p_grid = {0.2};
    cfg.trials = 1;
    cfg.t_max = 40;
    cfg.seed = 1;
    cfg.s0 = 200;
    const auto one = run_experiment(cfg, 1);
    std::ostringstream out;
    write_summary_csv(one, out);
    std::istringstream lines(out.str());
    std::string header, row, extra;
    std::getline(lines, header);
    std::getline(lines, row);
    CHECK_FALSE(std::getline(lines, extra));
    std::vector<std::string> cells;
    std::stringstream cs(row);
    for (std::string c; std::getline(cs, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 11);
    for (int i : {1, 4, 6}) CHECK((cells[i] == "0" || cells[i] == "1"));
}

TEST_CASE("CSV and JSON carry identical numbers") {
    const auto summary = sample_summary();
    std::ostringstream csv, js;
    write_summary_csv(summary, csv);
    write_summary_json(summary, js);
    const auto doc = nlohmann::json::parse(js.str());
    REQUIRE(doc["points"].size() == summary.points.size());

    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    for (const auto& point : doc["points"]) {
        std::getline(lines, line);
        std::stringstream cs(line);
        std::size_t col = 0;
        for (std::string cell; std::getline(cs, cell, ','); ++col) {
            const auto& v = point[kSummaryColumns[col]];
            if (cell == "nan")
                CHECK(v.is_null());
            else
                CHECK(v.get<double>() == std::stod(cell));
        }
        CHECK(col == kSummaryColumns.size());
    }
}

TEST_CASE("number formatting uses 9 significant digits") {
    CHECK(format_number(1.0 / 3.0) == "0.333333333");
    CHECK(format_number(88388.34764831843) == "88388.3476");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(12.0) == "12");
}

TEST_CASE("trajectory CSV") {
    TrialRecord rec;
    rec.start_bias = 8;
    rec.trajectory = std::vector<std::int64_t>{8};
    std::ostringstream single;
    write_trajectory_csv(rec, single);
    CHECK(single.str() == "round,bias\n0,8\n");

    ExperimentConfig cfg;
    cfg.n = 500;
    cfg.p_grid = {0.25};
    cfg.trials = 1;
    cfg.t_max = 30;
    cfg.seed = 11;
    cfg.record_mode = RecordMode::FullTrajectory;
    auto emit = [&] {
        std::ostringstream out;
        write_trajectory_csv(run_trial(cfg, 0, 0), out);
        return out.str();
    };
    const std::string text = emit();
    CHECK(text == emit());
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 31);

    TrialRecord bare;
    std::ostringstream sink;
    CHECK_THROWS_AS(write_trajectory_csv(bare, sink), MissingTrajectory);
}

TEST_CASE("plot scripts") {
    const auto phase = phase_plot_script({"phase.csv", "phase.png", 2, "phase"});
    CHECK(phase.find("threshold = 1.0/3.0") != std::string::npos);
    CHECK(phase.find("set arrow from threshold") != std::string::npos);
    CHECK(phase.find("'phase.csv' using 1:2") != std::string::npos);
    CHECK(phase == phase_plot_script({"phase.csv", "phase.png", 2, "phase"}));

    const auto below = trajectory_plot_script({"trajectory.csv", "t.png", 100000, 0.2, 1.0, "t"});
    CHECK(below.find("s_eq = 88388.3476") != std::string::npos);
    CHECK(below.find("sym_break = 1072.98301") != std::string::npos);
    const auto above = trajectory_plot_script({"trajectory.csv", "t.png", 100000, 0.5, 1.0, "t"});
    CHECK(above.find("s_eq") == std::string::npos);
    CHECK(above == trajectory_plot_script({"trajectory.csv", "t.png", 100000, 0.5, 1.0, "t"}));
}

TEST_CASE("manifest") {
    RunManifest m;
    m.command = "experiment";
    m.config_yaml = serialize_config(parse_config(kMinimal));
    m.outputs = {"summary.csv"};
    std::ostringstream out;
    write_manifest_json(m, out);
    const auto doc = nlohmann::json::parse(out.str());
    CHECK(doc["version"] == kVersion);
    CHECK(parse_config(doc["config"].get<std::string>()) == parse_config(kMinimal));
    CHECK(doc["outputs"][0] == "summary.csv");
}
