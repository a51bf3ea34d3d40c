// Command-line front end: step | experiment | sweep | oracle | verify.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "noisy_majority/config.hpp"
#include "noisy_majority/errors.hpp"
#include "noisy_majority/harness.hpp"
#include "noisy_majority/oracle.hpp"
#include "noisy_majority/output.hpp"
#include "noisy_majority/verify.hpp"

namespace fs = std::filesystem;
using namespace noisy_majority;

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kRuntime = 2, kVerifyFailed = 3 };

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::string format = "csv";
    unsigned threads = 0;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

struct OracleOptions {
    std::int64_t n = 10;
    double p = 0.2;
    std::string dynamics = "three_majority";
    std::int64_t start = 5;
    std::int64_t rounds = 0;
    std::optional<std::int64_t> target_lo;
    std::optional<std::int64_t> target_hi;
    bool export_chain = false;
};

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig load_config(const GlobalOptions& g) {
    if (g.config_path.empty()) throw ValidationError("--config is required for this command");
    const std::string text = read_file(g.config_path);
    ExperimentConfig cfg = parse_config(text);
    if (g.seed) cfg.seed = *g.seed;
    return cfg;
}

class OutputDir {
public:
    explicit OutputDir(const std::string& dir) : root_(dir) { fs::create_directories(root_); }

    template <class Writer>
    void write(const std::string& name, Writer&& writer) {
        std::ofstream out(root_ / name, std::ios::binary);
        if (!out) throw Error("cannot write " + (root_ / name).string());
        writer(out);
        if (!out) throw Error("failed writing " + (root_ / name).string());
        written_.push_back(name);
    }

    const std::vector<std::string>& written() const { return written_; }

private:
    fs::path root_;
    std::vector<std::string> written_;
};

void finish(OutputDir& out, RunManifest manifest, std::chrono::steady_clock::time_point start,
            const GlobalOptions& g) {
    manifest.finished_utc = utc_now();
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest.threads = resolve_threads(g.threads);
    manifest.outputs = out.written();
    out.write("manifest.json", [&](std::ostream& os) { write_manifest_json(manifest, os); });
    if (!g.quiet)
        for (const auto& f : out.written()) std::cout << "wrote " << (fs::path(g.out_dir) / f).string() << '\n';
}

int run_step(const GlobalOptions& g) {
    const auto t0 = std::chrono::steady_clock::now();
    RunManifest manifest{.command = "step", .started_utc = utc_now()};
    ExperimentConfig cfg = load_config(g);
    cfg.record_mode = RecordMode::FullTrajectory;
    manifest.config_yaml = serialize_config(cfg);
    if (cfg.p_grid.empty()) throw ValidationError("p_grid is empty");
    validate_config(cfg);

    const TrialRecord rec = run_trial(cfg, 0, 0);
    OutputDir out(g.out_dir);
    out.write("trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(rec, os); });
    out.write("trajectory.gp", [&](std::ostream& os) {
        os << trajectory_plot_script({"trajectory.csv", "trajectory.png", cfg.n, cfg.p_grid[0],
                                      cfg.gamma, "bias trajectory, p = " + format_number(cfg.p_grid[0])});
    });
    if (!g.quiet) {
        std::cout << "p = " << format_number(rec.p) << ", s0 = " << rec.start_bias
                  << ", final bias = " << rec.trajectory->back() << '\n';
    }
    finish(out, manifest, t0, g);
    return kOk;
}

int run_experiment_cmd(const GlobalOptions& g) {
    const auto t0 = std::chrono::steady_clock::now();
    RunManifest manifest{.command = "experiment", .started_utc = utc_now()};
    const ExperimentConfig cfg = load_config(g);
    manifest.config_yaml = serialize_config(cfg);

    const auto records = run_trials(cfg, g.threads);
    const ExperimentSummary summary = summarize(cfg, records);

    OutputDir out(g.out_dir);
    out.write("summary.csv", [&](std::ostream& os) { write_summary_csv(summary, os); });
    if (g.format == "json")
        out.write("summary.json", [&](std::ostream& os) { write_summary_json(summary, os); });
    out.write("trials.csv", [&](std::ostream& os) { write_records_csv(records, os); });
    out.write("summary.gp", [&](std::ostream& os) {
        os << phase_plot_script({"summary.csv", "summary.png", 11, "final-quarter mean |s|/n"});
    });
    if (cfg.record_mode == RecordMode::FullTrajectory && !records.empty())
        out.write("trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(records.front(), os); });
    if (!g.quiet) write_summary_csv(summary, std::cout);
    finish(out, manifest, t0, g);
    return kOk;
}

int run_sweep(const GlobalOptions& g) {
    const auto t0 = std::chrono::steady_clock::now();
    RunManifest manifest{.command = "sweep", .started_utc = utc_now()};
    const ExperimentConfig cfg = load_config(g);
    manifest.config_yaml = serialize_config(cfg);

    const auto rows = phase_diagram(cfg, g.threads);
    OutputDir out(g.out_dir);
    out.write("phase.csv", [&](std::ostream& os) { write_phase_csv(rows, os); });
    out.write("phase.gp", [&](std::ostream& os) {
        os << phase_plot_script({"phase.csv", "phase.png", 2, "phase diagram, n = " + std::to_string(cfg.n)});
    });
    if (!g.quiet) write_phase_csv(rows, std::cout);
    finish(out, manifest, t0, g);
    return kOk;
}

int run_oracle(const GlobalOptions& g, const OracleOptions& o) {
    const auto t0 = std::chrono::steady_clock::now();
    RunManifest manifest{.command = "oracle", .started_utc = utc_now()};
    const ChainDynamics dynamics =
        o.dynamics == "two_choices" ? ChainDynamics::TwoChoices : ChainDynamics::ThreeMajority;
    if (o.dynamics != "two_choices" && o.dynamics != "three_majority")
        throw ValidationError("oracle --dynamics must be three_majority or two_choices");
    std::ostringstream echo;
    echo << "n: " << o.n << "\np: " << format_number(o.p) << "\ndynamics: " << o.dynamics
         << "\nstart: " << o.start << "\nrounds: " << o.rounds << '\n';
    manifest.config_yaml = echo.str();

    const BiasChain chain = build_chain(o.n, NoiseParam(o.p), dynamics);
    OutputDir out(g.out_dir);
    if (o.export_chain) out.write("chain.csv", [&](std::ostream& os) { write_chain_csv(chain, os); });

    const auto dist = evolve(StateDistribution::point_mass(o.n, o.start), chain, o.rounds);
    out.write("distribution.csv", [&](std::ostream& os) {
        os << "beta,prob\n";
        for (std::int64_t b = 0; b <= o.n; ++b) os << b << ',' << format_number(dist[b]) << '\n';
    });
    if (!g.quiet) {
        std::cout << "one-step mean bias from b = " << o.start << ": "
                  << format_number(one_step_mean_bias(chain, o.start)) << '\n';
    }
    if (o.target_lo || o.target_hi) {
        const std::int64_t lo = o.target_lo.value_or(0);
        const std::int64_t hi = o.target_hi.value_or(o.n);
        std::vector<std::int64_t> target;
        for (std::int64_t b = lo; b <= hi; ++b) target.push_back(b);
        const double h = expected_hitting_time(chain, o.start, target);
        out.write("hitting_time.csv", [&](std::ostream& os) {
            os << "start,target_lo,target_hi,expected_rounds\n"
               << o.start << ',' << lo << ',' << hi << ',' << format_number(h) << '\n';
        });
        if (!g.quiet) std::cout << "expected hitting time: " << format_number(h) << '\n';
    }
    finish(out, manifest, t0, g);
    return kOk;
}

int run_verify(const GlobalOptions& g, std::int64_t samples) {
    VerifyOptions options;
    options.seed = g.seed.value_or(1);
    options.samples = samples;
    options.threads = g.threads;
    bool ok = true;
    for (const auto& check : run_verify_suite(options)) {
        ok = ok && check.passed;
        std::cout << (check.passed ? "PASS  " : "FAIL  ") << check.name << "  (" << check.detail
                  << ")\n";
    }
    return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"3-Majority dynamics with uniform communication noise: simulation and exact analysis"};
    app.require_subcommand(1);

    GlobalOptions g;
    if (const char* env = std::getenv("NOISY_MAJORITY_THREADS")) {
        try {
            g.threads = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            std::cerr << "ignoring invalid NOISY_MAJORITY_THREADS='" << env << "'\n";
        }
    }
    auto add_globals = [&](CLI::App* cmd) {
        cmd->add_option("--config", g.config_path, "YAML experiment config");
        cmd->add_option("--out-dir", g.out_dir, "output directory");
        cmd->add_option("--format", g.format, "summary format")->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--threads", g.threads, "worker threads (0 = auto)");
        cmd->add_option("--seed", g.seed, "override the config seed");
        cmd->add_flag("--quiet", g.quiet, "suppress console output");
    };

    auto* step = app.add_subcommand("step", "single-trial trajectory");
    auto* experiment = app.add_subcommand("experiment", "run every trial in the config");
    auto* sweep = app.add_subcommand("sweep", "phase diagram over p_grid");
    auto* oracle = app.add_subcommand("oracle", "exact chain queries for small n");
    auto* verify = app.add_subcommand("verify", "exact-identity and oracle-agreement checks");
    for (auto* cmd : {step, experiment, sweep, oracle, verify}) add_globals(cmd);

    OracleOptions o;
    oracle->add_option("--n", o.n, "population size")->required();
    oracle->add_option("--p", o.p, "noise probability")->required();
    oracle->add_option("--dynamics", o.dynamics, "three_majority | two_choices");
    oracle->add_option("--start", o.start, "starting beta count")->required();
    oracle->add_option("--rounds", o.rounds, "rounds to evolve the start distribution");
    oracle->add_option("--target-lo", o.target_lo, "lowest beta count of the hitting target");
    oracle->add_option("--target-hi", o.target_hi, "highest beta count of the hitting target");
    oracle->add_flag("--export-chain", o.export_chain, "write chain.csv (from,to,prob)");

    std::int64_t verify_samples = 100000;
    verify->add_option("--samples", verify_samples, "simulated trials per oracle comparison");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*step) return run_step(g);
        if (*experiment) return run_experiment_cmd(g);
        if (*sweep) return run_sweep(g);
        if (*oracle) return run_oracle(g, o);
        if (*verify) return run_verify(g, verify_samples);
    } catch (const ParseError& e) {
        std::cerr << "config parse error: " << e.what() << '\n';
        return kValidation;
    } catch (const ValidationError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kValidation;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kValidation;
    } catch (const InvalidEpsilon& e) {
        std::cerr << "invalid epsilon: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kOk;
}
