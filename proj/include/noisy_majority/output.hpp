#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "noisy_majority/harness.hpp"

namespace noisy_majority {

enum class OutputFormat { CSV, JSON };

inline constexpr const char* kVersion = "1.0.0";

// Column order of the summary CSV; the JSON mirror uses the same keys.
extern const std::vector<std::string> kSummaryColumns;

// Numbers are written with 9 significant digits; missing values are "nan"
// in CSV and null in JSON.
void write_summary_csv(const ExperimentSummary& summary, std::ostream& out);
void write_summary_json(const ExperimentSummary& summary, std::ostream& out);
void write_summary(const ExperimentSummary& summary, OutputFormat format, std::ostream& out);

// "round,bias", one row per round. Throws MissingTrajectory.
void write_trajectory_csv(const TrialRecord& record, std::ostream& out);

// One row of event times per trial.
void write_records_csv(const std::vector<TrialRecord>& records, std::ostream& out);

void write_phase_csv(const std::vector<PhaseRow>& rows, std::ostream& out);

struct PhasePlot {
    std::string data_file;    // relative path of the CSV
    std::string output_file;  // PNG name the script renders to
    int column = 2;           // 1-based column holding mean |s|/n
    std::string title;
};

struct TrajectoryPlot {
    std::string data_file;
    std::string output_file;
    std::int64_t n = 0;
    double p = 0.0;
    double gamma = 1.0;
    std::string title;
};

// Self-contained gnuplot scripts.
std::string phase_plot_script(const PhasePlot& plot);
std::string trajectory_plot_script(const TrajectoryPlot& plot);

struct RunManifest {
    std::string version = kVersion;
    std::string command;
    std::string config_yaml;
    std::string started_utc;
    std::string finished_utc;
    double wall_seconds = 0.0;
    unsigned threads = 1;
    std::vector<std::string> outputs;
};

void write_manifest_json(const RunManifest& manifest, std::ostream& out);

std::string format_number(double value);

}  // namespace noisy_majority
