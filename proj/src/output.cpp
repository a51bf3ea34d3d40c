#include "noisy_majority/output.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

#include "noisy_majority/analysis.hpp"
#include "noisy_majority/config.hpp"
#include "noisy_majority/errors.hpp"

namespace noisy_majority {

const std::vector<std::string> kSummaryColumns = {
    "p",           "frac_metastable_hit", "median_tau1", "mean_tau1",
    "frac_symmetry_break", "median_tau2", "frac_collapse", "median_tau3",
    "switch_rate", "band_residence_frac", "mean_abs_bias_over_n"};

namespace {

std::vector<double> summary_row(const PointSummary& pt) {
    return {pt.p,
            pt.metastable.fraction,
            pt.metastable.median,
            pt.metastable.mean,
            pt.symmetry_break.fraction,
            pt.symmetry_break.median,
            pt.collapse.fraction,
            pt.collapse.median,
            pt.switch_rate,
            pt.band_residence_frac,
            pt.mean_abs_bias_over_n};
}

std::string optional_round(const std::optional<std::int64_t>& v) {
    return v ? std::to_string(*v) : std::string();
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

void write_summary_csv(const ExperimentSummary& summary, std::ostream& out) {
    for (std::size_t i = 0; i < kSummaryColumns.size(); ++i)
        out << (i ? "," : "") << kSummaryColumns[i];
    out << '\n';
    for (const auto& pt : summary.points) {
        const auto row = summary_row(pt);
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
}

void write_summary_json(const ExperimentSummary& summary, std::ostream& out) {
    // Each value goes through the same 9-digit formatting as the CSV.
    nlohmann::ordered_json points = nlohmann::ordered_json::array();
    for (const auto& pt : summary.points) {
        const auto row = summary_row(pt);
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (std::isnan(row[i]))
                obj[kSummaryColumns[i]] = nullptr;
            else
                obj[kSummaryColumns[i]] = std::stod(format_number(row[i]));
        }
        points.push_back(std::move(obj));
    }
    nlohmann::ordered_json doc;
    doc["points"] = std::move(points);
    out << doc.dump(2) << '\n';
}

void write_summary(const ExperimentSummary& summary, OutputFormat format, std::ostream& out) {
    if (format == OutputFormat::CSV)
        write_summary_csv(summary, out);
    else
        write_summary_json(summary, out);
}

void write_trajectory_csv(const TrialRecord& record, std::ostream& out) {
    if (!record.trajectory)
        throw MissingTrajectory("trial record was produced without full_trajectory recording");
    out << "round,bias\n";
    for (std::size_t t = 0; t < record.trajectory->size(); ++t)
        out << t << ',' << (*record.trajectory)[t] << '\n';
}

void write_records_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
    out << "p,stream_id,start_bias,tau1,tau2,tau3,switches,band_exit_round,"
           "band_window_mean_bias,switches_after_collapse,max_abs_bias_after_collapse,"
           "final_quarter_mean_abs_bias_over_n\n";
    for (const auto& r : records) {
        out << format_number(r.p) << ',' << r.stream_id << ',' << r.start_bias << ','
            << optional_round(r.first_hit_metastable) << ','
            << optional_round(r.first_hit_symmetry_break) << ','
            << optional_round(r.first_hit_collapse) << ',' << r.majority_switch_rounds.size() << ','
            << optional_round(r.band_exit_round) << ','
            << (r.band_window_rounds > 0 ? format_number(r.band_window_mean_bias) : "") << ','
            << r.switches_after_collapse << ',' << r.max_abs_bias_after_collapse << ','
            << format_number(r.final_quarter_mean_abs_bias_over_n) << '\n';
    }
}

void write_phase_csv(const std::vector<PhaseRow>& rows, std::ostream& out) {
    out << "p,mean_abs_bias_over_n,switch_rate,band_residence_frac\n";
    for (const auto& r : rows)
        out << format_number(r.p) << ',' << format_number(r.mean_abs_bias_over_n) << ','
            << format_number(r.switch_rate) << ',' << format_number(r.band_residence_frac) << '\n';
}

std::string phase_plot_script(const PhasePlot& plot) {
    std::string s;
    s += "# gnuplot script: mean |s|/n against noise p\n";
    s += "set datafile separator ','\n";
    s += "set terminal pngcairo size 900,600\n";
    s += "set output '" + plot.output_file + "'\n";
    s += "set title '" + plot.title + "'\n";
    s += "set xlabel 'noise probability p'\n";
    s += "set ylabel 'mean |s| / n'\n";
    s += "set key top right\n";
    s += "threshold = 1.0/3.0\n";
    s += "set arrow from threshold, graph 0 to threshold, graph 1 nohead dashtype 2\n";
    s += "s_eq(p) = (p < threshold) ? sqrt((1 - 3*p) / (1 - p)) / (1 - p) : 0\n";
    s += "set xrange [0:*]\n";
    s += "set yrange [0:1.05]\n";
    s += "plot '" + plot.data_file + "' using 1:" + std::to_string(plot.column) +
         " skip 1 with linespoints title 'simulated', \\\n";
    s += "     s_eq(x) with lines dashtype 3 title 's_{eq}/n'\n";
    return s;
}

std::string trajectory_plot_script(const TrajectoryPlot& plot) {
    const double n = static_cast<double>(plot.n);
    const auto s_eq = equilibrium_bias(plot.n, NoiseParam(plot.p));
    const double wide = plot.gamma * std::sqrt(n * std::log(n));

    std::string s;
    s += "# gnuplot script: bias against round\n";
    s += "set datafile separator ','\n";
    s += "set terminal pngcairo size 900,600\n";
    s += "set output '" + plot.output_file + "'\n";
    s += "set title '" + plot.title + "'\n";
    s += "set xlabel 'round'\n";
    s += "set ylabel 'bias s'\n";
    s += "set key outside right\n";
    s += "sym_break = " + format_number(wide) + "\n";
    std::string extra = ", \\\n     sym_break with lines dashtype 2 title 'gamma sqrt(n ln n)'"
                        ", \\\n     -sym_break with lines dashtype 2 notitle";
    if (s_eq) {
        s += "s_eq = " + format_number(*s_eq) + "\n";
        extra += ", \\\n     s_eq with lines dashtype 3 title 's_{eq}'"
                 ", \\\n     -s_eq with lines dashtype 3 notitle";
    }
    s += "plot '" + plot.data_file + "' using 1:2 skip 1 with lines title 'bias'" + extra + "\n";
    return s;
}

void write_manifest_json(const RunManifest& manifest, std::ostream& out) {
    nlohmann::ordered_json doc;
    doc["version"] = manifest.version;
    doc["command"] = manifest.command;
    doc["config"] = manifest.config_yaml;
    doc["started_utc"] = manifest.started_utc;
    doc["finished_utc"] = manifest.finished_utc;
    doc["wall_seconds"] = manifest.wall_seconds;
    doc["threads"] = manifest.threads;
    doc["outputs"] = manifest.outputs;
    out << doc.dump(2) << '\n';
}

}  // namespace noisy_majority
