#include "noisy_majority/config.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include <yaml-cpp/yaml.h>

#include "noisy_majority/errors.hpp"

namespace noisy_majority {

namespace {

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : -1; }

[[noreturn]] void bad(const YAML::Node& node, const std::string& what) {
    throw ParseError(what, line_of(node));
}

std::string scalar(const YAML::Node& node, const std::string& key) {
    if (!node.IsScalar()) bad(node, "field '" + key + "' must be a scalar");
    return node.Scalar();
}

std::int64_t as_int(const YAML::Node& node, const std::string& key) {
    const std::string text = scalar(node, key);
    std::int64_t value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size())
        bad(node, "field '" + key + "' expects an integer, got '" + text + "'");
    return value;
}

std::uint64_t as_uint(const YAML::Node& node, const std::string& key) {
    const std::string text = scalar(node, key);
    std::uint64_t value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size())
        bad(node, "field '" + key + "' expects an unsigned integer, got '" + text + "'");
    return value;
}

double parse_real(const YAML::Node& node, const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        bad(node, "field '" + key + "' expects a number, got '" + text + "'");
    }
    if (used != text.size())
        bad(node, "field '" + key + "' expects a number, got '" + text + "'");
    return value;
}

// Decimal or a/b fraction.
double as_real(const YAML::Node& node, const std::string& key) {
    const std::string text = scalar(node, key);
    const auto slash = text.find('/');
    if (slash == std::string::npos) return parse_real(node, key, text);
    const double num = parse_real(node, key, text.substr(0, slash));
    const double den = parse_real(node, key, text.substr(slash + 1));
    if (den == 0.0) bad(node, "field '" + key + "' divides by zero");
    return num / den;
}

template <class Enum, std::size_t N>
Enum as_enum(const YAML::Node& node, const std::string& key,
             const std::pair<const char*, Enum> (&names)[N]) {
    const std::string text = scalar(node, key);
    for (const auto& [name, value] : names)
        if (text == name) return value;
    std::string allowed;
    for (const auto& [name, value] : names) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
    bad(node, "field '" + key + "' must be one of {" + allowed + "}, got '" + text + "'");
}

constexpr std::pair<const char*, Dynamics> kDynamicsNames[] = {
    {"three_majority", Dynamics::ThreeMajority},
    {"two_choices", Dynamics::TwoChoices},
    {"undecided_state", Dynamics::UndecidedState}};
constexpr std::pair<const char*, RecordMode> kRecordNames[] = {
    {"events_only", RecordMode::EventsOnly}, {"full_trajectory", RecordMode::FullTrajectory}};
constexpr std::pair<const char*, UndecidedNoise> kNoiseNames[] = {
    {"all_symbols", UndecidedNoise::AllSymbols}, {"opinions_only", UndecidedNoise::OpinionsOnly}};

template <class Enum, std::size_t N>
std::string name_of(Enum value, const std::pair<const char*, Enum> (&names)[N]) {
    for (const auto& [name, v] : names)
        if (v == value) return name;
    return "unknown";
}

void reject_unknown(const YAML::Node& map, const std::set<std::string>& known,
                    const std::string& where) {
    for (const auto& kv : map) {
        const std::string key = kv.first.as<std::string>();
        if (!known.contains(key)) bad(kv.first, "unknown field '" + where + key + "'");
    }
}

}  // namespace

std::string to_string(Dynamics d) { return name_of(d, kDynamicsNames); }
std::string to_string(RecordMode m) { return name_of(m, kRecordNames); }
std::string to_string(UndecidedNoise m) { return name_of(m, kNoiseNames); }

ExperimentConfig parse_config(std::string_view document) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(document));
    } catch (const YAML::ParserException& e) {
        throw ParseError(e.msg, e.mark.line >= 0 ? e.mark.line + 1 : -1);
    }
    if (!root.IsMap()) throw ParseError("config document must be a mapping", line_of(root));

    reject_unknown(root,
                   {"n", "p_grid", "trials", "seed", "dynamics", "s0", "t_max", "gamma", "epsilon",
                    "record_mode", "metastability_window", "undecided_noise", "sweep"},
                   "");
    for (const char* key : {"n", "p_grid", "trials", "seed"})
        if (!root[key]) throw ParseError(std::string("missing required field '") + key + "'");

    ExperimentConfig cfg;
    cfg.n = as_int(root["n"], "n");
    const YAML::Node grid = root["p_grid"];
    if (!grid.IsSequence()) bad(grid, "field 'p_grid' must be a list");
    for (const auto& item : grid) cfg.p_grid.push_back(as_real(item, "p_grid"));
    cfg.trials = as_int(root["trials"], "trials");
    cfg.seed = as_uint(root["seed"], "seed");

    if (auto node = root["dynamics"]) cfg.dynamics = as_enum(node, "dynamics", kDynamicsNames);
    if (auto node = root["s0"]) {
        if (scalar(node, "s0") == "symmetric")
            cfg.s0.reset();
        else
            cfg.s0 = as_int(node, "s0");
    }
    cfg.t_max = root["t_max"] ? as_int(root["t_max"], "t_max") : default_t_max(cfg.n);
    if (auto node = root["gamma"]) cfg.gamma = as_real(node, "gamma");
    if (auto node = root["epsilon"]) cfg.epsilon = as_real(node, "epsilon");
    if (auto node = root["record_mode"]) cfg.record_mode = as_enum(node, "record_mode", kRecordNames);
    if (auto node = root["metastability_window"])
        cfg.metastability_window = as_int(node, "metastability_window");
    if (auto node = root["undecided_noise"])
        cfg.undecided_noise = as_enum(node, "undecided_noise", kNoiseNames);

    cfg.sweep.warmup = default_t_max(cfg.n);
    cfg.sweep.horizon = std::max<std::int64_t>(2000, cfg.sweep.warmup + 1);
    cfg.sweep.s0 = cfg.n;
    if (auto sweep = root["sweep"]) {
        if (!sweep.IsMap()) bad(sweep, "field 'sweep' must be a mapping");
        reject_unknown(sweep, {"warmup", "horizon", "s0"}, "sweep.");
        if (auto node = sweep["warmup"]) cfg.sweep.warmup = as_int(node, "sweep.warmup");
        if (auto node = sweep["horizon"]) cfg.sweep.horizon = as_int(node, "sweep.horizon");
        if (auto node = sweep["s0"]) cfg.sweep.s0 = as_int(node, "sweep.s0");
    }

    validate_config(cfg);
    return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "n" << YAML::Value << cfg.n;
    out << YAML::Key << "p_grid" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double p : cfg.p_grid) out << p;
    out << YAML::EndSeq;
    out << YAML::Key << "trials" << YAML::Value << cfg.trials;
    out << YAML::Key << "seed" << YAML::Value << cfg.seed;
    out << YAML::Key << "dynamics" << YAML::Value << to_string(cfg.dynamics);
    out << YAML::Key << "s0" << YAML::Value;
    if (cfg.s0)
        out << *cfg.s0;
    else
        out << "symmetric";
    out << YAML::Key << "t_max" << YAML::Value << cfg.t_max;
    out << YAML::Key << "gamma" << YAML::Value << cfg.gamma;
    out << YAML::Key << "epsilon" << YAML::Value << cfg.epsilon;
    out << YAML::Key << "record_mode" << YAML::Value << to_string(cfg.record_mode);
    out << YAML::Key << "metastability_window" << YAML::Value << cfg.metastability_window;
    out << YAML::Key << "undecided_noise" << YAML::Value << to_string(cfg.undecided_noise);
    out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "warmup" << YAML::Value << cfg.sweep.warmup;
    out << YAML::Key << "horizon" << YAML::Value << cfg.sweep.horizon;
    out << YAML::Key << "s0" << YAML::Value << cfg.sweep.s0.value_or(cfg.n);
    out << YAML::EndMap;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace noisy_majority
