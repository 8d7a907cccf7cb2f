#pragma once

/**
 * @file scenario.hpp
 * @brief Scenario and species-table configuration files.
 *
 * Configs are JSON with // comments allowed. Units are fixed: um, s, uM,
 * rad/s. Every field is validated before any command runs, and failures
 * name the offending field.
 */

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcdist/channel.hpp"
#include "mcdist/design.hpp"
#include "mcdist/timedomain.hpp"

namespace mcdist {

using json = nlohmann::json;

/// A config field is missing, mistyped or violates its constraint.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& msg)
        : std::runtime_error("config field '" + field + "': " + msg), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

namespace config {

inline std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

inline const json& section(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ConfigError(join(path, key), "missing");
    }
    const json& s = j.at(key);
    if (!s.is_object()) {
        throw ConfigError(join(path, key), "must be an object");
    }
    return s;
}

inline std::optional<double> optional_number(const json& j, const std::string& path, const std::string& key) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    const json& v = j.at(key);
    if (!v.is_number()) {
        throw ConfigError(join(path, key), "must be a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw ConfigError(join(path, key), "must be finite");
    }
    return d;
}

inline double number(const json& j, const std::string& path, const std::string& key) {
    auto v = optional_number(j, path, key);
    if (!v) {
        throw ConfigError(join(path, key), "missing");
    }
    return *v;
}

inline double positive(const json& j, const std::string& path, const std::string& key) {
    const double v = number(j, path, key);
    if (v <= 0.0) {
        throw ConfigError(join(path, key), "must be > 0, got " + std::to_string(v));
    }
    return v;
}

inline double number_or(const json& j, const std::string& path, const std::string& key, double fallback) {
    return optional_number(j, path, key).value_or(fallback);
}

inline std::size_t count_or(const json& j, const std::string& path, const std::string& key,
                            std::size_t fallback, std::size_t minimum) {
    if (!j.contains(key)) {
        return fallback;
    }
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(minimum)) {
        throw ConfigError(join(path, key), "must be an integer >= " + std::to_string(minimum));
    }
    return v.get<std::size_t>();
}

inline json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("<file>", "cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str(), nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("parse error: ") + e.what());
    }
}

inline DiffusionChannel parse_channel(const json& root) {
    const json& s = section(root, "", "channel");
    const double mu = positive(s, "channel", "mu");
    const double x_r = number(s, "channel", "x_r");
    if (x_r < 0.0) {
        throw ConfigError("channel.x_r", "must be >= 0");
    }
    return {mu, x_r};
}

inline ReceptionSystem parse_reception(const json& root) {
    const json& s = section(root, "", "reception");
    return {positive(s, "reception", "k_f"), positive(s, "reception", "k_r"), positive(s, "reception", "r")};
}

inline FrequencyBand parse_band(const json& root) {
    const json& s = section(root, "", "band");
    const double w1 = positive(s, "band", "omega1");
    const double w2 = positive(s, "band", "omega2");
    if (w2 <= w1) {
        throw ConfigError("band.omega2", "must be > band.omega1");
    }
    return {w1, w2};
}

}  // namespace config

/// Channel budget, either absolute (q0 dB, r0) or as multiples of the
/// reception-only indices.
struct Thresholds {
    std::optional<double> q0;
    std::optional<double> r0;
    std::optional<double> q_factor;
    std::optional<double> r_factor;

    std::pair<double, double> resolve(const ReceptionSystem& rs, const FrequencyBand& band) const {
        const double q = q0 ? *q0 : *q_factor * q_reception(rs, band);
        const double r = r0 ? *r0 : *r_factor * r_reception(rs, band);
        return {q, r};
    }
};

struct SimulationSettings {
    SquareWaveInput input;
    double threshold = 0.09;
    double periods = 3.0;
    std::size_t steps_per_period = 4000;
    std::optional<int> harmonics;  ///< default: every n with n w1 <= band w2
    std::optional<double> dx;
    std::optional<double> dt;
    std::optional<double> length;
};

struct GridAxis {
    double min = 1.0;
    double max = 100.0;
    std::size_t count = 100;
    bool log = false;

    std::vector<double> values() const {
        if (count == 1) return {min};
        if (log) return log_grid(min, max, count);
        std::vector<double> v(count);
        for (std::size_t i = 0; i < count; ++i) {
            v[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
        }
        v.back() = max;
        return v;
    }
};

struct SweepSettings {
    double lambda = 1.0;
    GridAxis omega1p;
    GridAxis omega2p;
};

struct Scenario {
    std::string name = "scenario";
    DiffusionChannel channel{83.0, 0.0};
    ReceptionSystem reception{1e-3, 4e-3, 4.0};
    FrequencyBand band{5e-4, 0.4};
    std::optional<Thresholds> thresholds;
    std::optional<SimulationSettings> simulation;
    std::optional<SweepSettings> sweep;
};

namespace config {

inline Thresholds parse_thresholds(const json& s) {
    const std::string p = "thresholds";
    Thresholds t;
    t.q0 = optional_number(s, p, "q0");
    t.r0 = optional_number(s, p, "r0");
    t.q_factor = optional_number(s, p, "q_factor");
    t.r_factor = optional_number(s, p, "r_factor");
    if (!t.q0 == !t.q_factor) {
        throw ConfigError(p + ".q0", "give exactly one of q0 or q_factor");
    }
    if (!t.r0 == !t.r_factor) {
        throw ConfigError(p + ".r0", "give exactly one of r0 or r_factor");
    }
    for (const auto& [key, v] : {std::pair{"q0", t.q0}, {"r0", t.r0}, {"q_factor", t.q_factor}, {"r_factor", t.r_factor}}) {
        if (v && *v <= 0.0) {
            throw ConfigError(p + "." + key, "must be > 0");
        }
    }
    return t;
}

inline SimulationSettings parse_simulation(const json& s, const FrequencyBand& band) {
    const std::string p = "simulation";
    SimulationSettings sim;
    sim.input.amplitude = number_or(s, p, "amplitude", 0.1);
    sim.input.fundamental = number_or(s, p, "fundamental", band.omega1());
    sim.input.duty = number_or(s, p, "duty", 0.5);
    sim.input.offset = number_or(s, p, "offset", 0.0);
    if (sim.input.amplitude <= 0.0) throw ConfigError(p + ".amplitude", "must be > 0");
    if (sim.input.fundamental <= 0.0) throw ConfigError(p + ".fundamental", "must be > 0");
    if (!(sim.input.duty > 0.0 && sim.input.duty < 1.0)) throw ConfigError(p + ".duty", "must be in (0,1)");
    sim.threshold = number_or(s, p, "threshold", 0.09);
    sim.periods = number_or(s, p, "periods", 3.0);
    if (sim.periods < 1.0) throw ConfigError(p + ".periods", "must be >= 1");
    sim.steps_per_period = count_or(s, p, "steps_per_period", 4000, 8);
    if (s.contains("harmonics")) {
        sim.harmonics = static_cast<int>(count_or(s, p, "harmonics", 1, 1));
    }
    if (s.contains("fdm")) {
        const json& f = section(s, p, "fdm");
        const std::string fp = p + ".fdm";
        sim.dx = optional_number(f, fp, "dx");
        sim.dt = optional_number(f, fp, "dt");
        sim.length = optional_number(f, fp, "length");
        for (const auto& [key, v] : {std::pair{"dx", sim.dx}, {"dt", sim.dt}, {"length", sim.length}}) {
            if (v && *v <= 0.0) throw ConfigError(fp + "." + key, "must be > 0");
        }
    }
    return sim;
}

inline GridAxis parse_axis(const json& s, const std::string& path) {
    GridAxis a;
    a.min = positive(s, path, "min");
    a.max = positive(s, path, "max");
    if (a.max < a.min) throw ConfigError(path + ".max", "must be >= min");
    a.count = count_or(s, path, "count", 100, 1);
    if (s.contains("spacing")) {
        const json& sp = s.at("spacing");
        if (!sp.is_string() || (sp != "log" && sp != "linear")) {
            throw ConfigError(path + ".spacing", "must be \"log\" or \"linear\"");
        }
        a.log = sp == "log";
    }
    return a;
}

inline SweepSettings parse_sweep(const json& s) {
    SweepSettings sw;
    sw.lambda = number_or(s, "sweep", "lambda", 1.0);
    if (sw.lambda < 0.0) throw ConfigError("sweep.lambda", "must be >= 0");
    sw.omega1p = parse_axis(section(s, "sweep", "omega1p"), "sweep.omega1p");
    sw.omega2p = parse_axis(section(s, "sweep", "omega2p"), "sweep.omega2p");
    return sw;
}

}  // namespace config

inline Scenario parse_scenario(const json& root) {
    if (!root.is_object()) {
        throw ConfigError("<root>", "must be an object");
    }
    Scenario sc;
    if (root.contains("name")) {
        if (!root.at("name").is_string()) throw ConfigError("name", "must be a string");
        sc.name = root.at("name").get<std::string>();
    }
    sc.channel = config::parse_channel(root);
    sc.reception = config::parse_reception(root);
    sc.band = config::parse_band(root);
    if (root.contains("thresholds")) {
        sc.thresholds = config::parse_thresholds(config::section(root, "", "thresholds"));
    }
    if (root.contains("simulation")) {
        sc.simulation = config::parse_simulation(config::section(root, "", "simulation"), sc.band);
    }
    if (root.contains("sweep")) {
        sc.sweep = config::parse_sweep(config::section(root, "", "sweep"));
    }
    return sc;
}

inline Scenario load_scenario(const std::string& path) { return parse_scenario(config::read_file(path)); }

// ----------------------------------------------------------------------------
// Species table
// ----------------------------------------------------------------------------

struct SpeciesRow {
    std::string name;
    std::optional<double> mu;
    std::optional<double> x_r;  ///< absent when the distance is not determined
    double decade_width = 10.0;
    double q_frac = 0.1;
    double r_frac = 0.1;
};

struct TableConfig {
    ReceptionSystem reception{1e-3, 4e-3, 4.0};
    std::vector<SpeciesRow> rows;
    CleanBandOptions options;
};

inline TableConfig parse_table(const json& root) {
    if (!root.is_object()) throw ConfigError("<root>", "must be an object");
    TableConfig tc;
    tc.reception = config::parse_reception(root);
    if (!root.contains("species") || !root.at("species").is_array() || root.at("species").empty()) {
        throw ConfigError("species", "must be a non-empty array");
    }
    if (root.contains("search")) {
        const json& s = config::section(root, "", "search");
        tc.options.search_lo = config::number_or(s, "search", "omega_min", tc.options.search_lo);
        tc.options.search_hi = config::number_or(s, "search", "omega_max", tc.options.search_hi);
        tc.options.rel_tol = config::number_or(s, "search", "rel_tol", tc.options.rel_tol);
        if (!(tc.options.search_lo > 0.0 && tc.options.search_hi > tc.options.search_lo)) {
            throw ConfigError("search.omega_max", "need 0 < omega_min < omega_max");
        }
        if (!(tc.options.rel_tol > 0.0)) throw ConfigError("search.rel_tol", "must be > 0");
    }
    const json& arr = root.at("species");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = "species[" + std::to_string(i) + "]";
        const json& e = arr[i];
        if (!e.is_object()) throw ConfigError(p, "must be an object");
        SpeciesRow row;
        if (!e.contains("name") || !e.at("name").is_string()) throw ConfigError(p + ".name", "missing");
        row.name = e.at("name").get<std::string>();
        row.mu = config::optional_number(e, p, "mu");
        row.x_r = config::optional_number(e, p, "x_r");
        if (row.mu && *row.mu <= 0.0) throw ConfigError(p + ".mu", "must be > 0");
        if (row.x_r && *row.x_r < 0.0) throw ConfigError(p + ".x_r", "must be >= 0");
        row.decade_width = config::number_or(e, p, "decade_width", 10.0);
        row.q_frac = config::number_or(e, p, "q_frac", 0.1);
        row.r_frac = config::number_or(e, p, "r_frac", 0.1);
        if (row.decade_width <= 1.0) throw ConfigError(p + ".decade_width", "must be > 1");
        if (!(row.q_frac > 0.0 && row.q_frac < 1.0)) throw ConfigError(p + ".q_frac", "must be in (0,1)");
        if (!(row.r_frac > 0.0 && row.r_frac < 1.0)) throw ConfigError(p + ".r_frac", "must be in (0,1)");
        tc.rows.push_back(std::move(row));
    }
    return tc;
}

inline TableConfig load_table(const std::string& path) { return parse_table(config::read_file(path)); }

}  // namespace mcdist
