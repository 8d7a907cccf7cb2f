#pragma once

/**
 * @file io.hpp
 * @brief Result files: JSON documents and CSV tables.
 *
 * CSV numbers carry 9 significant digits. JSON numbers are written with the
 * shortest representation that round-trips to the same double.
 */

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcdist/design.hpp"
#include "mcdist/distortion.hpp"
#include "mcdist/scenario.hpp"
#include "mcdist/timedomain.hpp"
#include "mcdist/version.hpp"

namespace mcdist {

inline std::string csv_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path) : out_(path) {
        if (!out_) {
            throw std::runtime_error("cannot write " + path.string());
        }
    }

    void header(const std::vector<std::string>& cols) { row_strings(cols); }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            out_ << (i ? "," : "") << csv_number(values[i]);
        }
        out_ << '\n';
    }

    void row_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out_ << (i ? "," : "") << cells[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

inline void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

/// Tool identity plus a generation timestamp. The timestamp is the only
/// field that varies between identical runs.
inline json metadata() {
    char stamp[32];
    const std::time_t now = std::time(nullptr);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return {{"tool", "mcdist"}, {"version", kVersion}, {"generated_at", stamp}};
}

// ----------------------------------------------------------------------------
// Parameters
// ----------------------------------------------------------------------------

inline json to_json(const DiffusionChannel& ch) { return {{"mu", ch.mu()}, {"x_r", ch.x_r()}}; }

inline json to_json(const ReceptionSystem& rs) {
    return {{"k_f", rs.k_f()}, {"k_r", rs.k_r()}, {"r", rs.r()}};
}

inline json to_json(const FrequencyBand& b) { return {{"omega1", b.omega1()}, {"omega2", b.omega2()}}; }

inline json to_json(const SquareWaveInput& in) {
    return {{"amplitude", in.amplitude}, {"fundamental", in.fundamental}, {"duty", in.duty}, {"offset", in.offset}};
}

inline json to_json(const FdmConfig& c) {
    return {{"scheme", "BDF2 time, central second-order space"},
            {"dx", c.dx},
            {"dt", c.dt},
            {"length", c.length},
            {"total_time", c.total_time},
            {"sample_every", c.sample_every}};
}

/// Fully resolved scenario; re-parses with parse_scenario.
inline json to_json(const Scenario& sc) {
    json j = {{"name", sc.name},
              {"channel", to_json(sc.channel)},
              {"reception", to_json(sc.reception)},
              {"band", to_json(sc.band)}};
    if (sc.thresholds) {
        const auto [q0, r0] = sc.thresholds->resolve(sc.reception, sc.band);
        j["thresholds"] = {{"q0", q0}, {"r0", r0}};
    }
    if (sc.simulation) {
        const SimulationSettings& s = *sc.simulation;
        json sim = to_json(s.input);
        sim["threshold"] = s.threshold;
        sim["periods"] = s.periods;
        sim["steps_per_period"] = s.steps_per_period;
        if (s.harmonics) sim["harmonics"] = *s.harmonics;
        json fdm = json::object();
        if (s.dx) fdm["dx"] = *s.dx;
        if (s.dt) fdm["dt"] = *s.dt;
        if (s.length) fdm["length"] = *s.length;
        if (!fdm.empty()) sim["fdm"] = fdm;
        j["simulation"] = sim;
    }
    if (sc.sweep) {
        auto axis = [](const GridAxis& a) {
            return json{{"min", a.min}, {"max", a.max}, {"count", a.count}, {"spacing", a.log ? "log" : "linear"}};
        };
        j["sweep"] = {{"lambda", sc.sweep->lambda},
                      {"omega1p", axis(sc.sweep->omega1p)},
                      {"omega2p", axis(sc.sweep->omega2p)}};
    }
    return j;
}

// ----------------------------------------------------------------------------
// Results
// ----------------------------------------------------------------------------

inline json to_json(const DistortionReport& r) {
    return {{"band", to_json(r.band)}, {"q_g", r.q_g}, {"r_g", r.r_g}, {"q_h", r.q_h},
            {"r_h", r.r_h},            {"q_m", r.q_m}, {"r_m", r.r_m}};
}

/// Parses and validates a report: all indices >= 0 and channel totals equal
/// to the subsystem sums.
inline DistortionReport report_from_json(const json& j) {
    DistortionReport r;
    r.band = config::parse_band(j);
    auto field = [&](const char* key) {
        const double v = config::number(j, "", key);
        if (v < 0.0) throw ConfigError(key, "must be >= 0");
        return v;
    };
    r.q_g = field("q_g");
    r.r_g = field("r_g");
    r.q_h = field("q_h");
    r.r_h = field("r_h");
    r.q_m = field("q_m");
    r.r_m = field("r_m");
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); };
    if (!close(r.q_m, r.q_g + r.q_h)) throw ConfigError("q_m", "must equal q_g + q_h");
    if (!close(r.r_m, r.r_g + r.r_h)) throw ConfigError("r_m", "must equal r_g + r_h");
    return r;
}

inline json to_json(const DesignResult& d) {
    return {{"q_h", d.q_h},
            {"r_h", d.r_h},
            {"x_q", d.x_q},
            {"x_r_delay", d.x_r_delay},
            {"x_r_limit", d.x_r_limit},
            {"feasible", d.feasible},
            {"binding", to_string(d.binding)}};
}

inline json to_json(const ActivationTiming& a) {
    json j = {{"threshold", a.threshold},
              {"pulse_window", {a.pulse_window.first, a.pulse_window.second}},
              {"active_duration", a.active_duration()}};
    j["t_on"] = a.t_on ? json(*a.t_on) : json(nullptr);
    j["t_off"] = a.t_off ? json(*a.t_off) : json(nullptr);
    j["onset_delay"] = a.onset_delay() ? json(*a.onset_delay()) : json(nullptr);
    return j;
}

/// CSV columns: t [s], v [uM], u_xr [uM], c [uM].
inline void write_trace_csv(const std::filesystem::path& path, const SimulationTrace& tr) {
    CsvWriter w(path);
    w.header({"t_s", "v_uM", "u_xr_uM", "c_uM"});
    for (std::size_t i = 0; i < tr.size(); ++i) {
        w.row({tr.times[i], tr.input[i], tr.received[i], tr.complex_conc[i]});
    }
}

inline json trace_to_json(const SimulationTrace& tr) {
    json j = {{"route", to_string(tr.route)}, {"x_r_effective", tr.x_r},
              {"t", tr.times},             {"v", tr.input},
              {"u_xr", tr.received},       {"c", tr.complex_conc}};
    if (tr.source) j["input"] = to_json(*tr.source);
    return j;
}

}  // namespace mcdist
