#pragma once

/**
 * @file commands.hpp
 * @brief The batch commands behind the mcdist CLI. Each writes its result
 *        files into an output directory and returns their paths.
 *
 * Output contract (all CSVs start with a header row naming columns and units):
 *   analyze  -> report.json, curves.csv
 *   design   -> design.json
 *   sweep    -> sweep_q_g.csv, sweep_r_g.csv, sweep_q_h.csv, sweep_r_h.csv, sweep.json
 *   simulate -> trace_<system>_<route>.{csv,json}, activation.json
 *   table    -> table.csv, table.json
 */

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "mcdist/design.hpp"
#include "mcdist/distortion.hpp"
#include "mcdist/io.hpp"
#include "mcdist/scenario.hpp"
#include "mcdist/timedomain.hpp"

namespace mcdist {

namespace fs = std::filesystem;

struct CommandOptions {
    fs::path out_dir = ".";
    std::string route = "fourier";  ///< fourier | fdm | both
    std::size_t points = 200;       ///< curve samples for analyze
};

namespace detail {

inline fs::path prepare(const CommandOptions& opt, const std::string& file) {
    fs::create_directories(opt.out_dir);
    return opt.out_dir / file;
}

}  // namespace detail

inline std::vector<fs::path> cmd_analyze(const Scenario& sc, const CommandOptions& opt) {
    if (opt.points < 2) {
        throw ConfigError("points", "need at least 2 curve samples");
    }
    const DistortionReport rep = analyze(sc.channel, sc.reception, sc.band);

    json doc = {{"metadata", metadata()}, {"scenario", to_json(sc)}, {"report", to_json(rep)}};
    if (sc.thresholds) {
        const auto [q0, r0] = sc.thresholds->resolve(sc.reception, sc.band);
        doc["design"] = to_json(distance_bound(DesignSpec(q0, r0, sc.band, sc.reception, sc.channel.mu())));
    }
    const fs::path report = detail::prepare(opt, "report.json");
    write_json(report, doc);

    const fs::path curves = detail::prepare(opt, "curves.csv");
    CsvWriter w(curves);
    w.header({"omega_rad_s", "gain_G_dB", "delay_G_s", "gain_H_dB", "delay_H_s", "gain_GH_dB", "delay_GH_s"});
    for (double om : log_grid(sc.band.omega1(), sc.band.omega2(), opt.points)) {
        const double gg = diffusion_gain_db(sc.channel, om);
        const double tg = diffusion_phase_delay(sc.channel, om);
        const double gh = reception_gain_db(sc.reception, om);
        const double th = reception_phase_delay(sc.reception, om);
        w.row({om, gg, tg, gh, th, gg + gh, tg + th});
    }
    return {report, curves};
}

inline std::vector<fs::path> cmd_design(const Scenario& sc, const CommandOptions& opt) {
    if (!sc.thresholds) {
        throw ConfigError("thresholds", "required by the design command");
    }
    const auto [q0, r0] = sc.thresholds->resolve(sc.reception, sc.band);
    const DesignResult res = distance_bound(DesignSpec(q0, r0, sc.band, sc.reception, sc.channel.mu()));
    const fs::path path = detail::prepare(opt, "design.json");
    write_json(path, {{"metadata", metadata()},
                      {"scenario", to_json(sc)},
                      {"inputs", {{"q0", q0}, {"r0", r0}, {"mu", sc.channel.mu()}, {"band", to_json(sc.band)},
                                  {"reception", to_json(sc.reception)}}},
                      {"result", to_json(res)}});
    return {path};
}

inline std::vector<fs::path> cmd_sweep(const Scenario& sc, const CommandOptions& opt) {
    if (!sc.sweep) {
        throw ConfigError("sweep", "required by the sweep command");
    }
    const SweepSettings& sw = *sc.sweep;
    const std::vector<double> w1s = sw.omega1p.values();
    const std::vector<double> w2s = sw.omega2p.values();

    struct Matrix {
        const char* file;
        double (*fn)(const NormalizedBand&);
    };
    const Matrix matrices[] = {{"sweep_q_g.csv", q_diffusion_normalized},
                               {"sweep_r_g.csv", r_diffusion_normalized},
                               {"sweep_q_h.csv", q_reception_normalized},
                               {"sweep_r_h.csv", r_reception_normalized}};

    std::vector<fs::path> written;
    for (const Matrix& m : matrices) {
        const fs::path path = detail::prepare(opt, m.file);
        CsvWriter w(path);
        std::vector<std::string> head{"omega1p\\omega2p"};
        for (double w2 : w2s) head.push_back(csv_number(w2));
        w.header(head);
        for (double w1 : w1s) {
            std::vector<std::string> cells{csv_number(w1)};
            for (double w2 : w2s) {
                cells.push_back(w1 < w2 ? csv_number(m.fn(NormalizedBand(w1, w2, sw.lambda))) : "");
            }
            w.row_strings(cells);
        }
        written.push_back(path);
    }
    const fs::path meta = detail::prepare(opt, "sweep.json");
    write_json(meta, {{"metadata", metadata()},
                      {"scenario", to_json(sc)},
                      {"lambda", sw.lambda},
                      {"layout", "rows: omega1p, columns: omega2p; empty cell where omega1p >= omega2p"},
                      {"units", {{"q_g", "dB"}, {"r_g", "1"}, {"q_h", "dB"}, {"r_h", "1"}}}});
    written.push_back(meta);
    return written;
}

/// Routes, FDM configuration and harmonic count that cmd_simulate would use.
struct SimulationPlan {
    std::vector<Route> routes;
    int harmonics = 1;
    FdmConfig fdm_channel;
    FdmConfig fdm_reception;
    std::vector<double> times;
    std::size_t pulse_index = 0;
};

inline SimulationPlan plan_simulation(const Scenario& sc, const std::string& route) {
    if (!sc.simulation) {
        throw ConfigError("simulation", "required by the simulate command");
    }
    const SimulationSettings& sim = *sc.simulation;
    SimulationPlan plan;
    if (route == "fourier" || route == "both") plan.routes.push_back(Route::fourier);
    if (route == "fdm" || route == "both") plan.routes.push_back(Route::fdm);
    if (plan.routes.empty()) {
        throw ConfigError("--route", "must be fourier, fdm or both");
    }
    const SquareWaveInput& in = sim.input;
    const double omega_max = std::max(sc.band.omega2(), in.fundamental);
    plan.harmonics = sim.harmonics.value_or(harmonics_within(in, omega_max));

    auto fdm_for = [&](const DiffusionChannel& ch) {
        FdmConfig cfg = FdmConfig::recommended(ch, in.fundamental, omega_max, sim.periods, sim.steps_per_period);
        if (sim.dx) cfg.dx = *sim.dx;
        if (sim.dt) cfg.dt = *sim.dt;
        if (sim.length) cfg.length = *sim.length;
        try {
            detail::check_fdm(ch, cfg);
        } catch (const ConfigurationError& e) {
            throw ConfigError("simulation.fdm", e.what());
        }
        return cfg;
    };
    plan.fdm_channel = fdm_for(sc.channel);
    plan.fdm_reception = fdm_for(sc.channel.with_distance(0.0));

    const std::size_t n = static_cast<std::size_t>(std::llround(sim.periods * static_cast<double>(sim.steps_per_period)));
    plan.times = uniform_times(0.0, in.period() / static_cast<double>(sim.steps_per_period), n + 1);
    plan.pulse_index = static_cast<std::size_t>(std::floor(sim.periods)) - 1;
    return plan;
}

inline SimulationTrace run_route(Route route, const DiffusionChannel& ch, const ReceptionSystem& rs,
                                 const SquareWaveInput& in, const SimulationPlan& plan, const FdmConfig& cfg) {
    if (route == Route::fourier) {
        return synthesize_fourier(ch, rs, in, plan.harmonics, plan.times);
    }
    return simulate_fdm(ch, rs, in, cfg);
}

/// Largest |a - b| over common samples.
inline double linf_gap(const std::vector<double>& a, const std::vector<double>& b) {
    double gap = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        gap = std::max(gap, std::abs(a[i] - b[i]));
    }
    return gap;
}

inline std::vector<fs::path> cmd_simulate(const Scenario& sc, const CommandOptions& opt) {
    const SimulationPlan plan = plan_simulation(sc, opt.route);
    const SimulationSettings& sim = *sc.simulation;
    const SquareWaveInput& in = sim.input;
    const double plateau = (in.offset + in.amplitude) * sc.reception.dc_gain();

    std::vector<fs::path> written;
    json runs = json::array();
    json desired = nullptr;
    for (Route route : plan.routes) {
        const DiffusionChannel reception_only = sc.channel.with_distance(0.0);
        const SimulationTrace rec = run_route(route, reception_only, sc.reception, in, plan, plan.fdm_reception);
        const SimulationTrace chan = run_route(route, sc.channel, sc.reception, in, plan, plan.fdm_channel);

        if (desired.is_null()) {
            desired = to_json(activation_time(chan, sim.threshold, plan.pulse_index, TraceSeries::input));
            desired["route"] = to_string(route);
        }
        for (const auto& [system, tr] : {std::pair{"reception", &rec}, {"channel", &chan}}) {
            const std::string stem = std::string("trace_") + system + "_" + to_string(route);
            const fs::path csv = detail::prepare(opt, stem + ".csv");
            write_trace_csv(csv, *tr);
            json meta = {{"metadata", metadata()}, {"scenario", to_json(sc)}, {"system", system}};
            if (route == Route::fdm) {
                meta["fdm"] = to_json(tr == &rec ? plan.fdm_reception : plan.fdm_channel);
            } else {
                meta["harmonics"] = plan.harmonics;
            }
            meta["trace"] = trace_to_json(*tr);
            const fs::path js = detail::prepare(opt, stem + ".json");
            write_json(js, meta);
            written.push_back(csv);
            written.push_back(js);

            json run = {{"system", system}, {"route", to_string(route)}};
            run["activation"] = to_json(activation_time(*tr, sim.threshold, plan.pulse_index));
            run["half_rise"] = to_json(activation_time(*tr, 0.5 * plateau, plan.pulse_index));
            runs.push_back(run);
        }
        runs.back()["channel_vs_reception_linf"] = linf_gap(chan.complex_conc, rec.complex_conc);
        runs.back()["channel_vs_reception_linf_rel_plateau"] = linf_gap(chan.complex_conc, rec.complex_conc) / plateau;
    }

    const fs::path act = detail::prepare(opt, "activation.json");
    write_json(act, {{"metadata", metadata()},
                     {"scenario", to_json(sc)},
                     {"threshold", sim.threshold},
                     {"pulse_index", plan.pulse_index},
                     {"plateau", plateau},
                     {"desired", desired},
                     {"runs", runs}});
    written.push_back(act);
    return written;
}

struct TableRowResult {
    SpeciesRow row;
    std::optional<CleanBandResult> result;
};

inline std::vector<TableRowResult> compute_table(const TableConfig& tc) {
    std::vector<TableRowResult> out;
    for (const SpeciesRow& row : tc.rows) {
        TableRowResult r{row, std::nullopt};
        if (row.mu && row.x_r) {
            r.result = highest_clean_band(*row.mu, *row.x_r, tc.reception, row.decade_width, row.q_frac,
                                          row.r_frac, tc.options);
        }
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<fs::path> cmd_table(const TableConfig& tc, const CommandOptions& opt) {
    const std::vector<TableRowResult> rows = compute_table(tc);
    const fs::path csv = detail::prepare(opt, "table.csv");
    CsvWriter w(csv);
    w.header({"species", "mu_um2_s", "x_r_um", "decade_width", "omega1_rad_s", "omega2_rad_s", "saturated"});
    json arr = json::array();
    for (const TableRowResult& r : rows) {
        auto opt_cell = [](const std::optional<double>& v) { return v ? csv_number(*v) : std::string(); };
        std::vector<std::string> cells{r.row.name, opt_cell(r.row.mu), opt_cell(r.row.x_r),
                                       csv_number(r.row.decade_width)};
        json j = {{"species", r.row.name}};
        j["mu"] = r.row.mu ? json(*r.row.mu) : json(nullptr);
        j["x_r"] = r.row.x_r ? json(*r.row.x_r) : json(nullptr);
        j["decade_width"] = r.row.decade_width;
        j["q_frac"] = r.row.q_frac;
        j["r_frac"] = r.row.r_frac;
        if (r.result) {
            cells.push_back(csv_number(r.result->band.omega1()));
            cells.push_back(csv_number(r.result->band.omega2()));
            cells.push_back(r.result->saturated ? "1" : "0");
            j["band"] = to_json(r.result->band);
            j["saturated"] = r.result->saturated;
        } else {
            cells.insert(cells.end(), {"", "", ""});
            j["band"] = nullptr;
        }
        w.row_strings(cells);
        arr.push_back(j);
    }
    const fs::path js = detail::prepare(opt, "table.json");
    write_json(js, {{"metadata", metadata()},
                    {"reception", to_json(tc.reception)},
                    {"search", {{"omega_min", tc.options.search_lo}, {"omega_max", tc.options.search_hi},
                                {"rel_tol", tc.options.rel_tol}}},
                    {"rows", arr}});
    return {csv, js};
}

}  // namespace mcdist
