#pragma once

/**
 * @file timedomain.hpp
 * @brief Time-domain responses of the reception system and the full channel
 *        to a periodic square-wave emission, by two independent routes:
 *
 *  - Fourier: steady-periodic LTI synthesis, each harmonic scaled by
 *    |G H(jnw)| and shifted by arg G H(jnw).
 *  - FDM: the diffusion PDE u_t = mu u_xx on a truncated domain [0, L] with
 *    u(0,t) = v(t), u(L,t) = 0, coupled one-way to dc/dt = k_f r u(x_r,t) - k_r c.
 *
 * Both routes start from the same SquareWaveInput, so their traces can be
 * compared sample by sample.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcdist/channel.hpp"
#include "mcdist/tridiagonal.hpp"

namespace mcdist {

/// Invalid or inconsistent solver configuration, reported before any stepping.
class ConfigurationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Periodic emission v(t): offset + amplitude for the first `duty` fraction
/// of each period, offset for the rest.
struct SquareWaveInput {
    double amplitude = 0.1;  ///< uM
    double fundamental = 5e-4;  ///< rad/s
    double duty = 0.5;
    double offset = 0.0;  ///< uM

    SquareWaveInput() = default;
    SquareWaveInput(double amplitude_, double fundamental_, double duty_ = 0.5, double offset_ = 0.0)
        : amplitude(amplitude_), fundamental(fundamental_), duty(duty_), offset(offset_) {
        validate();
    }

    void validate() const {
        detail::require(detail::finite_positive(amplitude), "SquareWaveInput: amplitude must be > 0");
        detail::require(detail::finite_positive(fundamental), "SquareWaveInput: fundamental must be > 0");
        detail::require(duty > 0.0 && duty < 1.0, "SquareWaveInput: duty must be in (0,1)");
        detail::require(std::isfinite(offset), "SquareWaveInput: offset must be finite");
    }

    double period() const { return 2.0 * kPi / fundamental; }
    double mean() const { return offset + amplitude * duty; }

    double operator()(double t) const {
        const double phase = t / period() - std::floor(t / period());
        return phase < duty ? offset + amplitude : offset;
    }

    /// Fourier coefficients of harmonic n >= 1 in a cos(nwt) + b sin(nwt).
    std::pair<double, double> harmonic(int n) const {
        const double scale = amplitude / (n * kPi);
        const double arg = 2.0 * kPi * n * duty;
        return {scale * std::sin(arg), scale * (1.0 - std::cos(arg))};
    }

    /// [start, end) of pulse k.
    std::pair<double, double> pulse_window(std::size_t k) const {
        const double start = static_cast<double>(k) * period();
        return {start, start + duty * period()};
    }
};

enum class Route { fourier, fdm };

inline const char* to_string(Route r) { return r == Route::fourier ? "fourier" : "fdm"; }

/// Uniformly sampled output of one run. `received` is u(x_r, t) and
/// `complex_conc` is c(t); `input` is the emitted v(t) as the route sees it
/// (band-limited for the Fourier route).
struct SimulationTrace {
    Route route = Route::fourier;
    std::optional<SquareWaveInput> source;
    double x_r = 0.0;
    std::vector<double> times;
    std::vector<double> input;
    std::vector<double> received;
    std::vector<double> complex_conc;

    std::size_t size() const noexcept { return times.size(); }
};

inline std::vector<double> uniform_times(double t0, double dt, std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = t0 + dt * static_cast<double>(i);
    }
    return t;
}

/// Largest harmonic index with n * fundamental <= omega_max.
inline int harmonics_within(const SquareWaveInput& in, double omega_max) {
    return std::max(1, static_cast<int>(std::floor(omega_max / in.fundamental * (1.0 + 1e-12))));
}

// ----------------------------------------------------------------------------
// Fourier synthesis
// ----------------------------------------------------------------------------

/// Steady-periodic response using harmonics 1..n_harmonics. Even harmonics
/// of a 50 % duty wave have zero coefficients and drop out.
inline SimulationTrace synthesize_fourier(const DiffusionChannel& ch, const ReceptionSystem& rs,
                                          const SquareWaveInput& in, int n_harmonics,
                                          const std::vector<double>& times) {
    in.validate();
    detail::require(n_harmonics >= 1, "synthesize_fourier: n_harmonics must be >= 1");
    detail::require(times.size() >= 2, "synthesize_fourier: need at least two samples");
    const double dt = times[1] - times[0];
    for (std::size_t i = 1; i < times.size(); ++i) {
        detail::require(std::abs(times[i] - times[i - 1] - dt) <= 1e-9 * std::max(1.0, std::abs(dt)) &&
                            dt > 0.0,
                        "synthesize_fourier: time grid must be uniform and increasing");
    }

    SimulationTrace tr;
    tr.route = Route::fourier;
    tr.source = in;
    tr.x_r = ch.x_r();
    tr.times = times;
    const std::size_t n = times.size();
    tr.input.assign(n, in.mean());
    tr.received.assign(n, in.mean());  // |G(0)| = 1
    tr.complex_conc.assign(n, in.mean() * rs.dc_gain());

    for (int k = 1; k <= n_harmonics; ++k) {
        const auto [a, b] = in.harmonic(k);
        if (std::abs(a) + std::abs(b) <= 1e-15 * in.amplitude) {
            continue;
        }
        const double w = k * in.fundamental;
        const ComplexResponse g = diffusion_response(ch, w);
        const ComplexResponse gh = g * reception_response(rs, w);
        for (std::size_t i = 0; i < n; ++i) {
            const double wt = w * times[i];
            tr.input[i] += a * std::cos(wt) + b * std::sin(wt);
            tr.received[i] += g.magnitude * (a * std::cos(wt + g.phase) + b * std::sin(wt + g.phase));
            tr.complex_conc[i] += gh.magnitude * (a * std::cos(wt + gh.phase) + b * std::sin(wt + gh.phase));
        }
    }
    return tr;
}

// ----------------------------------------------------------------------------
// Finite differences
// ----------------------------------------------------------------------------

/// Spatial step dx [um], time step dt [s], truncated domain length [um] and
/// run length [s]. Every `sample_every`-th step is recorded.
struct FdmConfig {
    double dx = 1.0;
    double dt = 1.0;
    double length = 100.0;
    double total_time = 1.0;
    std::size_t sample_every = 1;

    /// length = max(10 x_r, 5 sqrt(2 mu / fundamental)); x_r on a grid node;
    /// dx at most a tenth of the penetration depth at omega_max.
    static FdmConfig recommended(const DiffusionChannel& ch, double fundamental, double omega_max,
                                 double periods, std::size_t steps_per_period) {
        detail::require(detail::finite_positive(fundamental) && omega_max >= fundamental,
                        "FdmConfig: need 0 < fundamental <= omega_max");
        detail::require(periods > 0.0 && steps_per_period >= 8, "FdmConfig: bad run length");
        const double depth_lo = std::sqrt(2.0 * ch.mu() / fundamental);
        const double depth_hi = std::sqrt(2.0 * ch.mu() / omega_max);
        FdmConfig cfg;
        double target = depth_hi / 10.0;
        if (ch.x_r() > 0.0) {
            target = std::min(target, ch.x_r() / 20.0);
            cfg.dx = ch.x_r() / std::ceil(ch.x_r() / target);
        } else {
            cfg.dx = target;
        }
        cfg.length = std::max(10.0 * ch.x_r(), 5.0 * depth_lo);
        cfg.length = std::ceil(cfg.length / cfg.dx) * cfg.dx;
        const double period = 2.0 * kPi / fundamental;
        cfg.dt = period / static_cast<double>(steps_per_period);
        cfg.total_time = periods * period;
        return cfg;
    }
};

namespace detail {

struct FdmGrid {
    std::size_t intervals;
    std::size_t receiver_node;
    std::size_t steps;
};

inline FdmGrid check_fdm(const DiffusionChannel& ch, const FdmConfig& cfg) {
    auto fail = [](const std::string& msg) { throw ConfigurationError("simulate_fdm: " + msg); };
    if (!finite_positive(cfg.dx) || !finite_positive(cfg.dt) || !finite_positive(cfg.length) ||
        !finite_positive(cfg.total_time)) {
        fail("dx, dt, length and total_time must be finite and positive");
    }
    if (cfg.sample_every == 0) {
        fail("sample_every must be >= 1");
    }
    if (ch.x_r() >= cfg.length) {
        fail("x_r must lie inside the domain (x_r < length)");
    }
    FdmGrid g{};
    g.intervals = static_cast<std::size_t>(std::llround(cfg.length / cfg.dx));
    if (g.intervals < 2) {
        fail("domain must span at least two cells");
    }
    g.receiver_node = static_cast<std::size_t>(std::llround(ch.x_r() / cfg.dx));
    const double snapped = static_cast<double>(g.receiver_node) * cfg.dx;
    if (ch.x_r() > 0.0 && std::abs(snapped - ch.x_r()) > 1e-3 * ch.x_r()) {
        fail("dx snaps x_r to " + std::to_string(snapped) + " (error above 0.1 %)");
    }
    if (g.receiver_node >= g.intervals) {
        fail("x_r snaps onto the far boundary");
    }
    g.steps = static_cast<std::size_t>(std::llround(cfg.total_time / cfg.dt));
    if (g.steps == 0) {
        fail("total_time shorter than one step");
    }
    return g;
}

}  // namespace detail

/// Solves the PDE with second-order central differences in space and BDF2 in
/// time (backward Euler for the first step), zero initial state. The rate
/// equation is advanced exactly for piecewise-linear u(x_r, t).
inline SimulationTrace simulate_fdm(const DiffusionChannel& ch, const ReceptionSystem& rs,
                                    const std::function<double(double)>& boundary,
                                    const FdmConfig& cfg) {
    const detail::FdmGrid grid = detail::check_fdm(ch, cfg);
    const std::size_t interior = grid.intervals - 1;
    const double s = ch.mu() * cfg.dt / (cfg.dx * cfg.dx);

    const TridiagonalSolver euler(interior, -s, 1.0 + 2.0 * s, -s);
    const TridiagonalSolver bdf2(interior, -s, 1.5 + 2.0 * s, -s);

    // u[0] is the boundary node; the far node stays at zero.
    std::vector<double> u(grid.intervals + 1, 0.0);
    std::vector<double> u_prev(grid.intervals + 1, 0.0);
    std::vector<double> rhs(interior);

    const double k_r = rs.k_r();
    const double b = rs.binding_rate();
    const double decay = std::exp(-k_r * cfg.dt);
    double c = 0.0;

    SimulationTrace tr;
    tr.route = Route::fdm;
    tr.x_r = static_cast<double>(grid.receiver_node) * cfg.dx;
    const std::size_t samples = grid.steps / cfg.sample_every + 1;
    tr.times.reserve(samples);
    tr.input.reserve(samples);
    tr.received.reserve(samples);
    tr.complex_conc.reserve(samples);

    auto record = [&](double t) {
        tr.times.push_back(t);
        tr.input.push_back(boundary(t));
        tr.received.push_back(u[grid.receiver_node]);
        tr.complex_conc.push_back(c);
    };

    u[0] = boundary(0.0);
    u_prev[0] = u[0];
    record(0.0);

    for (std::size_t n = 0; n < grid.steps; ++n) {
        const double t_next = static_cast<double>(n + 1) * cfg.dt;
        const double u_r_old = u[grid.receiver_node];
        const double v_next = boundary(t_next);

        if (grid.receiver_node == 0) {
            // u(x_r, t) is the boundary itself; the interior never feeds back.
            u[0] = v_next;
        } else if (n == 0) {
            for (std::size_t i = 0; i < interior; ++i) {
                rhs[i] = u[i + 1];
            }
        } else {
            for (std::size_t i = 0; i < interior; ++i) {
                rhs[i] = 2.0 * u[i + 1] - 0.5 * u_prev[i + 1];
            }
        }
        if (grid.receiver_node != 0) {
            rhs[0] += s * v_next;
            (n == 0 ? euler : bdf2).solve(rhs);
            u_prev.swap(u);
            u[0] = v_next;
            std::copy(rhs.begin(), rhs.end(), u.begin() + 1);
            u.back() = 0.0;
        }

        // Exact update of dc/dt = b u - k_r c with u linear over the step.
        const double u_r_new = u[grid.receiver_node];
        const double slope = (u_r_new - u_r_old) / cfg.dt;
        const double particular0 = b / k_r * u_r_old - b * slope / (k_r * k_r);
        const double particular1 = b / k_r * u_r_new - b * slope / (k_r * k_r);
        c = particular1 + (c - particular0) * decay;

        if ((n + 1) % cfg.sample_every == 0) {
            record(t_next);
        }
    }
    return tr;
}

inline SimulationTrace simulate_fdm(const DiffusionChannel& ch, const ReceptionSystem& rs,
                                    const SquareWaveInput& in, const FdmConfig& cfg) {
    in.validate();
    SimulationTrace tr = simulate_fdm(ch, rs, std::function<double(double)>(in), cfg);
    tr.source = in;
    return tr;
}

// ----------------------------------------------------------------------------
// Activation timing
// ----------------------------------------------------------------------------

enum class TraceSeries { input, received, complex_conc };

inline const std::vector<double>& series_of(const SimulationTrace& tr, TraceSeries s) {
    switch (s) {
        case TraceSeries::input: return tr.input;
        case TraceSeries::received: return tr.received;
        default: return tr.complex_conc;
    }
}

/// Threshold crossings of one pulse. t_on is the first upward crossing inside
/// the pulse window; t_off is the first fall back below the threshold before
/// the next pulse starts.
struct ActivationTiming {
    double threshold = 0.0;
    std::optional<double> t_on;
    std::optional<double> t_off;
    std::pair<double, double> pulse_window{0.0, 0.0};
    double search_end = 0.0;  ///< where the t_off search stopped

    /// Delay from pulse start to activation.
    std::optional<double> onset_delay() const {
        if (!t_on) return std::nullopt;
        return *t_on - pulse_window.first;
    }

    /// How long the series stays at or above the threshold in this pulse.
    double active_duration() const {
        if (!t_on) return 0.0;
        return t_off.value_or(search_end) - *t_on;
    }
};

inline ActivationTiming activation_time(const SimulationTrace& tr, double threshold,
                                        std::size_t pulse_index,
                                        TraceSeries which = TraceSeries::complex_conc) {
    detail::require(tr.source.has_value(), "activation_time: trace has no square-wave source");
    detail::require(tr.size() >= 2, "activation_time: trace too short");
    const SquareWaveInput& in = *tr.source;
    const std::vector<double>& y = series_of(tr, which);
    const std::vector<double>& t = tr.times;

    ActivationTiming out;
    out.threshold = threshold;
    out.pulse_window = in.pulse_window(pulse_index);
    const auto [w0, w1] = out.pulse_window;
    const double slack = 1e-9 * in.period();
    detail::require(t.front() <= w0 + slack && t.back() >= w1 - slack,
                    "activation_time: trace does not cover pulse " + std::to_string(pulse_index));
    const double next_pulse = w0 + in.period();
    out.search_end = std::min(next_pulse, t.back());

    auto crossing = [&](std::size_t i) {
        // Linear interpolation between samples i-1 and i.
        const double y0 = y[i - 1];
        const double y1 = y[i];
        const double f = y1 == y0 ? 1.0 : (threshold - y0) / (y1 - y0);
        return t[i - 1] + f * (t[i] - t[i - 1]);
    };

    std::size_t i = 0;
    while (i < t.size() && t[i] < w0 - slack) ++i;
    for (; i < t.size() && t[i] < w1; ++i) {
        if (y[i] >= threshold) {
            double on = t[i];
            if (i > 0 && y[i - 1] < threshold) {
                on = std::max(w0, crossing(i));
            }
            out.t_on = on;
            break;
        }
    }
    if (!out.t_on) return out;

    for (++i; i < t.size() && t[i] <= next_pulse + slack; ++i) {
        if (y[i] < threshold) {
            out.t_off = crossing(i);
            break;
        }
    }
    return out;
}

}  // namespace mcdist
