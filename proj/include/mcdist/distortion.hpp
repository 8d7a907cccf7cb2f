#pragma once

/**
 * @file distortion.hpp
 * @brief Amplitude distortion Q and delay distortion R over a frequency band.
 *
 *   Q = max g(w) - min g(w),            g = 20 log10 |F(jw)|
 *   R = (max tau(w) - min tau(w)) / T1, tau = -arg F(jw) / w, T1 = 2 pi / w1
 *
 * Two routes are provided: a generic log-grid extremum search over any
 * gain / phase-delay callable, and closed forms for G(s) and H(s).
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mcdist/channel.hpp"

namespace mcdist {

/// A grid sample evaluated to NaN or infinity.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, double omega)
        : std::runtime_error(what + " at omega=" + std::to_string(omega)), omega_(omega) {}

    double omega() const noexcept { return omega_; }

private:
    double omega_;
};

inline constexpr std::size_t kDefaultGridPoints = 4096;

/// n log-spaced samples of [lo, hi] with both endpoints reproduced exactly.
inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    detail::require(detail::finite_positive(lo) && std::isfinite(hi) && hi >= lo,
                    "log_grid: need 0 < lo <= hi");
    detail::require(n >= 2, "log_grid: need at least 2 points");
    std::vector<double> out(n);
    const double span = std::log(hi / lo);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo * std::exp(span * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

template <typename F>
concept FrequencyFunction = std::invocable<const F&, double> &&
                            std::convertible_to<std::invoke_result_t<const F&, double>, double>;

namespace detail {

// Index-ordered scan; the result is independent of any evaluation order.
template <FrequencyFunction F>
double grid_spread(const F& fn, const FrequencyBand& band, std::size_t n_points, const char* what) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double w : log_grid(band.omega1(), band.omega2(), n_points)) {
        const double v = fn(w);
        if (!std::isfinite(v)) {
            throw EvaluationError(std::string(what) + ": non-finite value", w);
        }
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

}  // namespace detail

/// Q by extremum search over n_points log-spaced frequencies in the band.
template <FrequencyFunction GainDb>
double q_index_grid(const GainDb& gain_db, const FrequencyBand& band,
                    std::size_t n_points = kDefaultGridPoints) {
    return detail::grid_spread(gain_db, band, n_points, "q_index_grid");
}

/// R by extremum search, normalized by the period of omega1.
template <FrequencyFunction PhaseDelay>
double r_index_grid(const PhaseDelay& phase_delay, const FrequencyBand& band,
                    std::size_t n_points = kDefaultGridPoints) {
    return detail::grid_spread(phase_delay, band, n_points, "r_index_grid") / band.period();
}

// ----------------------------------------------------------------------------
// Closed forms
// ----------------------------------------------------------------------------

inline double q_diffusion(const DiffusionChannel& ch, const FrequencyBand& band) {
    return 20.0 * ch.delay_scale() * (std::sqrt(band.omega2()) - std::sqrt(band.omega1())) * kLog10E;
}

inline double r_diffusion(const DiffusionChannel& ch, const FrequencyBand& band) {
    return ch.delay_scale() * (1.0 / std::sqrt(band.omega1()) - 1.0 / std::sqrt(band.omega2())) /
           band.period();
}

namespace detail {

// 20 log10(sqrt(k^2 + w2^2) / sqrt(k^2 + w1^2)) without cancellation for narrow bands.
inline double first_order_gain_spread(double k, double w1, double w2) {
    return 10.0 * kLog10E * std::log1p((w2 - w1) * (w2 + w1) / (k * k + w1 * w1));
}

// atan(x)/x - atan(y)/y for 0 < x < y. Below y = 1/2 the Taylor series is
// summed termwise with the (y - x)(y + x) factor pulled out.
inline double atan_ratio_gap(double x, double y) {
    if (y > 0.5) {
        return std::atan(x) / x - std::atan(y) / y;
    }
    const double x2 = x * x;
    const double y2 = y * y;
    double h = 1.0;    // sum_{j<k} y^2j x^2(k-1-j)
    double xk = x2;    // x^2k
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k < 80; ++k) {
        const double term = h / (2.0 * k + 1.0);
        sum += sign * term;
        if (term <= 1e-17 * sum) break;
        h = y2 * h + xk;
        xk *= x2;
        sign = -sign;
    }
    return (y - x) * (y + x) * sum;
}

inline double first_order_delay_spread(double x, double y) {
    return x * atan_ratio_gap(x, y) / (2.0 * kPi);
}

}  // namespace detail

/// Depends on k_r only.
inline double q_reception(const ReceptionSystem& rs, const FrequencyBand& band) {
    return detail::first_order_gain_spread(rs.k_r(), band.omega1(), band.omega2());
}

/// (tau_H(w1) - tau_H(w2)) / T1, which reduces to
/// (atan(w1/k_r) - (w1/w2) atan(w2/k_r)) / (2 pi).
inline double r_reception(const ReceptionSystem& rs, const FrequencyBand& band) {
    return detail::first_order_delay_spread(band.omega1() / rs.k_r(), band.omega2() / rs.k_r());
}

/// Per-subsystem and channel-total indices over one band.
struct DistortionReport {
    double q_g = 0.0;
    double r_g = 0.0;
    double q_h = 0.0;
    double r_h = 0.0;
    double q_m = 0.0;
    double r_m = 0.0;
    FrequencyBand band{1.0, 2.0};
};

inline DistortionReport analyze(const DiffusionChannel& ch, const ReceptionSystem& rs,
                                const FrequencyBand& band) {
    DistortionReport rep;
    rep.band = band;
    rep.q_g = q_diffusion(ch, band);
    rep.r_g = r_diffusion(ch, band);
    rep.q_h = q_reception(rs, band);
    rep.r_h = r_reception(rs, band);
    rep.q_m = rep.q_g + rep.q_h;
    rep.r_m = rep.r_g + rep.r_h;
    return rep;
}

// ----------------------------------------------------------------------------
// Normalized form: w' = w / k_r, lambda = sqrt(x_r^2 k_r / (2 mu))
// ----------------------------------------------------------------------------

struct NormalizedBand {
    double omega1p;
    double omega2p;
    double lambda;

    NormalizedBand(double w1p, double w2p, double lam) : omega1p(w1p), omega2p(w2p), lambda(lam) {
        detail::require(detail::finite_positive(w1p) && std::isfinite(w2p) && w2p > w1p,
                        "NormalizedBand: need 0 < omega1p < omega2p");
        detail::require(std::isfinite(lam) && lam >= 0.0, "NormalizedBand: lambda must be >= 0");
    }
};

inline double normalized_distance(const DiffusionChannel& ch, double k_r) {
    return ch.delay_scale() * std::sqrt(k_r);
}

/// Inverse of normalized_distance: the x_r giving lambda for (mu, k_r).
inline double denormalize_distance(double lambda, double mu, double k_r) {
    return lambda * std::sqrt(2.0 * mu / k_r);
}

inline NormalizedBand normalize(const DiffusionChannel& ch, const ReceptionSystem& rs,
                                const FrequencyBand& band) {
    return {band.omega1() / rs.k_r(), band.omega2() / rs.k_r(), normalized_distance(ch, rs.k_r())};
}

inline double q_diffusion_normalized(const NormalizedBand& nb) {
    return 20.0 * nb.lambda * (std::sqrt(nb.omega2p) - std::sqrt(nb.omega1p)) * kLog10E;
}

inline double r_diffusion_normalized(const NormalizedBand& nb) {
    return nb.omega1p / (2.0 * kPi) * nb.lambda *
           (1.0 / std::sqrt(nb.omega1p) - 1.0 / std::sqrt(nb.omega2p));
}

inline double q_reception_normalized(const NormalizedBand& nb) {
    return detail::first_order_gain_spread(1.0, nb.omega1p, nb.omega2p);
}

inline double r_reception_normalized(const NormalizedBand& nb) {
    return detail::first_order_delay_spread(nb.omega1p, nb.omega2p);
}

/// Lower normalized band edge maximizing R_G (first) and R_H (second) for a
/// fixed upper edge omega2p.
inline std::pair<double, double> r_maxima(double omega2p) {
    detail::require(detail::finite_positive(omega2p), "r_maxima: omega2p must be > 0");
    return {omega2p / 4.0, std::sqrt(omega2p / std::atan(omega2p) - 1.0)};
}

}  // namespace mcdist
