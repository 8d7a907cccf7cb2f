#pragma once

/**
 * @file design.hpp
 * @brief Distortion-constrained channel design: the upper limit on the
 *        communication distance, the reception-limited cutoff frequency and
 *        the highest distortion-free band of fixed relative width.
 */

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "mcdist/channel.hpp"
#include "mcdist/distortion.hpp"

namespace mcdist {

/// No admissible answer exists for the requested constraints.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Channel-level distortion budget (q0 in dB, r0 period-normalized) for a
/// fixed reception system, band and diffusion coefficient.
struct DesignSpec {
    double q0;
    double r0;
    FrequencyBand band;
    ReceptionSystem rs;
    double mu;

    DesignSpec(double q0_, double r0_, FrequencyBand band_, ReceptionSystem rs_, double mu_)
        : q0(q0_), r0(r0_), band(band_), rs(rs_), mu(mu_) {
        detail::require(detail::finite_positive(q0), "DesignSpec: q0 must be > 0");
        detail::require(detail::finite_positive(r0), "DesignSpec: r0 must be > 0");
        detail::require(detail::finite_positive(mu), "DesignSpec: mu must be > 0");
    }

    /// Thresholds expressed as multiples of the reception-only indices,
    /// e.g. 1.2 leaves 20 % of Q_H (R_H) for diffusion.
    static DesignSpec relative(double q_factor, double r_factor, const FrequencyBand& band,
                               const ReceptionSystem& rs, double mu) {
        return {q_factor * q_reception(rs, band), r_factor * r_reception(rs, band), band, rs, mu};
    }
};

enum class BindingConstraint { none, amplitude, delay };

inline const char* to_string(BindingConstraint b) {
    switch (b) {
        case BindingConstraint::amplitude: return "amplitude";
        case BindingConstraint::delay: return "delay";
        default: return "none";
    }
}

struct DesignResult {
    double q_h = 0.0;
    double r_h = 0.0;
    double x_q = 0.0;        ///< distance at which Q_G + Q_H reaches q0 [um]
    double x_r_delay = 0.0;  ///< distance at which R_G + R_H reaches r0 [um]
    double x_r_limit = 0.0;  ///< min(x_q, x_r_delay) when feasible, else 0
    bool feasible = false;
    BindingConstraint binding = BindingConstraint::none;
};

/// Any x_r < x_r_limit keeps Q_M < q0 and R_M < r0. Infeasible budgets
/// (the reception system alone uses them up) come back as feasible = false.
inline DesignResult distance_bound(const DesignSpec& spec) {
    const FrequencyBand& band = spec.band;
    const double sqrt_2mu = std::sqrt(2.0 * spec.mu);
    const double sqrt_w1 = std::sqrt(band.omega1());
    const double sqrt_w2 = std::sqrt(band.omega2());

    DesignResult res;
    res.q_h = q_reception(spec.rs, band);
    res.r_h = r_reception(spec.rs, band);
    res.x_q = sqrt_2mu * (spec.q0 - res.q_h) / (20.0 * (sqrt_w2 - sqrt_w1) * kLog10E);
    res.x_r_delay = sqrt_2mu * (spec.r0 - res.r_h) * band.period() / (1.0 / sqrt_w1 - 1.0 / sqrt_w2);
    res.feasible = spec.q0 > res.q_h && spec.r0 > res.r_h;
    if (res.feasible) {
        if (res.x_q <= res.x_r_delay) {
            res.x_r_limit = res.x_q;
            res.binding = BindingConstraint::amplitude;
        } else {
            res.x_r_limit = res.x_r_delay;
            res.binding = BindingConstraint::delay;
        }
    }
    return res;
}

/// Frequency at which |H(jw)| falls to `attenuation`.
inline double reception_cutoff(const ReceptionSystem& rs, double attenuation) {
    detail::require(detail::finite_positive(attenuation), "reception_cutoff: attenuation must be > 0");
    detail::require(attenuation < rs.dc_gain(),
                    "reception_cutoff: attenuation must be below the DC gain " +
                        std::to_string(rs.dc_gain()));
    const double ratio = rs.binding_rate() / attenuation;
    return std::sqrt(ratio * ratio - rs.k_r() * rs.k_r());
}

// ----------------------------------------------------------------------------
// Highest clean band
// ----------------------------------------------------------------------------

struct CleanBandOptions {
    double search_lo = 1e-8;
    double search_hi = 1e8;
    double rel_tol = 1e-4;
    /// Coarse scan density used to bracket the top feasible edge.
    std::size_t scan_per_decade = 16;
    /// When set, compare against these (Q, R) thresholds instead of
    /// fractions of the candidate band's own reception indices.
    std::optional<std::pair<double, double>> fixed_thresholds;
};

struct CleanBandResult {
    FrequencyBand band;
    bool saturated = false;  ///< the predicate still held at search_hi
};

/// True when [omega1, width * omega1] keeps Q_G <= q_frac Q_H and R_G <= r_frac R_H.
inline bool is_clean_band(const DiffusionChannel& ch, const ReceptionSystem& rs, double omega1,
                          double width, double q_frac, double r_frac,
                          const CleanBandOptions& opt = {}) {
    const FrequencyBand band(omega1, width * omega1);
    double q_limit = 0.0;
    double r_limit = 0.0;
    if (opt.fixed_thresholds) {
        q_limit = opt.fixed_thresholds->first;
        r_limit = opt.fixed_thresholds->second;
    } else {
        q_limit = q_frac * q_reception(rs, band);
        r_limit = r_frac * r_reception(rs, band);
    }
    return q_diffusion(ch, band) <= q_limit && r_diffusion(ch, band) <= r_limit;
}

/// Band [w1, width * w1] with the largest w1 in the search range that passes
/// is_clean_band: descending log scan, then log-bisection on the bracket.
inline CleanBandResult highest_clean_band(double mu, double x_r, const ReceptionSystem& rs,
                                          double width, double q_frac, double r_frac,
                                          const CleanBandOptions& opt = {}) {
    detail::require(std::isfinite(width) && width > 1.0, "highest_clean_band: width must be > 1");
    if (!opt.fixed_thresholds) {
        detail::require(q_frac > 0.0 && q_frac < 1.0, "highest_clean_band: q_frac must be in (0,1)");
        detail::require(r_frac > 0.0 && r_frac < 1.0, "highest_clean_band: r_frac must be in (0,1)");
    }
    detail::require(detail::finite_positive(opt.search_lo) && opt.search_hi > opt.search_lo,
                    "highest_clean_band: invalid search range");
    detail::require(opt.rel_tol > 0.0 && opt.scan_per_decade >= 1, "highest_clean_band: invalid tolerances");

    const DiffusionChannel ch(mu, x_r);
    auto clean = [&](double w) { return is_clean_band(ch, rs, w, width, q_frac, r_frac, opt); };

    if (clean(opt.search_hi)) {
        return {FrequencyBand(opt.search_hi, width * opt.search_hi), true};
    }

    const double decades = std::log10(opt.search_hi / opt.search_lo);
    const auto steps = static_cast<std::size_t>(std::ceil(decades * static_cast<double>(opt.scan_per_decade)));
    const double ratio = std::pow(opt.search_hi / opt.search_lo, 1.0 / static_cast<double>(steps));

    double bad = opt.search_hi;
    std::optional<double> good;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double w = k == steps ? opt.search_lo : opt.search_hi / std::pow(ratio, static_cast<double>(k));
        if (clean(w)) {
            good = w;
            break;
        }
        bad = w;
    }
    if (!good) {
        throw InfeasibleError("highest_clean_band: no clean band in [" + std::to_string(opt.search_lo) +
                              ", " + std::to_string(opt.search_hi) + "] rad/s");
    }

    double lo = *good;
    double hi = bad;
    while (hi / lo - 1.0 > opt.rel_tol) {
        const double mid = std::sqrt(lo * hi);
        if (clean(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {FrequencyBand(lo, width * lo), false};
}

}  // namespace mcdist
