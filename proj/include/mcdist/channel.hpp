#pragma once

/**
 * @file channel.hpp
 * @brief Frequency responses of the 1-D diffusion channel G(s), the
 *        receptor-ligand reception system H(s) and their cascade.
 *
 * Units are fixed throughout the library: micrometres, seconds and
 * micromolar. Frequencies are angular (rad/s).
 *
 *   G(s) = exp(-sqrt(x_r^2 s / mu))
 *   H(s) = k_f r / (s + k_r)
 */

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mcdist {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kLog10E = std::numbers::log10e;

/// Raised when an argument lies outside the domain of a formula.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) {
        throw DomainError(what);
    }
}

inline bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

inline void require_omega(double omega) {
    require(finite_positive(omega), "omega must be finite and positive, got " + std::to_string(omega));
}

}  // namespace detail

/// Diffusion coefficient mu [um^2/s] and transmitter-receiver distance x_r [um].
class DiffusionChannel {
public:
    DiffusionChannel(double mu, double x_r) : mu_(mu), x_r_(x_r) {
        detail::require(detail::finite_positive(mu), "DiffusionChannel: mu must be > 0");
        detail::require(std::isfinite(x_r) && x_r >= 0.0, "DiffusionChannel: x_r must be >= 0");
    }

    double mu() const noexcept { return mu_; }
    double x_r() const noexcept { return x_r_; }

    /// sqrt(x_r^2 / (2 mu)) [s^1/2]; every diffusion index is linear in it.
    double delay_scale() const noexcept { return x_r_ / std::sqrt(2.0 * mu_); }

    DiffusionChannel with_distance(double x_r) const { return {mu_, x_r}; }

private:
    double mu_;
    double x_r_;
};

/// Linearized receptor kinetics: binding k_f [1/(uM s)], dissociation k_r [1/s],
/// total receptor concentration r [uM].
class ReceptionSystem {
public:
    ReceptionSystem(double k_f, double k_r, double r) : k_f_(k_f), k_r_(k_r), r_(r) {
        detail::require(detail::finite_positive(k_f), "ReceptionSystem: k_f must be > 0");
        detail::require(detail::finite_positive(k_r), "ReceptionSystem: k_r must be > 0");
        detail::require(detail::finite_positive(r), "ReceptionSystem: r must be > 0");
        detail::require(detail::finite_positive(dc_gain()), "ReceptionSystem: DC gain must be finite");
    }

    double k_f() const noexcept { return k_f_; }
    double k_r() const noexcept { return k_r_; }
    double r() const noexcept { return r_; }

    /// k_f r, the numerator of H(s) [1/s].
    double binding_rate() const noexcept { return k_f_ * r_; }
    double dc_gain() const noexcept { return k_f_ * r_ / k_r_; }

private:
    double k_f_;
    double k_r_;
    double r_;
};

/// Analysis band [omega1, omega2] in rad/s.
class FrequencyBand {
public:
    FrequencyBand(double omega1, double omega2) : omega1_(omega1), omega2_(omega2) {
        detail::require(detail::finite_positive(omega1), "FrequencyBand: omega1 must be > 0");
        detail::require(std::isfinite(omega2) && omega2 > omega1,
                        "FrequencyBand: omega2 must be finite and > omega1");
    }

    double omega1() const noexcept { return omega1_; }
    double omega2() const noexcept { return omega2_; }

    /// Period of the lowest frequency, T1 = 2 pi / omega1 [s].
    double period() const noexcept { return 2.0 * kPi / omega1_; }

    friend bool operator==(const FrequencyBand&, const FrequencyBand&) = default;

private:
    double omega1_;
    double omega2_;
};

/// Polar frequency response. Phase is unwrapped and never reduced mod 2 pi.
struct ComplexResponse {
    double magnitude = 1.0;
    double phase = 0.0;

    double gain_db() const { return 20.0 * std::log10(magnitude); }

    ComplexResponse& operator*=(const ComplexResponse& o) {
        magnitude *= o.magnitude;
        phase += o.phase;
        return *this;
    }

    friend ComplexResponse operator*(ComplexResponse a, const ComplexResponse& b) { return a *= b; }
};

// ----------------------------------------------------------------------------
// Diffusion system G(jw)
// ----------------------------------------------------------------------------

/// |G(jw)| = exp(-a), arg G(jw) = -a with a = sqrt(x_r^2 w / (2 mu)).
inline ComplexResponse diffusion_response(const DiffusionChannel& ch, double omega) {
    detail::require_omega(omega);
    const double a = ch.delay_scale() * std::sqrt(omega);
    return {std::exp(-a), -a};
}

/// 20 log10 |G(jw)|, written directly in the exponent so it stays exact when
/// |G| underflows.
inline double diffusion_gain_db(const DiffusionChannel& ch, double omega) {
    detail::require_omega(omega);
    return -20.0 * ch.delay_scale() * std::sqrt(omega) * kLog10E;
}

inline double diffusion_phase_delay(const DiffusionChannel& ch, double omega) {
    detail::require_omega(omega);
    return ch.delay_scale() / std::sqrt(omega);
}

/// Three-dimensional point-source variant at distance d:
/// G'(s) = exp(-sqrt(d^2 s / mu)) / (4 pi mu d).
inline ComplexResponse diffusion3d_response(double mu, double d, double omega) {
    detail::require(detail::finite_positive(d), "diffusion3d_response: d must be > 0");
    ComplexResponse g = diffusion_response(DiffusionChannel(mu, d), omega);
    g.magnitude /= 4.0 * kPi * mu * d;
    return g;
}

// ----------------------------------------------------------------------------
// Reception system H(jw)
// ----------------------------------------------------------------------------

inline void require_nonnegative_omega(double omega) {
    detail::require(std::isfinite(omega) && omega >= 0.0, "omega must be finite and >= 0");
}

inline ComplexResponse reception_response(const ReceptionSystem& rs, double omega) {
    require_nonnegative_omega(omega);
    return {rs.binding_rate() / std::hypot(omega, rs.k_r()), -std::atan(omega / rs.k_r())};
}

inline double reception_gain_db(const ReceptionSystem& rs, double omega) {
    require_nonnegative_omega(omega);
    return 20.0 * std::log10(rs.binding_rate()) - 20.0 * std::log10(std::hypot(omega, rs.k_r()));
}

/// atan(w/k_r)/w; the removable singularity at w = 0 evaluates to 1/k_r.
inline double reception_phase_delay(const ReceptionSystem& rs, double omega) {
    require_nonnegative_omega(omega);
    const double x = omega / rs.k_r();
    // atan(x)/x = 1 - x^2/3 + x^4/5 - ...; the series keeps full precision near 0.
    if (x < 1e-4) {
        const double x2 = x * x;
        return (1.0 - x2 / 3.0 + x2 * x2 / 5.0) / rs.k_r();
    }
    return std::atan(x) / omega;
}

// ----------------------------------------------------------------------------
// Cascade G(jw) H(jw)
// ----------------------------------------------------------------------------

inline ComplexResponse cascade_response(const DiffusionChannel& ch, const ReceptionSystem& rs,
                                        double omega) {
    return diffusion_response(ch, omega) * reception_response(rs, omega);
}

inline double cascade_gain_db(const DiffusionChannel& ch, const ReceptionSystem& rs, double omega) {
    return diffusion_gain_db(ch, omega) + reception_gain_db(rs, omega);
}

inline double cascade_phase_delay(const DiffusionChannel& ch, const ReceptionSystem& rs,
                                  double omega) {
    return diffusion_phase_delay(ch, omega) + reception_phase_delay(rs, omega);
}

}  // namespace mcdist
