#pragma once

#include <cmath>

#include "subscatter/barrier.hpp"
#include "subscatter/constants.hpp"
#include "subscatter/errors.hpp"

namespace subscatter {

namespace detail {

// Even-analytic primitives of w = kappa^2 d^2 (signed; w < 0 is the
// above-barrier trigonometric branch). Series keep them accurate through
// the kappa -> 0 threshold.

// sinh(sqrt(w))/sqrt(w)
inline double shw(double w) {
    if (std::abs(w) < 1e-8)
        return 1.0 + w / 6.0 * (1.0 + w / 20.0 * (1.0 + w / 42.0));
    if (w > 0.0) {
        const double t = std::sqrt(w);
        return std::sinh(t) / t;
    }
    const double t = std::sqrt(-w);
    return std::sin(t) / t;
}

// cosh(sqrt(w))
inline double chw(double w) {
    if (std::abs(w) < 1e-8) return 1.0 + w / 2.0 * (1.0 + w / 12.0 * (1.0 + w / 30.0));
    return w > 0.0 ? std::cosh(std::sqrt(w)) : std::cos(std::sqrt(-w));
}

// (sinh(sqrt(w)) - sqrt(w)) / sqrt(w)^3
inline double d3w(double w) {
    if (std::abs(w) < 0.01)
        return (1.0 + w / 20.0 * (1.0 + w / 42.0 * (1.0 + w / 72.0))) / 6.0;
    return (shw(w) - 1.0) / w;
}

// (cosh(sqrt(w)) - sinh(sqrt(w))/sqrt(w)) / w
inline double gw(double w) {
    if (std::abs(w) < 0.01)
        return 1.0 / 3.0 + w / 30.0 + w * w / 840.0 + w * w * w / 45360.0;
    return (chw(w) - shw(w)) / w;
}

// sinh^2(sqrt(w)/2) / w = (cosh(sqrt(w)) - 1) / (2w)
inline double q2w(double w) {
    if (std::abs(w) < 0.01)
        return 0.25 + w / 48.0 + w * w / 1440.0 + w * w * w / 80640.0;
    return (chw(w) - 1.0) / (2.0 * w);
}

}  // namespace detail

// Closed forms for the rectangular barrier, valid on both sides of E = V0.
struct RectTimes {
    double d_eff;         // nm
    double x_start;       // nm
    double tau_as;        // ps, m d_eff / (hbar k)
    double tau_ph;        // ps, conventional phase time
    double tau_tr_dwell;  // ps
    double tau_ref_dwell; // ps
    double cmt_dwell;     // ps, conventional dwell time
};

inline RectTimes rect_closed_forms(double k, const Rectangular& bar,
                                   const PhysicalConstants& pc) {
    if (!(k > 0.0)) throw DomainError("rect_closed_forms: k must be positive");
    const double kf = pc.kinetic_factor();
    const double d = bar.b - bar.a;
    const double k2 = k * k;
    const double k0sq = bar.V0 / kf;          // kappa0^2
    const double kap2 = k0sq - k2;            // kappa^2, signed
    const double w = kap2 * d * d;
    const double d2 = d * d;
    const double sh = detail::shw(w);
    const double denom = 4.0 * k2 + k0sq * k0sq * d2 * sh * sh;

    RectTimes t;
    t.d_eff = 4.0 * d * (k2 + k0sq * w * detail::q2w(w)) *
              (1.0 + k0sq * d2 * detail::d3w(w)) / denom;
    t.x_start = -2.0 * k0sq * d * (sh + k2 * d2 * detail::gw(w)) / denom;
    const double m_over_hbar = pc.mass() / pc.hbar;  // ps / nm^2
    t.tau_as = m_over_hbar * t.d_eff / k;
    t.tau_ph = 2.0 * m_over_hbar * d *
               (k0sq + 2.0 * k2 + 4.0 * k0sq * k0sq * d2 * detail::d3w(4.0 * w)) /
               (k * denom);
    t.tau_tr_dwell = m_over_hbar * d * (2.0 + k0sq * d2 * detail::d3w(w)) / (2.0 * k);
    t.tau_ref_dwell =
        m_over_hbar * k * d * d2 * detail::d3w(w) / (1.0 + k0sq * d2 * detail::q2w(w));
    t.cmt_dwell = 4.0 * m_over_hbar * k * d *
                  (1.0 + 2.0 * k0sq * d2 * detail::d3w(4.0 * w)) / denom;
    return t;
}

inline double cmt_phase_time(const Rectangular& bar, double k,
                             const PhysicalConstants& pc) {
    return rect_closed_forms(k, bar, pc).tau_ph;
}

inline double cmt_dwell_time(const Rectangular& bar, double k,
                             const PhysicalConstants& pc) {
    const double E = pc.energy(k);
    if (!(E < bar.V0))
        throw DomainError("cmt_dwell_time: closed form requires E < V0");
    return rect_closed_forms(k, bar, pc).cmt_dwell;
}

// Delta-potential effective widths and starting points, new approach vs the
// conventional treatment.
struct DeltaTimes {
    double d_eff_new;    // nm
    double x_start_new;  // nm
    double d_eff_cmt;    // nm
    double x_start_cmt;  // nm
};

inline DeltaTimes delta_times(const Delta& bar, double k, const PhysicalConstants& pc) {
    if (bar.W == 0.0) throw DomainError("delta_times: W must be nonzero");
    if (!(k > 0.0)) throw DomainError("delta_times: k must be positive");
    const double g = bar.W / (2.0 * pc.kinetic_factor());  // m W / hbar^2, 1/nm
    const double s = 2.0 * g / (k * k + g * g);
    return {0.0, -s, s, 0.0};
}

}  // namespace subscatter
