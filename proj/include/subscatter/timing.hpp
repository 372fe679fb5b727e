#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "subscatter/closed_forms.hpp"
#include "subscatter/derivative.hpp"
#include "subscatter/evolve.hpp"
#include "subscatter/rootfind.hpp"
#include "subscatter/stationary.hpp"

namespace subscatter {

// All characteristic times for one scenario. Reflection-side quantities are
// empty when the reflection subprocess vanishes (R ~ 0); exact group times
// are empty when the centroid never reaches the required crossing.
struct TimingReport {
    std::optional<double> tau_tr_exact;   // ps
    std::optional<double> tau_ref_exact;  // ps
    double tau_tr_as = 0.0;               // ps
    std::optional<double> tau_ref_as;     // ps
    double d_eff_tr = 0.0;                // nm
    std::optional<double> d_eff_ref;      // nm
    double x_start_tr = 0.0;              // nm
    std::optional<double> x_start_ref;    // nm
    double tau_tr_dwell = 0.0;            // ps, at k0
    std::optional<double> tau_ref_dwell;  // ps, at k0
    std::optional<double> tau_tr_larmor;  // ps
    std::optional<double> tau_ref_larmor; // ps
    double cmt_phase = 0.0;               // ps, at k0
    double cmt_dwell = 0.0;               // ps, at k0
    double tau_free = 0.0;                // ps, m d / (hbar k0)
};

// d arg(a_out)/dk and d arg(A_ref_in)/dk; analytic for rectangular and delta
// barriers, Richardson central differences elsewhere (h = 1e-4 k).
struct PhaseDerivs {
    double Jp;
    double lp;
};

inline PhaseDerivs phase_derivatives(const BarrierSpec& bar, double k,
                                     const PhysicalConstants& pc) {
    if (bar.is<Rectangular>()) {
        const RectTimes rt = rect_closed_forms(k, bar.as<Rectangular>(), pc);
        return {rt.d_eff - rt.x_start, -rt.x_start};
    }
    if (bar.is<Delta>()) {
        const double g = bar.as<Delta>().W / (2.0 * pc.kinetic_factor());
        const double jp = g / (k * k + g * g);
        return {jp, jp};
    }
    const double h = 1e-4 * k;
    const double jp = phase_derivative(
        [&](double kk) { return StationaryState(bar, kk, pc).coeffs().a_out; }, k, h);
    const double lp = phase_derivative(
        [&](double kk) { return StationaryState(bar, kk, pc).in_amplitudes().A_ref_in; },
        k, h);
    return {jp, lp};
}

namespace detail {

inline std::size_t dwell_nodes(double kscale, double span) {
    const auto n = static_cast<std::size_t>(64.0 * kscale * span) + 1;
    return odd_count(std::max<std::size_t>(1001, n));
}

inline double field_density_integral(const StationaryState& st, Kind kind, double x0,
                                     double x1) {
    if (!(x1 > x0)) return 0.0;
    const double kscale = std::max(st.coeffs().kappa0, st.k());
    UniformGrid g(x0, x1, dwell_nodes(kscale, x1 - x0));
    auto f = [&](double x) {
        const PsiD p = kind == Kind::tr   ? st.tr_at(x)
                       : kind == Kind::ref ? st.ref_at(x)
                                           : st.full_at(x);
        return std::norm(p.psi);
    };
    return integrate_fn(f, g);
}

}  // namespace detail

// Subprocess dwell times at fixed k (flux-normalized barrier-region integrals).
struct DwellTimes {
    double tau_tr;
    std::optional<double> tau_ref;
};

inline DwellTimes dwell_times(const BarrierSpec& bar, double k, const PhysicalConstants& pc) {
    if (bar.is<Delta>()) return {0.0, 0.0};  // zero-width barrier region
    StationaryState st(bar, k, pc);
    const auto& c = st.coeffs();
    const double flux = pc.velocity(k);
    const double tr = (detail::field_density_integral(st, Kind::tr, bar.a(), bar.x_c()) +
                       detail::field_density_integral(st, Kind::full, bar.x_c(), bar.b())) /
                      (c.T * flux);
    DwellTimes out{tr, std::nullopt};
    if (c.R >= kNoReflectionEps)
        out.tau_ref = detail::field_density_integral(st, Kind::ref, bar.a(), bar.x_c()) /
                      (c.R * flux);
    return out;
}

// Conventional dwell time by quadrature: barrier-region density of the full
// state per unit incident flux (matches the rectangular closed form).
inline double cmt_dwell_quadrature(const BarrierSpec& bar, double k,
                                   const PhysicalConstants& pc) {
    if (bar.is<Delta>()) return 0.0;
    StationaryState st(bar, k, pc);
    return detail::field_density_integral(st, Kind::full, bar.a(), bar.b()) /
           pc.velocity(k);
}

// Conventional phase time m J'/(hbar k) for any barrier.
inline double cmt_phase_time_any(const BarrierSpec& bar, double k,
                                 const PhysicalConstants& pc) {
    return pc.mass() * phase_derivatives(bar, k, pc).Jp / (pc.hbar * k);
}

// Spectrum-averaged phase derivatives and the asymptotic group times.
struct AsymptoticTimes {
    double tau_tr_as;
    std::optional<double> tau_ref_as;
    double d_eff_tr;
    std::optional<double> d_eff_ref;
    double x_start_tr;
    std::optional<double> x_start_ref;
    double excluded_mass;  // |A|^2 mass dropped where min(T,R) < 1e-10
};

inline AsymptoticTimes asymptotic_group_times(const Spectrum& spec, const BarrierSpec& bar,
                                              const PhysicalConstants& pc) {
    const auto& kg = spec.kgrid;
    std::vector<double> wT(kg.count, 0.0), wR(kg.count, 0.0);
    std::vector<double> jT(kg.count, 0.0), lT(kg.count, 0.0), kT(kg.count, 0.0);
    std::vector<double> jR(kg.count, 0.0), lR(kg.count, 0.0), kR(kg.count, 0.0);
    double excluded = 0.0;
    double a2max = 0.0;
    for (std::size_t j = 0; j < kg.count; ++j)
        a2max = std::max(a2max, spec.amplitudes[j] * spec.amplitudes[j]);
    for (std::size_t j = 0; j < kg.count; ++j) {
        const double k = kg.point(j);
        const double A2 = spec.amplitudes[j] * spec.amplitudes[j];
        if (k <= 0.0 || A2 <= a2max * 1e-30) continue;
        StationaryState st(bar, k, pc);
        const auto& c = st.coeffs();
        if (std::min(c.T, c.R) < 1e-10) {
            excluded += A2 * simpson_weight(j, kg.count) * kg.spacing() / 3.0;
            continue;
        }
        const PhaseDerivs pd = phase_derivatives(bar, k, pc);
        wT[j] = A2 * c.T;
        wR[j] = A2 * c.R;
        jT[j] = wT[j] * pd.Jp;
        lT[j] = wT[j] * pd.lp;
        kT[j] = wT[j] * k;
        jR[j] = wR[j] * pd.Jp;
        lR[j] = wR[j] * pd.lp;
        kR[j] = wR[j] * k;
    }
    const double WT = integrate(wT, kg);
    const double WR = integrate(wR, kg);
    if (!(WT > 0.0)) throw DomainError("asymptotic times: transmission weight vanished");
    AsymptoticTimes out{};
    const double m_over_hbar = pc.mass() / pc.hbar;
    const double Jt = integrate(jT, kg) / WT;
    const double Lt = integrate(lT, kg) / WT;
    const double Kt = integrate(kT, kg) / WT;
    out.d_eff_tr = Jt - Lt;
    out.x_start_tr = -Lt;
    out.tau_tr_as = m_over_hbar * out.d_eff_tr / Kt;
    out.excluded_mass = excluded;
    if (WR >= kNoReflectionEps) {
        const double Jr = integrate(jR, kg) / WR;
        const double Lr = integrate(lR, kg) / WR;
        const double Kr = integrate(kR, kg) / WR;
        out.d_eff_ref = Jr - Lr;  // F' = 0 for symmetric barriers
        out.x_start_ref = -Lr;
        out.tau_ref_as = m_over_hbar * *out.d_eff_ref / Kr;
    }
    return out;
}

// Spectrum-weighted Larmor times built from the per-k dwell times with the
// asymmetry weight varpi(k) = |A(k)|^2 - |A(-k)|^2.
struct LarmorTimes {
    std::optional<double> tau_tr;
    std::optional<double> tau_ref;
};

inline LarmorTimes larmor_times(const Spectrum& spec, const BarrierSpec& bar,
                                const PhysicalConstants& pc) {
    const auto& kg = spec.kgrid;
    UniformGrid pos(kg.spacing(), kg.stop, odd_count(kg.count / 2));
    std::vector<double> ftr(pos.count, 0.0), fref(pos.count, 0.0);
    std::vector<double> wT(kg.count, 0.0), wR(kg.count, 0.0);
    for (std::size_t j = 0; j < kg.count; ++j) {
        const double A2 = spec.amplitudes[j] * spec.amplitudes[j];
        if (kg.point(j) <= 0.0) continue;
        StationaryState st(bar, kg.point(j), pc);
        wT[j] = A2 * st.coeffs().T;
        wR[j] = A2 * st.coeffs().R;
    }
    const double WT = integrate(wT, kg);
    const double WR = integrate(wR, kg);
    const double n0 = std::sqrt(2.0 * spec.l0 * spec.l0 / M_PI);
    const double floor_w = n0 * 1e-20;
    for (std::size_t i = 0; i < pos.count; ++i) {
        const double k = pos.point(i);
        const double vp = spectral_asymmetry(spec, k);
        if (std::abs(vp) <= floor_w) continue;
        StationaryState st(bar, k, pc);
        const auto& c = st.coeffs();
        const DwellTimes dw = dwell_times(bar, k, pc);
        ftr[i] = vp * c.T * dw.tau_tr;
        if (dw.tau_ref) fref[i] = vp * c.R * *dw.tau_ref;
    }
    LarmorTimes out;
    if (WT > 1e-300) out.tau_tr = integrate(ftr, pos) / WT;
    if (WR >= kNoReflectionEps) out.tau_ref = integrate(fref, pos) / WR;
    return out;
}

// Dwell-time partition of a double barrier: first barrier, gap, second
// barrier for transmission; first barrier and half-gap for reflection.
struct DoubleBarrierPartition {
    double tau_tr_1;
    double tau_tr_gap;
    double tau_tr_2;
    std::optional<double> tau_ref_1;
    std::optional<double> tau_ref_gap;
};

inline DoubleBarrierPartition double_barrier_partition(const BarrierSpec& bar, double k,
                                                       const PhysicalConstants& pc) {
    if (!bar.is<DoubleRect>())
        throw DomainError("double_barrier_partition: needs a DoubleRect barrier");
    const auto& db = bar.as<DoubleRect>();
    StationaryState st(bar, k, pc);
    const auto& c = st.coeffs();
    const double a = db.a, d = db.d, l = db.l;
    const double xc = bar.x_c(), b = bar.b();
    const double Itr = c.T * pc.velocity(k);
    DoubleBarrierPartition out{};
    out.tau_tr_1 = detail::field_density_integral(st, Kind::tr, a, a + d) / Itr;
    out.tau_tr_gap = (detail::field_density_integral(st, Kind::tr, a + d, xc) +
                      detail::field_density_integral(st, Kind::full, xc, a + d + l)) /
                     Itr;
    out.tau_tr_2 = detail::field_density_integral(st, Kind::full, a + d + l, b) / Itr;
    if (c.R >= kNoReflectionEps) {
        const double Iref = c.R * pc.velocity(k);
        out.tau_ref_1 = detail::field_density_integral(st, Kind::ref, a, a + d) / Iref;
        out.tau_ref_gap = detail::field_density_integral(st, Kind::ref, a + d, xc) / Iref;
    }
    return out;
}

// Exact group times from centroid crossings of the matched subprocess
// packets; centroids use the instantaneous subprocess norm.
struct ExactGroupTimes {
    std::optional<double> tau_tr;
    std::optional<double> tau_ref;
};

namespace detail {

inline double instant_centroid(const PacketEvolver& ev, Kind kind, double t) {
    const Snapshot s = ev.evolve(kind, t);
    const double n = norm_integral(s);
    const auto m = moments(s, n, ev.constants());
    return m ? m->x_mean : std::numeric_limits<double>::quiet_NaN();
}

inline std::optional<double> first_crossing(const PacketEvolver& ev, Kind kind,
                                            const std::vector<double>& ts,
                                            const std::vector<double>& xs, double target,
                                            std::size_t from, bool upward, double tol,
                                            std::size_t* hit = nullptr) {
    for (std::size_t i = from + 1; i < ts.size(); ++i) {
        const bool crossed = upward ? (xs[i - 1] < target && xs[i] >= target)
                                    : (xs[i - 1] > target && xs[i] <= target);
        if (!crossed) continue;
        if (hit) *hit = i;
        auto g = [&](double t) { return detail::instant_centroid(ev, kind, t) - target; };
        return find_root(g, ts[i - 1], ts[i], tol);
    }
    return std::nullopt;
}

}  // namespace detail

inline ExactGroupTimes exact_group_times(const PacketEvolver& ev, double t0, double t1,
                                         std::size_t samples = 400, double tol = 1e-4) {
    if (!(t1 > t0) || samples < 8) throw ConfigError("exact_group_times: bad time range");
    const double a = ev.barrier().a();
    const double b = ev.barrier().b();
    std::vector<double> ts(samples), xtr(samples), xref(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        ts[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(samples - 1);
        xtr[i] = detail::instant_centroid(ev, Kind::tr, ts[i]);
        xref[i] = detail::instant_centroid(ev, Kind::ref, ts[i]);
    }
    ExactGroupTimes out;
    std::size_t ia = 0;
    const auto t_a = detail::first_crossing(ev, Kind::tr, ts, xtr, a, 0, true, tol, &ia);
    if (t_a) {
        const auto t_b = detail::first_crossing(ev, Kind::tr, ts, xtr, b, ia - 1, true, tol);
        if (t_b) out.tau_tr = *t_b - *t_a;
    }
    // reflected centroid: entry and exit crossings of x = a around the peak
    const std::size_t ipk = static_cast<std::size_t>(
        std::max_element(xref.begin(), xref.end()) - xref.begin());
    if (xref[ipk] >= a) {
        std::size_t iu = 0;
        const auto t_in = detail::first_crossing(ev, Kind::ref, ts, xref, a, 0, true, tol, &iu);
        const auto t_out =
            t_in ? detail::first_crossing(ev, Kind::ref, ts, xref, a, ipk, false, tol)
                 : std::nullopt;
        if (t_in && t_out) out.tau_ref = *t_out - *t_in;
    }
    return out;
}

// Hartman-effect scan table. Each row holds the scanned geometry parameter
// and the characteristic times at fixed k.
struct ScanTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

enum class ScanVariable { width, gap };

inline ScanTable hartman_scan(const BarrierSpec& proto, ScanVariable var,
                              const std::vector<double>& values, double k,
                              const PhysicalConstants& pc) {
    ScanTable table;
    table.columns = {var == ScanVariable::width ? "d" : "l",
                     "tau_ph", "cmt_dwell", "tau_tr_dwell", "tau_ref_dwell",
                     "tau_as", "d_eff"};
    for (double v : values) {
        BarrierSpec bar = proto;
        if (const auto* r = std::get_if<Rectangular>(&proto.variant())) {
            if (var != ScanVariable::width)
                throw ConfigError("hartman_scan: rectangular barrier scans width only");
            bar = BarrierSpec::rectangular(r->a, r->a + v, r->V0);
        } else if (const auto* db = std::get_if<DoubleRect>(&proto.variant())) {
            bar = var == ScanVariable::width
                      ? BarrierSpec::double_rect(db->a, v, db->l, db->V0)
                      : BarrierSpec::double_rect(db->a, db->d, v, db->V0);
        } else {
            throw ConfigError("hartman_scan: unsupported barrier variant");
        }
        const PhaseDerivs pd = phase_derivatives(bar, k, pc);
        const double m_over_hbar = pc.mass() / pc.hbar;
        const DwellTimes dw = dwell_times(bar, k, pc);
        table.rows.push_back({v,
                              m_over_hbar * pd.Jp / k,
                              cmt_dwell_quadrature(bar, k, pc),
                              dw.tau_tr,
                              dw.tau_ref.value_or(std::numeric_limits<double>::quiet_NaN()),
                              m_over_hbar * (pd.Jp - pd.lp) / k,
                              pd.Jp - pd.lp});
    }
    return table;
}

}  // namespace subscatter
