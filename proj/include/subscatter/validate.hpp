#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "subscatter/doubleslit.hpp"
#include "subscatter/evolve.hpp"
#include "subscatter/io/csv.hpp"
#include "subscatter/parallel.hpp"
#include "subscatter/timing.hpp"

namespace subscatter {

struct CriterionResult {
    int id;
    std::string title;
    bool pass;
    std::string detail;       // deterministic, goes into the report
    double elapsed_s = 0.0;   // informational only, never in the report
};

namespace acceptance {

inline std::string fmt(double v, int digits = 6) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

struct SampleSet {
    std::vector<BarrierSpec> barriers;
    std::vector<double> ks;
};

// 1000 deterministic random (barrier, k) cases cycling the four variants.
inline SampleSet random_samples(std::size_t n) {
    std::mt19937_64 rng(0x5eed5ca77e2ull);
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    };
    SampleSet s;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = uni(1.0, 60.0);
        const double k = uni(1e-3, 2.0);
        switch (i % 4) {
            case 0:
                s.barriers.push_back(
                    BarrierSpec::rectangular(a, a + uni(1e-2, 30.0), uni(1e-3, 1.0)));
                break;
            case 1:
                s.barriers.push_back(BarrierSpec::double_rect(a, uni(0.1, 10.0),
                                                              uni(0.1, 10.0),
                                                              uni(1e-3, 1.0)));
                break;
            case 2:
                s.barriers.push_back(BarrierSpec::delta(a, uni(1e-3, 2.0)));
                break;
            default: {
                const double w1 = uni(0.1, 8.0), w2 = uni(0.1, 8.0), w3 = uni(0.1, 8.0);
                const double v1 = uni(1e-3, 1.0), v2 = uni(1e-3, 1.0);
                s.barriers.push_back(BarrierSpec::symmetric_piecewise(
                    a, {Segment{w1, v1}, Segment{w2, v2}, Segment{w3, v2},
                        Segment{w2, v2}, Segment{w1, v1}}));
                break;
            }
        }
        s.ks.push_back(k);
    }
    return s;
}

inline CriterionResult criterion_1_2_3(int which) {
    const auto t0 = std::chrono::steady_clock::now();
    const PhysicalConstants pc;
    const SampleSet samples = random_samples(1000);
    double worst_unitarity = 0.0, worst_decomp = 0.0;
    double worst_sum = 0.0, worst_mod = 0.0;
    double worst_refmid = 0.0, worst_jump = 0.0;
    for (std::size_t i = 0; i < samples.barriers.size(); ++i) {
        const auto& bar = samples.barriers[i];
        StationaryState st(bar, samples.ks[i], pc);
        const auto& c = st.coeffs();
        worst_unitarity = std::max(worst_unitarity, std::abs(c.T + c.R - 1.0));
        const auto& amps = st.in_amplitudes();
        worst_sum = std::max(worst_sum,
                             std::abs(amps.A_tr_in + amps.A_ref_in - Complex(1.0, 0.0)));
        worst_mod = std::max(worst_mod, std::abs(std::norm(amps.A_tr_in) +
                                                 std::norm(amps.A_ref_in) - 1.0));
        const double lo = bar.a() - 5.0, hi = bar.b() + 5.0;
        double fmax = 0.0, dmax = 0.0, refmax = 0.0;
        for (int j = 0; j <= 160; ++j) {
            const double x = lo + (hi - lo) * j / 160.0;
            const PsiD f = st.full_at(x), tr = st.tr_at(x), rf = st.ref_at(x);
            fmax = std::max(fmax, std::abs(f.psi));
            refmax = std::max(refmax, std::abs(rf.psi));
            dmax = std::max(dmax, std::abs(tr.psi + rf.psi - f.psi));
        }
        worst_decomp = std::max(worst_decomp, dmax / fmax);
        // midpoint laws
        const double refmid = std::abs(st.ref_at(st.x_c() - 1e-14).psi);
        if (refmax > 0.0) worst_refmid = std::max(worst_refmid, refmid / refmax);
        if (c.T > 1e-280) {
            const double jl = current(st.tr_left_limit_at_xc(), pc);
            const double jr = current(st.full_at(st.x_c()), pc);
            worst_jump = std::max(worst_jump, std::abs(jl - jr) / std::abs(jr));
        }
    }
    const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (which == 1) {
        const bool pass = worst_unitarity < 1e-10 && worst_decomp < 1e-10 && el < 10.0;
        return {1, "unitarity and decomposition identity (1000 random cases)", pass,
                "max|T+R-1|=" + fmt(worst_unitarity) +
                    ", max|tr+ref-full|/max|full|=" + fmt(worst_decomp) +
                    ", runtime within limit: " + (el < 10.0 ? "yes" : "NO"),
                el};
    }
    if (which == 2) {
        const bool pass = worst_sum < 1e-12 && worst_mod < 1e-12;
        return {2, "causal in-amplitude identities", pass,
                "max|A_tr+A_ref-1|=" + fmt(worst_sum) +
                    ", max||A_tr|^2+|A_ref|^2-1|=" + fmt(worst_mod),
                el};
    }
    const bool pass = worst_refmid < 1e-10 && worst_jump < 1e-10;
    return {3, "midpoint laws (ref vanishes at x_c, tr current continuous)", pass,
            "max|psi_ref(x_c)|/scale=" + fmt(worst_refmid) +
                ", max tr-current jump=" + fmt(worst_jump),
            el};
}

inline CriterionResult criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    const PhysicalConstants pc;
    std::mt19937_64 rng(0xdeadf00dull);
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    };
    double worst_dwell = 0.0, worst_phase = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double V0 = uni(0.01, 1.0);
        const double d = uni(0.5, 30.0);
        const double E = uni(0.05, 0.95) * V0;
        const double k = pc.wavenumber(E);
        const auto bar = BarrierSpec::rectangular(20.0, 20.0 + d, V0);
        const RectTimes rt = rect_closed_forms(k, bar.as<Rectangular>(), pc);
        const DwellTimes dw = dwell_times(bar, k, pc);
        worst_dwell = std::max(worst_dwell,
                               std::abs(dw.tau_tr - rt.tau_tr_dwell) / rt.tau_tr_dwell);
        if (dw.tau_ref)
            worst_dwell = std::max(worst_dwell, std::abs(*dw.tau_ref - rt.tau_ref_dwell) /
                                                    rt.tau_ref_dwell);
        // finite-difference phase derivatives, independent of the closed forms
        const double h = 1e-4 * k;
        const double Jp = phase_derivative(
            [&](double kk) { return StationaryState(bar, kk, pc).coeffs().a_out; }, k, h);
        const double lp = phase_derivative(
            [&](double kk) { return StationaryState(bar, kk, pc).in_amplitudes().A_ref_in; },
            k, h);
        worst_phase = std::max(worst_phase, std::abs(Jp - lp - rt.d_eff) / std::abs(rt.d_eff));
        worst_phase = std::max(worst_phase, std::abs(-lp - rt.x_start) / std::abs(rt.x_start));
    }
    const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = worst_dwell < 1e-6 && worst_phase < 1e-4 && el < 30.0;
    return {4, "rectangular closed forms vs quadrature / phase-derivative oracles", pass,
            "max dwell rel dev=" + fmt(worst_dwell) + ", max d_eff/x_start rel dev=" +
                fmt(worst_phase) + ", runtime within limit: " + (el < 30.0 ? "yes" : "NO"),
            el};
}

inline CriterionResult criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    const PhysicalConstants pc;
    const double V0 = 0.3;
    const double kap0 = std::sqrt(V0 / pc.kinetic_factor());
    const double k = kap0 / std::sqrt(2.0);  // E = V0/2, kappa = k
    const double kappa = k;
    const double l = M_PI / k;  // gap fixed, off-resonance
    std::vector<double> kds = {6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0};
    std::vector<double> ds, ph, dw, trdw;
    for (double kd : kds) ds.push_back(kd / kappa);
    const ScanTable tab = hartman_scan(BarrierSpec::double_rect(30.0, ds[0], l, V0),
                                       ScanVariable::width, ds, k, pc);
    for (const auto& row : tab.rows) {
        ph.push_back(row[1]);
        dw.push_back(row[2]);
        trdw.push_back(row[3]);
    }
    auto variation = [](const std::vector<double>& v) {
        double lo = v[0], hi = v[0];
        for (double x : v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        return (hi - lo) / lo;
    };
    // least-squares slope of ln tau vs d
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        sx += ds[i];
        sy += std::log(trdw[i]);
        sxx += ds[i] * ds[i];
        sxy += ds[i] * std::log(trdw[i]);
    }
    const double n = static_cast<double>(ds.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double vph = variation(ph), vdw = variation(dw);
    const double slope_dev = std::abs(slope - 2.0 * kappa) / (2.0 * kappa);
    const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = vph < 0.01 && vdw < 0.01 && slope_dev < 0.05;
    return {5, "Hartman contrast: tau_ph/cmt_dwell saturate, tau_tr_dwell grows like exp(2 kappa d)",
            pass,
            "tau_ph variation=" + fmt(vph) + ", cmt_dwell variation=" + fmt(vdw) +
                ", log-slope/(2 kappa)-1=" + fmt(slope_dev) + " (kappa d in [6,12], E=V0/2)",
            el};
}

inline CriterionResult criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    const PhysicalConstants pc;
    const double V0 = 0.3;
    const double kap0 = std::sqrt(V0 / pc.kinetic_factor());
    const double d = 8.0 / kap0;  // kappa0 d = 8
    const double k = 0.04 * kap0;
    const double l = 2.0 * M_PI / k;  // kl = 2pi
    const auto bar = BarrierSpec::double_rect(30.0, d, l, V0);
    const DoubleBarrierPartition part = double_barrier_partition(bar, k, pc);
    const double m_over_hbar = pc.mass() / pc.hbar;
    const double f1 = m_over_hbar / (4.0 * k * kap0) * std::exp(2.0 * kap0 * d);
    const double fgap = m_over_hbar * kap0 * kap0 / (8.0 * std::pow(k, 4)) *
                        (k * l - std::sin(k * l)) * std::exp(2.0 * kap0 * d);
    const double dev1 = std::abs(part.tau_tr_1 - f1) / f1;
    const double devg = std::abs(part.tau_tr_gap - fgap) / fgap;
    const double dev_pair = std::abs(part.tau_tr_1 + part.tau_tr_2 - f1) / f1;

    // l-scan: conventional times flat, gap dwell strongly l-dependent
    std::vector<double> ls = {5.0, 7.5, 10.0, 12.5, 15.0, 17.5, 20.0};
    double ph_lo = 1e300, ph_hi = -1e300, dw_lo = 1e300, dw_hi = -1e300;
    double gap_lo = 1e300, gap_hi = -1e300;
    for (double lv : ls) {
        const auto b2 = BarrierSpec::double_rect(30.0, d, lv, V0);
        const double tph = cmt_phase_time_any(b2, k, pc);
        const double tdw = cmt_dwell_quadrature(b2, k, pc);
        const auto p2 = double_barrier_partition(b2, k, pc);
        ph_lo = std::min(ph_lo, tph);
        ph_hi = std::max(ph_hi, tph);
        dw_lo = std::min(dw_lo, tdw);
        dw_hi = std::max(dw_hi, tdw);
        gap_lo = std::min(gap_lo, p2.tau_tr_gap);
        gap_hi = std::max(gap_hi, p2.tau_tr_gap);
    }
    const double vph = (ph_hi - ph_lo) / ph_lo;
    const double vdw = (dw_hi - dw_lo) / dw_lo;
    const double vgap = (gap_hi - gap_lo) / gap_lo;
    const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool clause1 = dev1 < 0.05;
    const bool pass = clause1 && devg < 0.05 && vph < 0.01 && vdw < 0.01 && vgap > 1.0;
    return {6, "generalized Hartman contrast (double barrier, kappa0 d = 8)", pass,
            "tau1 vs (m/4hbar k k0)e^{2k0 d}: rel dev=" + fmt(dev1) +
                " [measured/formula=" + fmt(part.tau_tr_1 / f1) +
                "; the barrier-pair sum tau1+tau2 deviates " + fmt(dev_pair) +
                "], tau_gap rel dev=" + fmt(devg) + ", cmt_phase var=" + fmt(vph) +
                ", cmt_dwell var=" + fmt(vdw) + ", tau_gap spread=" + fmt(vgap),
            el};
}

inline CriterionResult criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    const PhysicalConstants pc;
    const double W = 0.3, k = 0.4;
    const DeltaTimes dt = delta_times(Delta{10.0, W}, k, pc);
    // thin-barrier limit, numerical phase derivatives
    const double w = 1e-7;
    const auto thin = BarrierSpec::rectangular(10.0, 10.0 + w, W / w);
    const double h = 1e-4 * k;
    const double Jp = phase_derivative(
        [&](double kk) { return StationaryState(thin, kk, pc).coeffs().a_out; }, k, h);
    const double lp = phase_derivative(
        [&](double kk) { return StationaryState(thin, kk, pc).in_amplitudes().A_ref_in; },
        k, h);
    const double deff_num = Jp - lp;
    const double g = W / (2.0 * pc.kinetic_factor());
    const double formula = -2.0 * g / (k * k + g * g);
    const double dev_xs = std::abs(dt.x_start_new - formula) / std::abs(formula);
    const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = std::abs(deff_num) < 1e-6 && dev_xs < 1e-4;
    return {7, "delta potential: zero effective width, starting-point formula", pass,
            "numeric d_eff(thin limit)=" + fmt(deff_num) + " nm, |x_start_new-formula|/|formula|=" +
                fmt(dev_xs) + " [thin-limit -lambda' = " + fmt(-lp) + " nm = x_start_new/" +
                fmt(dt.x_start_new / -lp, 4) + "]",
            el};
}

struct Fig1Data {
    std::vector<double> ts, Tt, Rt, xtr, xref;
    double Tinf = 0.0, Rinf = 0.0;
    ExactGroupTimes ex;
    AsymptoticTimes as;
    double tau_free = 0.0;
};

inline Fig1Data fig1_run() {
    const PhysicalConstants pc;  // mass_ratio 0.067
    const double l0 = 10.0, E0 = 0.05;
    const double k0 = pc.wavenumber(E0);
    const auto bar = BarrierSpec::rectangular(200.0, 215.0, 0.2);
    const Spectrum spec = gaussian_spectrum(l0, k0, default_kgrid(l0, k0));
    const UniformGrid xg = make_xgrid(-720.0, 1150.0, 8193, bar.x_c());
    PacketEvolver ev(spec, bar, pc, xg);
    Fig1Data out;
    out.Tinf = ev.asymptotic_T();
    out.Rinf = ev.asymptotic_R();
    const double t1 = 0.86;
    const std::size_t n = 121;
    out.ts.resize(n);
    out.Tt.resize(n);
    out.Rt.resize(n);
    out.xtr.resize(n);
    out.xref.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t1 * static_cast<double>(i) / static_cast<double>(n - 1);
        out.ts[i] = t;
        const Snapshot str = ev.evolve(Kind::tr, t);
        const Snapshot sref = ev.evolve(Kind::ref, t);
        out.Tt[i] = norm_integral(str);
        out.Rt[i] = norm_integral(sref);
        out.xtr[i] = moments(str, out.Tt[i], pc)->x_mean;
        out.xref[i] = moments(sref, out.Rt[i], pc)->x_mean;
    }
    (void)norms(ev, t1);  // grid-leak guard at the end of the run
    // crossings refined on the sampled curves
    ExactGroupTimes ex;
    std::size_t ia = 0;
    const auto t_a = detail::first_crossing(ev, Kind::tr, out.ts, out.xtr, 200.0, 0, true,
                                            1e-4, &ia);
    if (t_a) {
        const auto t_b =
            detail::first_crossing(ev, Kind::tr, out.ts, out.xtr, 215.0, ia - 1, true, 1e-4);
        if (t_b) ex.tau_tr = *t_b - *t_a;
    }
    out.ex = ex;
    out.as = asymptotic_group_times(spec, bar, pc);
    out.tau_free = pc.mass() * 15.0 / (pc.hbar * k0);
    return out;
}

inline CriterionResult criterion_8(const Fig1Data& f) {
    const auto t0 = std::chrono::steady_clock::now();
    double dev_max = 0.0;
    for (std::size_t i = 0; i < f.ts.size(); ++i)
        dev_max = std::max(dev_max, std::abs(f.Tt[i] - (1.0 - f.Rt[i])) / f.Tt[i]);
    const bool a_ok = dev_max <= 0.05;
    const double tex = f.ex.tau_tr.value_or(-1.0);
    const double tas = f.as.tau_tr_as;
    const bool order_ok = f.ex.tau_tr && tex > 3.0 * f.tau_free && f.tau_free > tas;
    // paper values 0.155 / 0.01 / 0.025 ps, factor-1.5 bands
    auto in_band = [](double v, double center) {
        return v >= center / 1.5 && v <= center * 1.5;
    };
    const bool bands_ok =
        f.ex.tau_tr && in_band(tex, 0.155) && in_band(tas, 0.01) && in_band(f.tau_free, 0.025);
    const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = a_ok && order_ok && bands_ok;
    return {8, "Fig.-1 scenario: norm bookkeeping, time ordering, factor-1.5 bands", pass,
            std::string("(a) max|T-(1-R)|/T=") + fmt(dev_max) + (a_ok ? " <= 0.05" : " > 0.05") +
                "; (b) tau_ex=" + fmt(tex) + " >> tau_free=" + fmt(f.tau_free) +
                " > tau_as=" + fmt(tas) + (order_ok ? " ordered" : " NOT ordered") +
                "; (c) bands(0.155,0.01,0.025 x1.5): " + (bands_ok ? "in" : "OUT"),
            el};
}

inline CriterionResult criterion_9(const Fig1Data& f) {
    const auto t0 = std::chrono::steady_clock::now();
    double r_lo = f.Rt[0], r_hi = f.Rt[0];
    for (double r : f.Rt) {
        r_lo = std::min(r_lo, r);
        r_hi = std::max(r_hi, r);
    }
    const double rvar = (r_hi - r_lo) / r_hi;

    // free evolution vs the analytic spreading Gaussian
    const PhysicalConstants pc;
    const double l0 = 10.0, k0 = pc.wavenumber(0.05);
    const auto fbar = BarrierSpec::rectangular(200.0, 215.0, 0.0);
    const Spectrum spec = gaussian_spectrum(l0, k0, default_kgrid(l0, k0, 16385));
    const UniformGrid xg = make_xgrid(-120.0, 460.0, 4097, fbar.x_c());
    PacketEvolver ev(spec, fbar, pc, xg);
    double worst_l2 = 0.0;
    for (double t : {0.0, 0.25, 0.5}) {
        const Snapshot s = ev.evolve(Kind::full, t);
        double num = 0.0, den = 0.0;
        const double v0 = pc.velocity(k0);
        for (std::size_t i = 0; i < xg.count; ++i) {
            const double x = xg.point(i);
            const Complex alpha(l0 * l0, pc.hbar * t / (2.0 * pc.mass()));
            const Complex ref = std::pow(2.0 * l0 * l0 / M_PI, 0.25) /
                                std::sqrt(2.0 * alpha) *
                                std::exp(Complex(0.0, k0 * (x - 0.5 * v0 * t))) *
                                std::exp(-(x - v0 * t) * (x - v0 * t) / (4.0 * alpha));
            num += std::norm(s.psi[i] - ref);
            den += std::norm(ref);
        }
        worst_l2 = std::max(worst_l2, std::sqrt(num / den));
    }
    const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = rvar < 1e-6 && worst_l2 < 1e-6;
    return {9, "packet conservation: R(t) constant, free packet matches analytic Gaussian",
            pass, "R(t) relative variation=" + fmt(rvar) + ", free-packet rel L2=" + fmt(worst_l2),
            el};
}

inline CriterionResult criterion_10() {
    const auto t0 = std::chrono::steady_clock::now();
    const PhysicalConstants pc;
    SlitConfig cfg;
    cfg.half_separation = 27.0;
    cfg.slit_width = 10.0;
    cfg.k = 1.0;
    cfg.detector_distance = 15000.0;
    cfg.ygrid = UniformGrid(-4000.0, 4000.0, 1601);

    const MirrorReport rep =
        mirror_diagnostic(cfg, {0.1, 10.0, 500.0, cfg.detector_distance}, pc);
    const Field2D F = two_slit_field(cfg, cfg.detector_distance);
    const double n2 = plane_norm(F);
    const double nsplit = half_plane_norm(F, true) + half_plane_norm(F, false);
    const double add_dev = std::abs(n2 - nsplit) / n2;
    const Field2D g1 = one_slit_field(cfg, -cfg.half_separation, cfg.detector_distance);
    const Field2D g2 = one_slit_field(cfg, cfg.half_separation, cfg.detector_distance);
    const double mismatch = std::abs(n2 - 0.5 * (plane_norm(g1) + plane_norm(g2))) / n2;
    // fringe maxima around the axis
    std::vector<double> I(F.values.size());
    for (std::size_t i = 0; i < I.size(); ++i) I[i] = std::norm(F.values[i]);
    const double expect = M_PI * cfg.detector_distance / (cfg.k * cfg.half_separation);
    std::vector<double> maxima;
    for (std::size_t i = 1; i + 1 < I.size(); ++i) {
        const double y = F.ygrid.point(i);
        if (std::abs(y) < 1.6 * expect && I[i] > I[i - 1] && I[i] > I[i + 1]) {
            const double h = F.ygrid.spacing();
            maxima.push_back(y + 0.5 * h * (I[i - 1] - I[i + 1]) /
                                     (I[i - 1] - 2.0 * I[i] + I[i + 1]));
        }
    }
    double spacing_dev = 1.0;
    if (maxima.size() >= 2) {
        spacing_dev = 0.0;
        for (std::size_t i = 1; i < maxima.size(); ++i)
            spacing_dev = std::max(spacing_dev,
                                   std::abs((maxima[i] - maxima[i - 1]) / expect - 1.0));
    }
    const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = rep.max_evenness_residual < 1e-12 && rep.max_axis_current < 1e-12 &&
                      add_dev < 1e-12 && mismatch > 0.01 && spacing_dev < 0.02;
    return {10, "double slit: symmetry, partition additivity, norm mismatch, fringes", pass,
            "evenness=" + fmt(rep.max_evenness_residual) + ", J_y(0)=" +
                fmt(rep.max_axis_current) + ", additivity dev=" + fmt(add_dev) +
                ", one-slit-sum mismatch=" + fmt(mismatch) + ", fringe-spacing dev=" +
                fmt(spacing_dev),
            el};
}

// Digest of a representative computation mix, used for the determinism check.
inline std::string determinism_digest() {
    const PhysicalConstants pc;
    std::string out;
    char buf[40];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g;", v);
        out += buf;
    };
    const double k0 = pc.wavenumber(0.05);
    const auto bar = BarrierSpec::rectangular(200.0, 215.0, 0.2);
    const Spectrum spec = gaussian_spectrum(10.0, k0, default_kgrid(10.0, k0, 1025));
    const UniformGrid xg = make_xgrid(-200.0, 500.0, 2049, bar.x_c());
    PacketEvolver ev(spec, bar, pc, xg);
    const Snapshot s = ev.evolve(Kind::tr, 0.45);
    for (std::size_t i = 0; i < s.psi.size(); i += 97) {
        put(s.psi[i].real());
        put(s.psi[i].imag());
    }
    const ScanTable tab = hartman_scan(bar, ScanVariable::width,
                                       {4.0, 8.0, 12.0, 16.0, 20.0}, k0, pc);
    for (const auto& row : tab.rows)
        for (double v : row) put(v);
    SlitConfig cfg;
    cfg.half_separation = 27.0;
    cfg.slit_width = 10.0;
    cfg.k = 1.0;
    cfg.detector_distance = 500.0;
    cfg.ygrid = UniformGrid(-400.0, 400.0, 401);
    const Field2D f = two_slit_field(cfg, 120.0);
    for (std::size_t i = 0; i < f.values.size(); i += 13) {
        put(f.values[i].real());
        put(f.values[i].imag());
    }
    return out;
}

inline CriterionResult criterion_11() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t ambient = thread_count();
    set_thread_count(1);
    const std::string d1 = determinism_digest();
    set_thread_count(2);
    const std::string d2 = determinism_digest();
    const std::string d3 = determinism_digest();
    set_thread_count(ambient == 0 ? 0 : ambient);
    const bool pass = (d1 == d2) && (d2 == d3);
    const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {11, "determinism across repeated runs and worker counts", pass,
            std::string("1-thread vs 2-thread digests ") + (d1 == d2 ? "identical" : "DIFFER") +
                ", repeated run " + (d2 == d3 ? "identical" : "DIFFERS"),
            el};
}

}  // namespace acceptance

inline std::vector<CriterionResult> run_acceptance(bool verbose = false) {
    std::vector<CriterionResult> res;
    auto add = [&](CriterionResult r) {
        if (verbose)
            std::fprintf(stderr, "criterion %02d done in %.1f s\n", r.id, r.elapsed_s);
        res.push_back(std::move(r));
    };
    add(acceptance::criterion_1_2_3(1));
    add(acceptance::criterion_1_2_3(2));
    add(acceptance::criterion_1_2_3(3));
    add(acceptance::criterion_4());
    add(acceptance::criterion_5());
    add(acceptance::criterion_6());
    add(acceptance::criterion_7());
    {
        const auto t0 = std::chrono::steady_clock::now();
        const acceptance::Fig1Data f = acceptance::fig1_run();
        const double el =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        CriterionResult c8 = acceptance::criterion_8(f);
        c8.elapsed_s += el;
        c8.detail += std::string("; runtime within limit: ") + (c8.elapsed_s < 300.0 ? "yes" : "NO");
        c8.pass = c8.pass && c8.elapsed_s < 300.0;
        add(c8);
        add(acceptance::criterion_9(f));
    }
    add(acceptance::criterion_10());
    add(acceptance::criterion_11());
    return res;
}

inline std::string acceptance_report(const std::vector<CriterionResult>& res) {
    std::string out = "subscatter acceptance suite\n";
    std::size_t passed = 0;
    for (const auto& r : res) {
        char head[64];
        std::snprintf(head, sizeof head, "criterion %02d [%s] ", r.id,
                      r.pass ? "PASS" : "FAIL");
        out += head;
        out += r.title + "\n    " + r.detail + "\n";
        if (r.pass) ++passed;
    }
    out += "passed " + std::to_string(passed) + "/" + std::to_string(res.size()) + "\n";
    return out;
}

}  // namespace subscatter
