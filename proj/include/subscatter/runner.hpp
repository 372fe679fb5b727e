#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "subscatter/io/csv.hpp"
#include "subscatter/io/svg.hpp"
#include "subscatter/scenario.hpp"
#include "subscatter/timing.hpp"
#include "subscatter/validate.hpp"

namespace subscatter {

struct RunResult {
    int exit_code = 0;
    std::vector<std::string> files;
};

namespace detail {

struct Emitter {
    const Scenario& sc;
    RunResult& result;

    bool wants(const std::string& fmt) const { return sc.formats.count(fmt) > 0; }

    std::string path(const std::string& name) const {
        return (std::filesystem::path(sc.out_dir) / name).string();
    }

    std::vector<std::string> header() const {
        return {"subscatter v" + std::string("1.0.0"), "scenario " + scenario_hash(sc),
                "mode " + std::string(mode_name(sc.mode))};
    }

    void csv(const std::string& name, CsvTable t) const {
        if (!wants("csv")) return;
        t.comments = header();
        write_csv(path(name), t);
        result.files.push_back(path(name));
    }

    void svg(const std::string& name, const std::string& content) const {
        if (!wants("svg")) return;
        write_text_file(path(name), content);
        result.files.push_back(path(name));
    }

    void json(const std::string& name, const nlohmann::json& j) const {
        if (!wants("json")) return;
        write_text_file(path(name), j.dump(2) + "\n");
        result.files.push_back(path(name));
    }
};

inline void set_optional(nlohmann::json& j, const char* key, const std::optional<double>& v) {
    if (v)
        j[key] = *v;
    else
        j[key] = nullptr;
}

inline nlohmann::json timing_to_json(const TimingReport& r) {
    nlohmann::json j;
    set_optional(j, "tau_tr_exact", r.tau_tr_exact);
    set_optional(j, "tau_ref_exact", r.tau_ref_exact);
    j["tau_tr_as"] = r.tau_tr_as;
    set_optional(j, "tau_ref_as", r.tau_ref_as);
    j["d_eff_tr"] = r.d_eff_tr;
    set_optional(j, "d_eff_ref", r.d_eff_ref);
    j["x_start_tr"] = r.x_start_tr;
    set_optional(j, "x_start_ref", r.x_start_ref);
    j["tau_tr_dwell"] = r.tau_tr_dwell;
    set_optional(j, "tau_ref_dwell", r.tau_ref_dwell);
    set_optional(j, "tau_tr_larmor", r.tau_tr_larmor);
    set_optional(j, "tau_ref_larmor", r.tau_ref_larmor);
    j["cmt_phase"] = r.cmt_phase;
    j["cmt_dwell"] = r.cmt_dwell;
    j["tau_free"] = r.tau_free;
    return j;
}

inline double packet_horizon(const Scenario& sc) {
    if (sc.grids.t_stop) return *sc.grids.t_stop;
    const double v0 = sc.physics.velocity(sc.central_k());
    return 1.3 * (sc.barrier->b() + 8.0 * sc.l0) / v0;
}

inline UniformGrid packet_xgrid(const Scenario& sc, double horizon) {
    const double v0 = sc.physics.velocity(sc.central_k());
    const double spread = std::hypot(sc.l0, 0.5 / sc.l0 * sc.physics.hbar * horizon /
                                                (2.0 * sc.physics.mass() * sc.l0) *
                                                2.0 * sc.l0 * sc.l0);
    const double xmin = sc.grids.x_min.value_or(-v0 * horizon - 10.0 * spread);
    const double xmax =
        sc.grids.x_max.value_or(sc.barrier->b() + v0 * horizon + 10.0 * spread);
    return make_xgrid(xmin, xmax, sc.grids.x_count, sc.barrier->x_c());
}

}  // namespace detail

inline void run_stationary(const Scenario& sc, detail::Emitter& out) {
    const double k0 = sc.central_k();
    const auto& bar = *sc.barrier;
    CsvTable t;
    t.columns = {"k", "T", "R", "J", "lambda", "d_eff", "x_start",
                 "tau_tr_dwell", "tau_ref_dwell", "tau_ph", "cmt_dwell"};
    const UniformGrid kg(k0 / 4.0, 2.5 * k0, 401);
    for (std::size_t i = 0; i < kg.count; ++i) {
        const double k = kg.point(i);
        StationaryState st(bar, k, sc.physics);
        const auto& c = st.coeffs();
        const PhaseDerivs pd = phase_derivatives(bar, k, sc.physics);
        const DwellTimes dw = dwell_times(bar, k, sc.physics);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        t.rows.push_back({k, c.T, c.R, c.J, c.lambda.value_or(nan), pd.Jp - pd.lp, -pd.lp,
                          dw.tau_tr, dw.tau_ref.value_or(nan),
                          cmt_phase_time_any(bar, k, sc.physics),
                          cmt_dwell_quadrature(bar, k, sc.physics)});
    }
    out.csv("stationary.csv", t);
    out.svg("stationary.svg",
            emit_svg(t, {"transmission and reflection", "k (1/nm)", "probability"},
                     {"T", "R"}));
}

inline void run_packet(const Scenario& sc, detail::Emitter& out) {
    const double k0 = sc.central_k();
    const auto& bar = *sc.barrier;
    const double horizon = detail::packet_horizon(sc);
    const Spectrum spec = gaussian_spectrum(sc.l0, k0, default_kgrid(sc.l0, k0, sc.grids.k_count));
    const UniformGrid xg = detail::packet_xgrid(sc, horizon);
    PacketEvolver ev(spec, bar, sc.physics, xg);
    const double v0 = sc.physics.velocity(k0);

    CsvTable traj;
    traj.columns = {"t", "centroid_tr", "centroid_ref", "norm_tr", "norm_ref",
                    "centroid_free"};
    const std::size_t n = sc.grids.t_samples;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = sc.grids.t_start +
                         (horizon - sc.grids.t_start) * static_cast<double>(i) /
                             static_cast<double>(n - 1);
        const Snapshot str = ev.evolve(Kind::tr, t);
        const Snapshot sref = ev.evolve(Kind::ref, t);
        const double Tt = norm_integral(str);
        const double Rt = norm_integral(sref);
        const auto mtr = moments(str, Tt, sc.physics);
        const auto mref = moments(sref, Rt, sc.physics);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        traj.rows.push_back({t, mtr ? mtr->x_mean : nan, mref ? mref->x_mean : nan, Tt, Rt,
                             v0 * t});
    }
    out.csv("trajectory.csv", traj);

    SvgSeries str_series{"centroid_tr", {}, {}, "#1f6fb2", false, true};
    SvgSeries free_series{"free packet", {}, {}, "#c23b22", true, false};
    for (const auto& row : traj.rows) {
        str_series.x.push_back(row[0]);
        str_series.y.push_back(row[1]);
        free_series.x.push_back(row[0]);
        free_series.y.push_back(row[5]);
    }
    out.svg("trajectory.svg",
            render_svg({str_series, free_series},
                       {"transmitted centroid vs free packet", "t (ps)", "x (nm)"}));

    for (Kind kind : {Kind::full, Kind::tr, Kind::ref}) {
        const Snapshot s = ev.evolve(kind, horizon);
        CsvTable snap;
        snap.columns = {"x", "re", "im", "|psi|2"};
        for (std::size_t i = 0; i < s.psi.size(); ++i)
            snap.rows.push_back({s.xgrid.point(i), s.psi[i].real(), s.psi[i].imag(),
                                 std::norm(s.psi[i])});
        out.csv(std::string("snapshot_") + kind_name(kind) + ".csv", snap);
    }
}

inline TimingReport assemble_timing_report(const Scenario& sc) {
    const double k0 = sc.central_k();
    const auto& bar = *sc.barrier;
    const auto& pc = sc.physics;
    TimingReport r;
    const DwellTimes dw = dwell_times(bar, k0, pc);
    r.tau_tr_dwell = dw.tau_tr;
    r.tau_ref_dwell = dw.tau_ref;
    const Spectrum spec = gaussian_spectrum(sc.l0, k0, default_kgrid(sc.l0, k0, sc.grids.k_count));
    const AsymptoticTimes as = asymptotic_group_times(spec, bar, pc);
    r.tau_tr_as = as.tau_tr_as;
    r.tau_ref_as = as.tau_ref_as;
    r.d_eff_tr = as.d_eff_tr;
    r.d_eff_ref = as.d_eff_ref;
    r.x_start_tr = as.x_start_tr;
    r.x_start_ref = as.x_start_ref;
    const LarmorTimes lt = larmor_times(spec, bar, pc);
    r.tau_tr_larmor = lt.tau_tr;
    r.tau_ref_larmor = lt.tau_ref;
    r.cmt_phase = cmt_phase_time_any(bar, k0, pc);
    r.cmt_dwell = cmt_dwell_quadrature(bar, k0, pc);
    r.tau_free = pc.mass() * bar.width() / (pc.hbar * k0);
    const double horizon = detail::packet_horizon(sc);
    PacketEvolver ev(spec, bar, pc, detail::packet_xgrid(sc, horizon));
    const ExactGroupTimes ex =
        exact_group_times(ev, sc.grids.t_start, horizon, sc.grids.t_samples);
    r.tau_tr_exact = ex.tau_tr;
    r.tau_ref_exact = ex.tau_ref;
    return r;
}

inline void run_times(const Scenario& sc, detail::Emitter& out) {
    const TimingReport r = assemble_timing_report(sc);
    out.json("times.json", detail::timing_to_json(r));
    CsvTable t;
    t.columns = {"tau_tr_exact", "tau_tr_as", "tau_tr_dwell", "tau_free", "cmt_phase",
                 "cmt_dwell"};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    t.rows.push_back({r.tau_tr_exact.value_or(nan), r.tau_tr_as, r.tau_tr_dwell, r.tau_free,
                      r.cmt_phase, r.cmt_dwell});
    out.csv("times.csv", t);
}

inline void run_scan(const Scenario& sc, detail::Emitter& out) {
    const double k0 = sc.central_k();
    std::vector<double> values;
    for (std::size_t i = 0; i < sc.scan.steps; ++i)
        values.push_back(sc.scan.from + (sc.scan.to - sc.scan.from) * static_cast<double>(i) /
                                            static_cast<double>(sc.scan.steps - 1));
    const ScanVariable var =
        sc.scan.variable == "l" ? ScanVariable::gap : ScanVariable::width;
    const ScanTable st = hartman_scan(*sc.barrier, var, values, k0, sc.physics);
    CsvTable t;
    t.columns = st.columns;
    t.rows = st.rows;
    out.csv("scan.csv", t);
    out.svg("scan.svg", emit_svg(t, {"characteristic times", sc.scan.variable + " (nm)",
                                     "time (ps)"},
                                 {"tau_ph", "cmt_dwell", "tau_tr_dwell"}));
}

inline void run_doubleslit(const Scenario& sc, detail::Emitter& out) {
    SlitConfig cfg;
    cfg.half_separation = sc.slits.a;
    cfg.slit_width = sc.slits.d;
    cfg.k = sc.slits.k;
    cfg.detector_distance = sc.slits.L;
    cfg.ygrid = UniformGrid(-sc.slits.y_half, sc.slits.y_half, odd_count(sc.slits.y_count));
    cfg.validate();

    const Field2D F = two_slit_field(cfg, cfg.detector_distance);
    CsvTable intensity;
    intensity.columns = {"y", "intensity"};
    for (std::size_t i = 0; i < F.values.size(); ++i)
        intensity.rows.push_back({F.ygrid.point(i), std::norm(F.values[i])});
    out.csv("intensity.csv", intensity);
    out.svg("intensity.svg", emit_svg(intensity, {"detector intensity", "y (nm)",
                                                  "|psi|^2"},
                                      {"intensity"}));

    CsvTable field;
    field.columns = {"y", "re", "im"};
    for (std::size_t i = 0; i < F.values.size(); ++i)
        field.rows.push_back({F.ygrid.point(i), F.values[i].real(), F.values[i].imag()});
    out.csv("field.csv", field);

    CsvTable diag;
    diag.columns = {"plane", "evenness_residual", "axis_current", "flux",
                    "norm", "half_norm_sum"};
    for (double x : {0.1 / cfg.k, 10.0 / cfg.k, cfg.detector_distance / 10.0,
                     cfg.detector_distance}) {
        const MirrorReport rep = mirror_diagnostic(cfg, {x}, sc.physics);
        const Field2D f = two_slit_field(cfg, x);
        diag.rows.push_back({x, rep.max_evenness_residual, rep.max_axis_current,
                             plane_flux(f, sc.physics), plane_norm(f),
                             half_plane_norm(f, true) + half_plane_norm(f, false)});
    }
    out.csv("diagnostics.csv", diag);
}

inline int run_validate(const Scenario& sc, detail::Emitter& out) {
    const auto res = run_acceptance(true);
    const std::string report = acceptance_report(res);
    write_text_file(out.path("validate_report.txt"), report);
    out.result.files.push_back(out.path("validate_report.txt"));
    std::fputs(report.c_str(), stdout);
    for (const auto& r : res)
        if (!r.pass) return 1;
    return 0;
}

inline RunResult run_scenario(const Scenario& sc) {
    sc.validate();
    RunResult result;
    std::filesystem::create_directories(sc.out_dir);
    detail::Emitter out{sc, result};
    switch (sc.mode) {
        case RunMode::stationary: run_stationary(sc, out); break;
        case RunMode::packet: run_packet(sc, out); break;
        case RunMode::times: run_times(sc, out); break;
        case RunMode::scan: run_scan(sc, out); break;
        case RunMode::doubleslit: run_doubleslit(sc, out); break;
        case RunMode::validate: result.exit_code = run_validate(sc, out); break;
    }
    return result;
}

}  // namespace subscatter
