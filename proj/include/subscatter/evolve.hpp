#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "subscatter/barrier.hpp"
#include "subscatter/parallel.hpp"
#include "subscatter/quadrature.hpp"
#include "subscatter/spectrum.hpp"
#include "subscatter/subprocess.hpp"

namespace subscatter {

struct Snapshot {
    double t = 0.0;
    UniformGrid xgrid;
    std::vector<Complex> psi;
    Kind kind = Kind::full;
};

struct Moments {
    double x_mean;   // nm
    double p_mean;   // eV ps / nm
    double x2_mean;  // nm^2
};

struct Trajectory {
    std::vector<double> times;     // ps
    std::vector<double> centroid;  // nm
    std::vector<double> norm;      // dimensionless
};

// Builds an x-grid that contains x_c as a node: [xmin, xmin + n h] with
// h chosen from the requested span/count and x_c - xmin an exact multiple of h.
inline UniformGrid make_xgrid(double xmin, double xmax, std::size_t count_hint, double x_c) {
    if (!(x_c > xmin) || !(xmax > x_c)) throw ConfigError("xgrid: need xmin < x_c < xmax");
    const double h_target = (xmax - xmin) / static_cast<double>(count_hint - 1);
    const auto ic = static_cast<std::size_t>(std::ceil((x_c - xmin) / h_target));
    const double h = (x_c - xmin) / static_cast<double>(ic);
    auto count = ic + static_cast<std::size_t>(std::ceil((xmax - x_c) / h)) + 1;
    count = odd_count(count);
    return UniformGrid(xmin, xmin + h * static_cast<double>(count - 1), count);
}

// Spectral propagator: psi(x,t) = (2pi)^{-1/2} Int A(k) Phi_kind(x;k) e^{-iE t/hbar} dk
// over the k-grid. Stationary data is precomputed per k; snapshots then cost
// one phase rotation per (k, x) pair. Negative-k rows use the mirror image of
// the |k| state (full); their reflection field is identically zero.
class PacketEvolver {
public:
    PacketEvolver(Spectrum spectrum, BarrierSpec barrier, PhysicalConstants pc,
                  UniformGrid xgrid)
        : spec_(std::move(spectrum)),
          bar_(std::move(barrier)),
          pc_(pc),
          xg_(xgrid) {
        pc_.validate();
        build_rows();
        classify_grid();
    }

    const UniformGrid& xgrid() const { return xg_; }
    const Spectrum& spectrum() const { return spec_; }
    const BarrierSpec& barrier() const { return bar_; }
    const PhysicalConstants& constants() const { return pc_; }
    std::size_t xc_index() const { return ixc_; }

    // Asymptotic transmission coefficient Int |A|^2 T dk.
    double asymptotic_T() const {
        std::vector<double> f(spec_.kgrid.count, 0.0);
        for (const auto& r : rows_)
            if (r.st) f[r.index] = spec_.amplitudes[r.index] * spec_.amplitudes[r.index] *
                                   r.st->coeffs().T;
        return integrate(f, spec_.kgrid);
    }
    double asymptotic_R() const {
        std::vector<double> f(spec_.kgrid.count, 0.0);
        for (const auto& r : rows_)
            if (r.st) f[r.index] = spec_.amplitudes[r.index] * spec_.amplitudes[r.index] *
                                   r.st->coeffs().R;
        return integrate(f, spec_.kgrid);
    }

    Snapshot evolve(Kind kind, double t) const {
        Snapshot snap;
        snap.t = t;
        snap.xgrid = xg_;
        snap.kind = kind;
        snap.psi.assign(xg_.count, Complex(0.0, 0.0));

        const auto ph = phases(t);
        const int ki = static_cast<int>(kind);

        // plane-wave stretches: psi[i] = sum_j p_j e^{i kappa_j x_i} + q_j e^{-i kappa_j x_i}
        accumulate_plane(snap.psi, ph, ki, 0, n_left_, /*left=*/true);
        accumulate_plane(snap.psi, ph, ki, i_right_, xg_.count, /*left=*/false);

        // barrier interior from the cached stationary values
        if (n_left_ < i_right_) {
            ensure_interior(kind);
            const auto& cache = interior_[ki];
            const std::size_t n_int = i_right_ - n_left_;
            parallel_for_chunks(n_int, 512, [&](std::size_t lo, std::size_t hi) {
                for (std::size_t r = 0; r < rows_.size(); ++r) {
                    const Complex p = ph[r];
                    if (p == Complex(0.0, 0.0)) continue;
                    const Complex* row = cache.data() + r * n_int;
                    for (std::size_t i = lo; i < hi; ++i)
                        snap.psi[n_left_ + i] += p * row[i];
                }
            });
        }
        return snap;
    }

    // Field and derivative at a single point.
    PsiD at(Kind kind, double x, double t) const {
        const auto ph = phases(t);
        PsiD acc{Complex(0.0, 0.0), Complex(0.0, 0.0)};
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (ph[r] == Complex(0.0, 0.0)) continue;
            const PsiD f = stationary_at(rows_[r], kind, x);
            acc.psi += ph[r] * f.psi;
            acc.dpsi += ph[r] * f.dpsi;
        }
        return acc;
    }

    // One-sided field/derivative limits at x_c.
    PsiD side_limit(Kind kind, bool left_side, double t) const {
        const auto ph = phases(t);
        PsiD acc{Complex(0.0, 0.0), Complex(0.0, 0.0)};
        const auto& cache = side_cache(kind, left_side);
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            acc.psi += ph[r] * cache[r].psi;
            acc.dpsi += ph[r] * cache[r].dpsi;
        }
        return acc;
    }

private:
    struct Row {
        std::size_t index;                     // k-grid index
        double k;                              // signed
        double kappa;                          // |k|
        double w;                              // Simpson weight * h/3 * (2pi)^{-1/2} * A
        double E_over_hbar;                    // 1/ps
        std::shared_ptr<StationaryState> st;   // state at |k|
        bool mirrored;
        // plane-wave coefficients alpha e^{i kappa x} + beta e^{-i kappa x},
        // [kind][0]=left of a, [kind][1]=right of b
        std::array<std::array<std::array<Complex, 2>, 2>, 3> pw;
    };

    void build_rows() {
        const auto& kg = spec_.kgrid;
        double amax = 0.0;
        for (double a : spec_.amplitudes) amax = std::max(amax, std::abs(a));
        const double floor_amp = amax * 1e-18;
        const double a = bar_.a(), b = bar_.b();
        const double D = b - a;
        const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * M_PI);

        for (std::size_t j = 0; j < kg.count; ++j) {
            const double A = spec_.amplitudes[j];
            const double k = kg.point(j);
            if (k == 0.0 || std::abs(A) <= floor_amp) continue;
            Row r;
            r.index = j;
            r.k = k;
            r.kappa = std::abs(k);
            r.mirrored = k < 0.0;
            r.w = simpson_weight(j, kg.count) * kg.spacing() / 3.0 * inv_sqrt2pi * A;
            r.E_over_hbar = pc_.energy(r.kappa) / pc_.hbar;
            r.st = std::make_shared<StationaryState>(bar_, r.kappa, pc_);
            const auto& c = r.st->coeffs();
            const auto& amps = r.st->in_amplitudes();
            const double kp = r.kappa;
            const Complex e2ika = std::polar(1.0, 2.0 * kp * a);
            const Complex emikD = std::polar(1.0, -kp * D);
            auto& pw = r.pw;
            if (!r.mirrored) {
                pw[0][0] = {Complex(1.0, 0.0), c.b_out * e2ika};     // full, left
                pw[0][1] = {c.a_out * emikD, Complex(0.0, 0.0)};     // full, right
                pw[1][0] = {amps.A_tr_in, Complex(0.0, 0.0)};        // tr, left
                pw[1][1] = pw[0][1];                                 // tr, right
                pw[2][0] = {amps.A_ref_in, c.b_out * e2ika};         // ref, left
                pw[2][1] = {Complex(0.0, 0.0), Complex(0.0, 0.0)};   // ref, right
            } else {
                // mirror of the +|k| state through x_c, rephased so the
                // incident wave is exactly e^{ikx}
                const Complex beta_l = c.a_out * emikD;
                const Complex alpha_r = c.b_out * std::polar(1.0, -2.0 * kp * b);
                const Complex beta_r = Complex(1.0, 0.0);
                pw[0][0] = {Complex(0.0, 0.0), beta_l};
                pw[0][1] = {alpha_r, beta_r};
                pw[1][0] = pw[0][0];
                pw[1][1] = pw[0][1];
                pw[2][0] = {Complex(0.0, 0.0), Complex(0.0, 0.0)};
                pw[2][1] = {Complex(0.0, 0.0), Complex(0.0, 0.0)};
            }
            rows_.push_back(std::move(r));
        }
        if (rows_.empty()) throw ConfigError("evolver: spectrum has no usable components");
    }

    void classify_grid() {
        const double a = bar_.a(), b = bar_.b(), xc = bar_.x_c();
        n_left_ = 0;
        while (n_left_ < xg_.count && xg_.point(n_left_) <= a) ++n_left_;
        i_right_ = n_left_;
        while (i_right_ < xg_.count && xg_.point(i_right_) < b) ++i_right_;
        ixc_ = xg_.count;
        const double tol = 1e-9 * xg_.spacing();
        for (std::size_t i = 0; i < xg_.count; ++i) {
            if (std::abs(xg_.point(i) - xc) <= tol) {
                ixc_ = i;
                break;
            }
        }
        if (xc > xg_.start && xc < xg_.stop && ixc_ == xg_.count)
            throw ConfigError("evolver: x-grid must contain x_c as a node");
    }

    std::vector<Complex> phases(double t) const {
        std::vector<Complex> ph(rows_.size());
        for (std::size_t r = 0; r < rows_.size(); ++r)
            ph[r] = std::polar(rows_[r].w, -rows_[r].E_over_hbar * t);
        return ph;
    }

    void accumulate_plane(std::vector<Complex>& out, const std::vector<Complex>& ph,
                          int kind, std::size_t lo, std::size_t hi, bool left) const {
        if (lo >= hi) return;
        const double h = xg_.spacing();
        parallel_for_chunks(hi - lo, 1024, [&](std::size_t clo, std::size_t chi) {
            const std::size_t i0 = lo + clo;
            const double x0 = xg_.point(i0);
            const std::size_t n = chi - clo;
            std::vector<double> acc_re(n, 0.0), acc_im(n, 0.0);
            for (std::size_t r = 0; r < rows_.size(); ++r) {
                const Row& row = rows_[r];
                const Complex phr = ph[r];
                const Complex& al = row.pw[kind][left ? 0 : 1][0];
                const Complex& be = row.pw[kind][left ? 0 : 1][1];
                if (al == Complex(0.0, 0.0) && be == Complex(0.0, 0.0)) continue;
                const Complex p = phr * al;
                const Complex q = phr * be;
                const double pr = p.real(), pi = p.imag();
                const double qr = q.real(), qi = q.imag();
                double er = std::cos(row.kappa * x0), ei = std::sin(row.kappa * x0);
                const double sr = std::cos(row.kappa * h), si = std::sin(row.kappa * h);
                for (std::size_t i = 0; i < n; ++i) {
                    acc_re[i] += pr * er - pi * ei + qr * er + qi * ei;
                    acc_im[i] += pr * ei + pi * er - qr * ei + qi * er;
                    const double tr = er * sr - ei * si;
                    ei = er * si + ei * sr;
                    er = tr;
                }
            }
            for (std::size_t i = 0; i < n; ++i) out[i0 + i] = Complex(acc_re[i], acc_im[i]);
        });
    }

    PsiD stationary_at(const Row& row, Kind kind, double x) const {
        if (row.mirrored) {
            if (kind == Kind::ref) return {Complex(0.0, 0.0), Complex(0.0, 0.0)};
            const PsiD f = row.st->full_at(2.0 * bar_.x_c() - x);
            const Complex ph = std::polar(1.0, -2.0 * row.kappa * bar_.x_c());
            return {ph * f.psi, -(ph * f.dpsi)};
        }
        switch (kind) {
            case Kind::full: return row.st->full_at(x);
            case Kind::tr: return row.st->tr_at(x);
            case Kind::ref: return row.st->ref_at(x);
        }
        return {};
    }

    void ensure_interior(Kind kind) const {
        const int ki = static_cast<int>(kind);
        if (!interior_[ki].empty() || n_left_ >= i_right_) return;
        const std::size_t n_int = i_right_ - n_left_;
        auto& cache = interior_[ki];
        cache.assign(rows_.size() * n_int, Complex(0.0, 0.0));
        parallel_for_chunks(rows_.size(), 64, [&](std::size_t rlo, std::size_t rhi) {
            for (std::size_t r = rlo; r < rhi; ++r) {
                for (std::size_t i = 0; i < n_int; ++i) {
                    const double x = xg_.point(n_left_ + i);
                    cache[r * n_int + i] = stationary_at(rows_[r], kind, x).psi;
                }
            }
        });
    }

    const std::vector<PsiD>& side_cache(Kind kind, bool left_side) const {
        auto& cache = side_[static_cast<int>(kind)][left_side ? 0 : 1];
        if (!cache.empty()) return cache;
        cache.resize(rows_.size());
        const double xc = bar_.x_c();
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const auto& row = rows_[r];
            if (row.mirrored) {
                if (kind == Kind::ref) {
                    cache[r] = {Complex(0.0, 0.0), Complex(0.0, 0.0)};
                } else {
                    const PsiD f = row.st->full_at(xc);
                    const Complex ph = std::polar(1.0, -2.0 * row.kappa * xc);
                    cache[r] = {ph * f.psi, -(ph * f.dpsi)};
                }
                continue;
            }
            switch (kind) {
                case Kind::full: cache[r] = row.st->full_at(xc); break;
                case Kind::tr:
                    cache[r] = left_side ? row.st->tr_left_limit_at_xc() : row.st->full_at(xc);
                    break;
                case Kind::ref:
                    cache[r] = left_side ? row.st->ref_left_limit_at_xc()
                                         : PsiD{Complex(0.0, 0.0), Complex(0.0, 0.0)};
                    break;
            }
        }
        return cache;
    }

    Spectrum spec_;
    BarrierSpec bar_;
    PhysicalConstants pc_;
    UniformGrid xg_;
    std::vector<Row> rows_;
    std::size_t n_left_ = 0;   // first index past the left stretch
    std::size_t i_right_ = 0;  // first index of the right stretch
    std::size_t ixc_ = 0;
    mutable std::array<std::vector<Complex>, 3> interior_;
    mutable std::array<std::array<std::vector<PsiD>, 2>, 3> side_;
};

// --- snapshot reductions ---

inline double norm_integral(const Snapshot& s) {
    std::vector<double> d(s.psi.size());
    for (std::size_t i = 0; i < s.psi.size(); ++i) d[i] = std::norm(s.psi[i]);
    return integrate(d, s.xgrid);
}

// (T(t), R(t)) from matched tr/ref snapshots, with a grid-leak guard.
struct PacketNorms {
    double T;
    double R;
};

inline double edge_leak_estimate(const Snapshot& s, double l0) {
    return (std::norm(s.psi.front()) + std::norm(s.psi.back())) * 10.0 * l0;
}

inline PacketNorms norms(const PacketEvolver& ev, double t) {
    const Snapshot tr = ev.evolve(Kind::tr, t);
    const Snapshot ref = ev.evolve(Kind::ref, t);
    PacketNorms n{norm_integral(tr), norm_integral(ref)};
    const double leak = edge_leak_estimate(tr, ev.spectrum().l0) +
                        edge_leak_estimate(ref, ev.spectrum().l0);
    if (leak > 1e-6 * (n.T + n.R))
        throw GridTooSmallError("norms: packet mass leaking past the x-grid");
    return n;
}

// Grid moments of a snapshot; empty when the normalizer vanishes.
inline std::optional<Moments> moments(const Snapshot& s, double normalizer,
                                      const PhysicalConstants& pc) {
    if (!(normalizer > 1e-14)) return std::nullopt;
    const std::size_t n = s.psi.size();
    const double h = s.xgrid.spacing();
    std::vector<double> dens(n), xdens(n), x2dens(n), pdens(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = s.xgrid.point(i);
        dens[i] = std::norm(s.psi[i]);
        xdens[i] = x * dens[i];
        x2dens[i] = x * x * dens[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        Complex dpsi;
        if (i >= 2 && i + 2 < n) {
            dpsi = (s.psi[i - 2] - 8.0 * s.psi[i - 1] + 8.0 * s.psi[i + 1] - s.psi[i + 2]) /
                   (12.0 * h);
        } else if (i == 0) {
            dpsi = (s.psi[1] - s.psi[0]) / h;
        } else if (i + 1 == n) {
            dpsi = (s.psi[n - 1] - s.psi[n - 2]) / h;
        } else {
            dpsi = (s.psi[i + 1] - s.psi[i - 1]) / (2.0 * h);
        }
        pdens[i] = std::imag(std::conj(s.psi[i]) * dpsi);
    }
    Moments m;
    m.x_mean = integrate(xdens, s.xgrid) / normalizer;
    m.x2_mean = integrate(x2dens, s.xgrid) / normalizer;
    m.p_mean = pc.hbar * integrate(pdens, s.xgrid) / normalizer;
    return m;
}

inline Trajectory compute_trajectory(const PacketEvolver& ev, Kind kind, double t0,
                                     double t1, std::size_t steps, double normalizer) {
    Trajectory tr;
    if (!(t1 > t0) || steps < 2) throw ConfigError("trajectory: bad time range");
    tr.times.resize(steps);
    tr.centroid.resize(steps);
    tr.norm.resize(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(steps - 1);
        const Snapshot s = ev.evolve(kind, t);
        tr.times[i] = t;
        tr.norm[i] = norm_integral(s);
        const auto m = moments(s, normalizer, ev.constants());
        tr.centroid[i] = m ? m->x_mean : std::numeric_limits<double>::quiet_NaN();
    }
    return tr;
}

// |dT/dt - [I_tr(x_c+0) - I_tr(x_c-0)]| diagnostics.
struct FluxBalance {
    double dT_dt;
    double current_jump;
    double residual;
};

inline FluxBalance flux_balance(const PacketEvolver& ev, double t, double dt) {
    const double Tp = norm_integral(ev.evolve(Kind::tr, t + dt));
    const double Tm = norm_integral(ev.evolve(Kind::tr, t - dt));
    const double dT = (Tp - Tm) / (2.0 * dt);
    const PsiD right = ev.side_limit(Kind::tr, false, t);
    const PsiD left = ev.side_limit(Kind::tr, true, t);
    const double jump = current(right, ev.constants()) - current(left, ev.constants());
    return {dT, jump, std::abs(dT - jump)};
}

// d<p>/dt vs <-dV/dx> plus the midpoint boundary term, both sides normalized
// by the same subprocess norm.
struct MomentumRate {
    double lhs;
    double rhs;
    double residual;
};

inline MomentumRate momentum_rate_check(const PacketEvolver& ev, Kind kind, double t,
                                        double dt, double normalizer) {
    if (ev.barrier().is<Delta>())
        throw DomainError("momentum_rate_check: needs a piecewise-constant barrier");
    if (!(normalizer > 1e-14))
        throw DomainError("momentum_rate_check: subprocess norm vanished");
    const auto& pc = ev.constants();
    auto pmean = [&](double tt) {
        const Snapshot s = ev.evolve(kind, tt);
        return moments(s, normalizer, pc)->p_mean;
    };
    const double lhs = (pmean(t + dt) - pmean(t - dt)) / (2.0 * dt);

    // <-dV/dx> = -sum over potential steps of dV |psi(edge)|^2
    double force = 0.0;
    double left_edge = ev.barrier().a();
    double v_prev = 0.0;
    for (const auto& seg : ev.barrier().segments()) {
        force -= (seg.V - v_prev) * std::norm(ev.at(kind, left_edge, t).psi);
        v_prev = seg.V;
        left_edge += seg.width;
    }
    force -= (0.0 - v_prev) * std::norm(ev.at(kind, left_edge, t).psi);
    force /= normalizer;

    const double hb2_2m = pc.hbar * pc.hbar / (2.0 * pc.mass());
    double boundary = 0.0;
    if (kind == Kind::ref) {
        const PsiD lft = ev.side_limit(Kind::ref, true, t);
        boundary = -hb2_2m * std::norm(lft.dpsi) / normalizer;
    } else if (kind == Kind::tr) {
        const PsiD lft = ev.side_limit(Kind::tr, true, t);
        const PsiD rgt = ev.side_limit(Kind::tr, false, t);
        boundary = hb2_2m * (std::norm(rgt.dpsi) - std::norm(lft.dpsi)) / normalizer;
    }
    const double rhs = force + boundary;
    return {lhs, rhs, std::abs(lhs - rhs)};
}

// Spec-level convenience wrapper.
inline Snapshot evolve(const Spectrum& spectrum, const BarrierSpec& barrier, Kind kind,
                       const UniformGrid& xgrid, double t, const PhysicalConstants& pc) {
    return PacketEvolver(spectrum, barrier, pc, xgrid).evolve(kind, t);
}

}  // namespace subscatter
