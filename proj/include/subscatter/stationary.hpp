#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "subscatter/barrier.hpp"
#include "subscatter/constants.hpp"
#include "subscatter/errors.hpp"

namespace subscatter {

using Complex = std::complex<double>;

// Wavefunction value and x-derivative at a point.
struct PsiD {
    Complex psi;
    Complex dpsi;
};

// Odd/even real solutions about x_c, evaluated at one point.
struct RealBasis {
    double u, du;
    double v, dv;
    double kappa_norm;  // Wronskian du*v - dv*u
};

struct QPCoeffs {
    Complex Q;  // du/dx + i k u at x = b
    Complex P;  // dv/dx + i k v at x = b
};

// Per-k stationary scattering data.
struct ScatteringCoeffs {
    double k = 0.0;          // 1/nm
    Complex a_out, b_out;    // outgoing transmitted / reflected amplitudes
    Complex a_full, b_full;  // barrier-region expansion of the full state
    double T = 0.0, R = 0.0;
    double J = 0.0;                  // arg a_out
    std::optional<double> lambda;    // arg A_ref_in; empty when R ~ 0
    double F = 0.0;                  // reflection phase, identically 0 (symmetric barriers)
    double kappa = 0.0;              // local wavenumber at x_c (Wronskian constant)
    double kappa0 = 0.0;             // sqrt(2 m Vmax) / hbar
};

// Causal incoming amplitudes of the transmission/reflection subprocesses.
struct InAmplitudes {
    Complex A_tr_in;
    Complex A_ref_in;
    std::optional<double> lambda;
};

constexpr double kNoReflectionEps = 1e-14;  // R below this: no reflection subprocess

namespace detail {

// cosh(sqrt(w)) and sinh(sqrt(w))/sqrt(w) as even functions of the signed
// square w = q*dx^2 (w < 0 gives the trigonometric branch). Values carry a
// shared power-of-two exponent so huge evanescent segments cannot overflow.
struct ChSh {
    double ch;
    double sh;
    int e2;
};

inline ChSh chsh(double w) {
    if (w == 0.0) return {1.0, 1.0, 0};
    if (w < 0.0) {
        const double t = std::sqrt(-w);
        return {std::cos(t), std::sin(t) / t, 0};
    }
    const double t = std::sqrt(w);
    if (t <= 690.0) return {std::cosh(t), std::sinh(t) / t, 0};
    // cosh ~ sinh ~ exp(t)/2 beyond double range; split off a 2^e2 factor
    static const double log2e = 1.4426950408889634;
    const int e2 = static_cast<int>(t * log2e) - 40;
    const double m = std::exp(t - static_cast<double>(e2) * 0.6931471805599453);
    return {0.5 * m, 0.5 * m / t, e2};
}

// (f, f') with a shared power-of-two scale; f'' = q f segment solutions.
template <typename T>
struct ScaledPair {
    T f{};
    T fp{};
    int e2 = 0;

    void renorm() {
        const double m = std::max(std::abs(f), std::abs(fp));
        if (m == 0.0 || !std::isfinite(m)) return;
        if (m > 1e150 || m < 1e-150) {
            int ex = 0;
            std::frexp(m, &ex);
            f = std::ldexp(f, -ex);
            fp = std::ldexp(fp, -ex);
            e2 += ex;
        }
    }
};

template <>
struct ScaledPair<Complex> {
    Complex f{};
    Complex fp{};
    int e2 = 0;

    void renorm() {
        const double m = std::max({std::abs(f.real()), std::abs(f.imag()),
                                   std::abs(fp.real()), std::abs(fp.imag())});
        if (m == 0.0 || !std::isfinite(m)) return;
        if (m > 1e150 || m < 1e-150) {
            int ex = 0;
            std::frexp(m, &ex);
            f = {std::ldexp(f.real(), -ex), std::ldexp(f.imag(), -ex)};
            fp = {std::ldexp(fp.real(), -ex), std::ldexp(fp.imag(), -ex)};
            e2 += ex;
        }
    }
};

// Advance (f, f') by dx through constant q = (V - E)/kf; dx may be negative.
template <typename T>
ScaledPair<T> advance(const ScaledPair<T>& y, double q, double dx) {
    const ChSh cs = chsh(q * dx * dx);
    ScaledPair<T> out;
    out.f = y.f * cs.ch + y.fp * (dx * cs.sh);
    out.fp = y.f * (q * dx * cs.sh) + y.fp * cs.ch;
    out.e2 = y.e2 + cs.e2;
    out.renorm();
    return out;
}

inline Complex ldexp_c(Complex z, int e) {
    return {std::ldexp(z.real(), e), std::ldexp(z.imag(), e)};
}

// Complex coefficient with a power-of-two exponent.
struct ScaledC {
    Complex m{};
    int e2 = 0;
};

struct SegmentQ {
    double x_left;
    double width;
    double q;  // (V - E)/kf
};

}  // namespace detail

// All per-(barrier, k) stationary machinery: the odd/even basis, the edge
// coefficients, and numerically stable evaluators for the full state and the
// matched transmission/reflection fields. Interior solutions are always
// propagated in their growing direction, so opaque barriers stay accurate.
class StationaryState {
public:
    StationaryState(const BarrierSpec& barrier, double k, const PhysicalConstants& pc)
        : bar_(barrier), pc_(pc), k_(k) {
        if (!(k > 0.0)) throw DomainError("stationary: k must be positive");
        a_ = bar_.a();
        b_ = bar_.b();
        xc_ = bar_.x_c();
        E_ = pc_.energy(k_);
        if (bar_.is<Delta>()) {
            build_delta();
        } else {
            build_layout();
            build_tables();
            build_coeffs();
        }
    }

    const ScatteringCoeffs& coeffs() const { return coeffs_; }
    const InAmplitudes& in_amplitudes() const { return amps_; }
    double k() const { return k_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double x_c() const { return xc_; }
    const PhysicalConstants& constants() const { return pc_; }
    const BarrierSpec& barrier() const { return bar_; }

    // u, v and derivatives at x inside [a, b].
    RealBasis basis_at(double x) const {
        require_interior(x);
        auto [wb, v] = basis_pair_at(x);
        const double kc = coeffs_.kappa;
        RealBasis rb;
        rb.u = kc * std::ldexp(wb.f, wb.e2);
        rb.du = kc * std::ldexp(wb.fp, wb.e2);
        rb.v = std::ldexp(v.f, v.e2);
        rb.dv = std::ldexp(v.fp, v.e2);
        rb.kappa_norm = kc;
        return rb;
    }

    QPCoeffs qp() const {
        if (bar_.is<Delta>()) throw DomainError("qp: undefined for delta barrier");
        const double kc = coeffs_.kappa;
        QPCoeffs qp;
        qp.Q = detail::ldexp_c(Complex(wb_b_.fp, k_ * wb_b_.f) * kc, wb_b_.e2);
        qp.P = detail::ldexp_c(Complex(v_b_.fp, k_ * v_b_.f), v_b_.e2);
        return qp;
    }

    // Full stationary state anywhere on the axis.
    PsiD full_at(double x) const {
        if (bar_.is<Delta>()) {
            if (x <= a_) return left_wave(Complex(1.0, 0.0), coeffs_.b_out, x);
            return right_wave(coeffs_.a_out, x);
        }
        if (x <= a_) return left_wave(Complex(1.0, 0.0), coeffs_.b_out, x);
        if (x >= b_) return right_wave(coeffs_.a_out, x);
        auto pair = eval_from_table(full_table_, x, /*anchored_right=*/true);
        return apply_coeff(full_coeff_, pair);
    }

    // Matched transmission field: Psi_tr left of x_c, Psi_full right of it.
    PsiD tr_at(double x) const {
        if (x >= xc_) return full_at(x);
        if (x <= a_) return left_wave(amps_.A_tr_in, Complex(0.0, 0.0), x);
        auto pair = eval_from_table(tr_table_, x, /*anchored_right=*/false);
        return apply_coeff(tr_coeff_, pair);
    }

    // One-sided limits of the matched fields at x_c (the full state is
    // continuous there; tr/ref derivatives are not).
    PsiD tr_left_limit_at_xc() const {
        if (bar_.is<Delta>()) return left_wave(amps_.A_tr_in, Complex(0.0, 0.0), xc_);
        return apply_coeff(tr_coeff_, tr_table_.back());
    }
    PsiD ref_left_limit_at_xc() const {
        if (bar_.is<Delta>()) return left_wave(amps_.A_ref_in, coeffs_.b_out, xc_);
        PsiD out;  // wb = 0, wb' = 1 at x_c
        out.psi = Complex(0.0, 0.0);
        out.dpsi = detail::ldexp_c(ref_coeff_.m, ref_coeff_.e2);
        return out;
    }

    // Matched reflection field: vanishes identically for x >= x_c.
    PsiD ref_at(double x) const {
        if (x >= xc_) return {Complex(0.0, 0.0), Complex(0.0, 0.0)};
        if (x <= a_) return left_wave(amps_.A_ref_in, coeffs_.b_out, x);
        auto [wb, v] = basis_pair_at(x);
        PsiD out;
        out.psi = detail::ldexp_c(ref_coeff_.m * wb.f, ref_coeff_.e2 + wb.e2);
        out.dpsi = detail::ldexp_c(ref_coeff_.m * wb.fp, ref_coeff_.e2 + wb.e2);
        return out;
    }

private:
    void require_interior(double x) const {
        if (bar_.is<Delta>()) throw DomainError("basis: delta barrier has no interior");
        if (x < a_ || x > b_) throw DomainError("basis: x outside barrier region");
    }

    // A e^{ikx} + B e^{ik(2a - x)} on x <= a.
    PsiD left_wave(Complex A, Complex B, double x) const {
        const Complex ei = std::polar(1.0, k_ * x);
        const Complex er = std::polar(1.0, k_ * (2.0 * a_ - x));
        const Complex ik(0.0, k_);
        return {A * ei + B * er, ik * (A * ei - B * er)};
    }

    // A e^{ik(x - D)} on x >= b, D = b - a.
    PsiD right_wave(Complex A, double x) const {
        const Complex e = std::polar(1.0, k_ * (x - (b_ - a_)));
        return {A * e, Complex(0.0, k_) * A * e};
    }

    void build_layout() {
        const double kf = pc_.kinetic_factor();
        double left = a_;
        for (const auto& s : bar_.segments()) {
            segs_.push_back({left, s.width, (s.V - E_) / kf});
            left += s.width;
        }
        // split the span at x_c for the half-layouts
        for (const auto& s : segs_) {
            const double r = s.x_left + s.width;
            if (r <= xc_ + 0.0) {
                if (s.x_left < xc_) left_half_.push_back(s);
                continue;
            }
            if (s.x_left < xc_) {
                left_half_.push_back({s.x_left, xc_ - s.x_left, s.q});
                if (r > xc_) right_half_.push_back({xc_, r - xc_, s.q});
            } else {
                right_half_.push_back(s);
            }
        }
        qc_ = right_half_.empty() ? 0.0 : right_half_.front().q;
    }

    void build_tables() {
        // odd/even basis from x_c rightward: wb(xc)=0, wb'(xc)=1, v(xc)=1, v'(xc)=0
        detail::ScaledPair<double> wb{0.0, 1.0, 0};
        detail::ScaledPair<double> v{1.0, 0.0, 0};
        wb_nodes_.push_back(wb);
        v_nodes_.push_back(v);
        for (const auto& s : right_half_) {
            wb = detail::advance(wb, s.q, s.width);
            v = detail::advance(v, s.q, s.width);
            wb_nodes_.push_back(wb);
            v_nodes_.push_back(v);
        }
        wb_b_ = wb;
        v_b_ = v;

        // full state anchored at b with unit data (1, ik), walked leftward
        detail::ScaledPair<Complex> full{Complex(1.0, 0.0), Complex(0.0, k_), 0};
        full_table_.assign(segs_.size() + 1, {});
        full_table_.back() = full;
        for (std::size_t i = segs_.size(); i-- > 0;) {
            full = detail::advance(full, segs_[i].q, -segs_[i].width);
            full_table_[i] = full;
        }

        // transmission in-field anchored at a with unit data (1, ik), walked right
        detail::ScaledPair<Complex> tr{Complex(1.0, 0.0), Complex(0.0, k_), 0};
        tr_table_.assign(left_half_.size() + 1, {});
        tr_table_.front() = tr;
        for (std::size_t i = 0; i < left_half_.size(); ++i) {
            tr = detail::advance(tr, left_half_[i].q, left_half_[i].width);
            tr_table_[i + 1] = tr;
        }
    }

    void build_coeffs() {
        const Complex Qw(wb_b_.fp, k_ * wb_b_.f);
        const Complex P(v_b_.fp, k_ * v_b_.f);
        const int sw = wb_b_.e2;
        const int sv = v_b_.e2;
        if (!(std::abs(Qw) > 1e-300) || !(std::abs(P) > 1e-300))
            throw SingularCoefficientError("scattering: edge coefficient vanished");

        const double reG = wb_b_.fp * v_b_.fp + k_ * k_ * wb_b_.f * v_b_.f;
        const int S = sw + sv;

        ScatteringCoeffs c;
        c.k = k_;
        c.kappa = std::sqrt(std::abs(qc_));
        c.kappa0 = std::sqrt(bar_.peak_potential() / pc_.kinetic_factor());
        c.F = 0.0;

        const Complex ik(0.0, k_);
        const Complex denom = std::conj(Qw) * std::conj(P);
        c.a_out = detail::ldexp_c(-ik / denom, -S);
        c.b_out = -reG / denom;

        // T = k^2 / (reG^2 2^{2S} + k^2); built from the exact Wronskian identity
        const double g2 = std::ldexp(reG * reG, 2 * S);
        if (std::isfinite(g2)) {
            c.T = k_ * k_ / (g2 + k_ * k_);
            c.R = g2 / (g2 + k_ * k_);
        } else {
            c.T = 0.0;
            c.R = 1.0;
        }
        c.J = std::arg(c.a_out);

        const Complex eika = std::polar(1.0, k_ * a_);
        const double kc = c.kappa;
        // u-coefficients are exposed through u = kappa_c * wb
        const Complex aw = ik * eika / std::conj(Qw);           // scale -sw
        const Complex bf = -ik * eika / std::conj(P);           // scale -sv
        c.a_full = kc > 0.0 ? detail::ldexp_c(aw / kc, -sw)
                            : Complex(std::numeric_limits<double>::infinity(), 0.0);
        c.b_full = detail::ldexp_c(bf, -sv);

        InAmplitudes amps;
        const Complex denom_in = std::conj(P) * Qw;
        amps.A_tr_in = detail::ldexp_c(-ik / denom_in, -S);
        amps.A_ref_in = reG / denom_in;
        if (c.R >= kNoReflectionEps) {
            amps.lambda = std::arg(amps.A_ref_in);
            c.lambda = amps.lambda;
        }

        // Psi_full(b) = a_out e^{ika}; keep the scale explicit so an
        // underflowed a_out still anchors the interior correctly
        full_coeff_ = {(-ik / denom) * eika, -S};
        tr_coeff_ = {(-ik / denom_in) * eika, -S};
        ref_coeff_ = {2.0 * ik * reG * eika / (std::conj(P) * std::norm(Qw)), -sw};

        coeffs_ = c;
        amps_ = amps;
    }

    void build_delta() {
        const double omega = as_delta_omega();
        const Complex den(1.0, omega);
        ScatteringCoeffs c;
        c.k = k_;
        c.kappa = k_;
        c.kappa0 = 0.0;
        c.a_out = 1.0 / den;
        c.b_out = Complex(0.0, -omega) / den;
        c.T = 1.0 / (1.0 + omega * omega);
        c.R = omega * omega / (1.0 + omega * omega);
        c.J = std::arg(c.a_out);
        c.a_full = c.b_full = Complex(0.0, 0.0);
        InAmplitudes amps;
        amps.A_tr_in = c.a_out;
        amps.A_ref_in = -c.b_out;
        if (c.R >= kNoReflectionEps) {
            amps.lambda = std::arg(amps.A_ref_in);
            c.lambda = amps.lambda;
        }
        coeffs_ = c;
        amps_ = amps;
    }

    double as_delta_omega() const {
        const auto& d = bar_.as<Delta>();
        return d.W / (2.0 * pc_.kinetic_factor() * k_);  // m W / (hbar^2 k)
    }

    // (wb, v) pair at x in [a, b], via parity about x_c.
    std::pair<detail::ScaledPair<double>, detail::ScaledPair<double>> basis_pair_at(
        double x) const {
        const bool mirrored = x < xc_;
        const double xr = mirrored ? 2.0 * xc_ - x : x;
        std::size_t i = 0;
        while (i + 1 < right_half_.size() &&
               xr > right_half_[i].x_left + right_half_[i].width)
            ++i;
        detail::ScaledPair<double> wb = wb_nodes_.empty() ? detail::ScaledPair<double>{}
                                                          : wb_nodes_[i];
        detail::ScaledPair<double> v = v_nodes_[i];
        if (!right_half_.empty()) {
            const double dx = xr - right_half_[i].x_left;
            wb = detail::advance(wb, right_half_[i].q, dx);
            v = detail::advance(v, right_half_[i].q, dx);
        }
        if (mirrored) {
            wb.f = -wb.f;  // wb odd, wb' even
            v.fp = -v.fp;  // v even, v' odd
        }
        return {wb, v};
    }

    detail::ScaledPair<Complex> eval_from_table(
        const std::vector<detail::ScaledPair<Complex>>& table, double x,
        bool anchored_right) const {
        const auto& segs = anchored_right ? segs_ : left_half_;
        std::size_t i = 0;
        while (i + 1 < segs.size() && x > segs[i].x_left + segs[i].width) ++i;
        if (anchored_right) {
            const double right = segs[i].x_left + segs[i].width;
            return detail::advance(table[i + 1], segs[i].q, x - right);
        }
        return detail::advance(table[i], segs[i].q, x - segs[i].x_left);
    }

    PsiD apply_coeff(const detail::ScaledC& c, const detail::ScaledPair<Complex>& p) const {
        const int e = c.e2 + p.e2;
        return {detail::ldexp_c(c.m * p.f, e), detail::ldexp_c(c.m * p.fp, e)};
    }

    BarrierSpec bar_;
    PhysicalConstants pc_;
    double k_;
    double E_ = 0.0;
    double a_ = 0.0, b_ = 0.0, xc_ = 0.0;
    double qc_ = 0.0;  // (V - E)/kf at x_c

    std::vector<detail::SegmentQ> segs_, left_half_, right_half_;
    std::vector<detail::ScaledPair<double>> wb_nodes_, v_nodes_;
    detail::ScaledPair<double> wb_b_, v_b_;
    std::vector<detail::ScaledPair<Complex>> full_table_, tr_table_;
    detail::ScaledC full_coeff_, tr_coeff_, ref_coeff_;

    ScatteringCoeffs coeffs_;
    InAmplitudes amps_;
};

// Convenience wrappers matching the library's operation-level API.

inline RealBasis eval_basis(const BarrierSpec& barrier, double k, double x,
                            const PhysicalConstants& pc) {
    return StationaryState(barrier, k, pc).basis_at(x);
}

inline QPCoeffs qp_coeffs(const BarrierSpec& barrier, double k,
                          const PhysicalConstants& pc) {
    return StationaryState(barrier, k, pc).qp();
}

inline ScatteringCoeffs scattering_coeffs(const BarrierSpec& barrier, double k,
                                          const PhysicalConstants& pc) {
    return StationaryState(barrier, k, pc).coeffs();
}

// Product-form causal in-amplitudes from outgoing amplitudes.
inline InAmplitudes in_amplitudes(const ScatteringCoeffs& c) {
    InAmplitudes amps;
    amps.A_ref_in = c.b_out * (std::conj(c.b_out) - std::conj(c.a_out));
    amps.A_tr_in = std::conj(c.a_out) * (c.a_out + c.b_out);
    if (c.R >= kNoReflectionEps) amps.lambda = std::arg(amps.A_ref_in);
    return amps;
}

}  // namespace subscatter
