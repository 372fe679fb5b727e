#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "subscatter/constants.hpp"
#include "subscatter/errors.hpp"

namespace subscatter {

// One piecewise-constant stretch of potential.
struct Segment {
    double width;  // nm
    double V;      // eV
};

// Rectangular barrier of height V0 on [a, b].
struct Rectangular {
    double a;   // nm
    double b;   // nm
    double V0;  // eV
};

// Two identical rectangular barriers of width d and height V0 separated by a
// gap l; occupies [a, a + 2d + l].
struct DoubleRect {
    double a;   // nm
    double d;   // nm
    double l;   // nm
    double V0;  // eV
};

// Zero-width spike W * delta(x - a).
struct Delta {
    double a;  // nm
    double W;  // eV nm
};

// General mirror-symmetric piecewise-constant potential starting at a.
// Segment potentials must form a palindrome.
struct SymmetricPiecewise {
    double a;  // nm
    std::vector<Segment> segments;
};

class BarrierSpec {
public:
    using Variant = std::variant<Rectangular, DoubleRect, Delta, SymmetricPiecewise>;

    explicit BarrierSpec(Variant v) : v_(std::move(v)) { validate(); }

    static BarrierSpec rectangular(double a, double b, double V0) {
        return BarrierSpec(Rectangular{a, b, V0});
    }
    static BarrierSpec double_rect(double a, double d, double l, double V0) {
        return BarrierSpec(DoubleRect{a, d, l, V0});
    }
    static BarrierSpec delta(double a, double W) { return BarrierSpec(Delta{a, W}); }
    static BarrierSpec symmetric_piecewise(double a, std::vector<Segment> segs) {
        return BarrierSpec(SymmetricPiecewise{a, std::move(segs)});
    }

    const Variant& variant() const { return v_; }

    template <typename T>
    bool is() const { return std::holds_alternative<T>(v_); }
    template <typename T>
    const T& as() const { return std::get<T>(v_); }

    double a() const {
        return std::visit([](const auto& s) { return s.a; }, v_);
    }

    double width() const {
        if (const auto* r = std::get_if<Rectangular>(&v_)) return r->b - r->a;
        if (const auto* d = std::get_if<DoubleRect>(&v_)) return 2.0 * d->d + d->l;
        if (std::get_if<Delta>(&v_)) return 0.0;
        const auto& p = std::get<SymmetricPiecewise>(v_);
        double w = 0.0;
        for (const auto& s : p.segments) w += s.width;
        return w;
    }

    double b() const { return a() + width(); }
    double x_c() const { return a() + 0.5 * width(); }

    // Piecewise-constant layout; empty for Delta.
    std::vector<Segment> segments() const {
        if (const auto* r = std::get_if<Rectangular>(&v_))
            return {Segment{r->b - r->a, r->V0}};
        if (const auto* d = std::get_if<DoubleRect>(&v_))
            return {Segment{d->d, d->V0}, Segment{d->l, 0.0}, Segment{d->d, d->V0}};
        if (std::get_if<Delta>(&v_)) return {};
        return std::get<SymmetricPiecewise>(v_).segments;
    }

    double potential_at(double x) const {
        if (is<Delta>()) return 0.0;
        double left = a();
        if (x < left || x > b()) return 0.0;
        for (const auto& s : segments()) {
            if (x <= left + s.width) return s.V;
            left += s.width;
        }
        return segments().back().V;
    }

    // Reference height for kappa0 = sqrt(2 m Vmax) / hbar.
    double peak_potential() const {
        if (std::get_if<Delta>(&v_)) return 0.0;
        double vmax = 0.0;
        for (const auto& s : segments()) vmax = std::max(vmax, s.V);
        return vmax;
    }

    void validate() const {
        if (!(a() > 0.0)) throw ConfigError("barrier: a must be positive");
        if (const auto* r = std::get_if<Rectangular>(&v_)) {
            if (!(r->b > r->a)) throw ConfigError("barrier: b must exceed a");
        } else if (const auto* d = std::get_if<DoubleRect>(&v_)) {
            if (!(d->d > 0.0) || !(d->l > 0.0))
                throw ConfigError("barrier: double-rect widths must be positive");
        } else if (const auto* p = std::get_if<SymmetricPiecewise>(&v_)) {
            if (p->segments.empty())
                throw ConfigError("barrier: piecewise barrier needs segments");
            const auto& segs = p->segments;
            const std::size_t n = segs.size();
            for (std::size_t i = 0; i < n; ++i) {
                if (!(segs[i].width > 0.0))
                    throw ConfigError("barrier: segment widths must be positive");
                if (segs[i].V != segs[n - 1 - i].V ||
                    segs[i].width != segs[n - 1 - i].width)
                    throw ConfigError("barrier: segments must be mirror-symmetric");
            }
        }
    }

private:
    Variant v_;
};

enum class Regime { evanescent, oscillatory };

struct LocalMode {
    Regime regime;
    double kappa;  // 1/nm
};

// Local wavenumber in a region of constant potential V at energy E.
inline LocalMode local_wavenumber(double V, double E, const PhysicalConstants& pc) {
    if (!(E > 0.0)) throw DomainError("local_wavenumber: E must be positive");
    const double q = (V - E) / pc.kinetic_factor();  // kappa^2, signed
    if (q > 0.0) return {Regime::evanescent, std::sqrt(q)};
    return {Regime::oscillatory, std::sqrt(-q)};
}

}  // namespace subscatter
