#pragma once

#include <cmath>
#include <vector>

#include "subscatter/constants.hpp"
#include "subscatter/errors.hpp"
#include "subscatter/grid.hpp"
#include "subscatter/parallel.hpp"
#include "subscatter/quadrature.hpp"

namespace subscatter {

// Monochromatic 2D double-slit geometry: slits of width d centered at
// y = -a and y = +a in the screen plane x = 0, detector plane at x = L.
struct SlitConfig {
    double half_separation;    // a, nm
    double slit_width;         // d, nm
    double k;                  // 1/nm
    double detector_distance;  // L, nm
    UniformGrid ygrid;         // transverse grid, symmetric, contains y = 0
    std::size_t spectral_count = 4097;  // transverse-wavenumber quadrature nodes

    void validate() const {
        if (!(half_separation > slit_width / 2.0))
            throw ConfigError("slits: need a > d/2");
        if (!(slit_width > 0.0)) throw ConfigError("slits: slit width must be positive");
        if (!(k > 0.0)) throw ConfigError("slits: k must be positive");
        if (!(detector_distance > 0.0)) throw ConfigError("slits: L must be positive");
    }
};

// Complex field on one plane x = const, with transverse and longitudinal
// derivatives from the same angular spectrum.
struct Field2D {
    double x = 0.0;
    UniformGrid ygrid;
    std::vector<std::complex<double>> values;
    std::vector<std::complex<double>> dvalues_dy;
    std::vector<std::complex<double>> dvalues_dx;
};

namespace detail {

// Shared angular-spectrum quadrature of a centered slit: weights
// W(q) = (simpson w) * (1/pi) * d sinc(q d / 2), propagator E = e^{i k_x x}
// with k_x = sqrt(k^2 - q^2) (evanescent branch i sqrt(q^2 - k^2)).
struct SlitSpectrum {
    std::vector<double> q;
    std::vector<std::complex<double>> WE;    // weight * aperture * propagator
    std::vector<std::complex<double>> WEikx; // additionally * i k_x
};

inline SlitSpectrum slit_spectrum(const SlitConfig& cfg, double x) {
    const double k = cfg.k;
    const double d = cfg.slit_width;
    SlitSpectrum s;
    auto aperture = [&](double q) {
        return (q == 0.0) ? d : 2.0 * std::sin(0.5 * q * d) / q;
    };

    // propagating band parametrized as q = k sin(theta): the phase
    // k x cos(theta) then has bounded derivative, so a uniform theta grid
    // resolves arbitrarily distant planes with ~ k x nodes
    auto n_osc = static_cast<std::size_t>(
        std::max(static_cast<double>(cfg.spectral_count), k * x / 0.25));
    n_osc = odd_count(std::min<std::size_t>(n_osc, 400001));
    UniformGrid tg(0.0, 0.5 * M_PI, n_osc);
    for (std::size_t i = 0; i < tg.count; ++i) {
        const double th = tg.point(i);
        const double q = k * std::sin(th);
        const double kx = k * std::cos(th);
        const double w = simpson_weight(i, tg.count) * tg.spacing() / 3.0 / M_PI;
        const std::complex<double> WE =
            (w * kx * aperture(q)) * std::polar(1.0, kx * x);
        s.q.push_back(q);
        s.WE.push_back(WE);
        s.WEikx.push_back(WE * std::complex<double>(0.0, kx));
    }

    // evanescent band, relevant only near the screen
    const double gmax = 37.0 / std::max(x, 1e-9);
    if (gmax > 1e-3 * k) {
        const double qmax = std::sqrt(k * k + gmax * gmax);
        UniformGrid qg(k, qmax, odd_count(cfg.spectral_count));
        for (std::size_t i = 0; i < qg.count; ++i) {
            const double q = qg.point(i);
            const double g = std::sqrt(std::max(0.0, (q - k) * (q + k)));
            const double w = simpson_weight(i, qg.count) * qg.spacing() / 3.0 / M_PI;
            const std::complex<double> WE = (w * aperture(q) * std::exp(-g * x));
            s.q.push_back(q);
            s.WE.push_back(WE);
            s.WEikx.push_back(WE * std::complex<double>(-g, 0.0));
        }
    }
    return s;
}

// Field of one slit centered at y0, evaluated from a prepared spectrum at
// arbitrary transverse points. cos(q|eta|) / sin(q|eta|) sgn(eta) keep the
// even/odd symmetry about the slit center exact in floating point.
inline void accumulate_slit(const SlitSpectrum& s, double y0, double amp,
                            const std::vector<double>& ys, Field2D& f) {
    const std::size_t nq = s.q.size();
    parallel_for_chunks(ys.size(), 64, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t iy = lo; iy < hi; ++iy) {
            const double eta = ys[iy] - y0;
            const double ae = std::abs(eta);
            const double sg = (eta > 0.0) ? 1.0 : (eta < 0.0 ? -1.0 : 0.0);
            double vr = 0.0, vi = 0.0, yr = 0.0, yi = 0.0, xr = 0.0, xi = 0.0;
            for (std::size_t i = 0; i < nq; ++i) {
                const double c = std::cos(s.q[i] * ae);
                const double sn = std::sin(s.q[i] * ae) * sg;
                vr += s.WE[i].real() * c;
                vi += s.WE[i].imag() * c;
                const double qs = s.q[i] * sn;
                yr -= s.WE[i].real() * qs;
                yi -= s.WE[i].imag() * qs;
                xr += s.WEikx[i].real() * c;
                xi += s.WEikx[i].imag() * c;
            }
            f.values[iy] += amp * std::complex<double>(vr, vi);
            f.dvalues_dy[iy] += amp * std::complex<double>(yr, yi);
            f.dvalues_dx[iy] += amp * std::complex<double>(xr, xi);
        }
    });
}

inline Field2D empty_field(const UniformGrid& yg, double x) {
    Field2D f;
    f.x = x;
    f.ygrid = yg;
    f.values.assign(yg.count, {0.0, 0.0});
    f.dvalues_dy.assign(yg.count, {0.0, 0.0});
    f.dvalues_dx.assign(yg.count, {0.0, 0.0});
    return f;
}

}  // namespace detail

// Single-slit field centered at y0. At x = 0 this is exactly the aperture
// indicator; for x > 0 the angular-spectrum propagation (evanescent
// components retained).
inline Field2D one_slit_field(const SlitConfig& cfg, double y0, double x) {
    cfg.validate();
    if (x < 0.0) throw DomainError("one_slit_field: x must be >= 0");
    Field2D f = detail::empty_field(cfg.ygrid, x);
    if (x == 0.0) {
        for (std::size_t iy = 0; iy < cfg.ygrid.count; ++iy) {
            const double off = std::abs(cfg.ygrid.point(iy) - y0);
            if (off < 0.5 * cfg.slit_width)
                f.values[iy] = {1.0, 0.0};
            else if (off == 0.5 * cfg.slit_width)
                f.values[iy] = {0.5, 0.0};
        }
        return f;
    }
    const auto spec = detail::slit_spectrum(cfg, x);
    detail::accumulate_slit(spec, y0, 1.0, cfg.ygrid.points(), f);
    return f;
}

// Two-slit superposition with arbitrary slit centers (the symmetric case is
// centers -a, +a). Kept general so broken-symmetry controls are expressible.
inline Field2D two_slit_field_centers(const SlitConfig& cfg, double c1, double c2,
                                      double x) {
    cfg.validate();
    if (x < 0.0) throw DomainError("two_slit_field: x must be >= 0");
    const double amp = 1.0 / std::sqrt(2.0);
    if (x == 0.0) {
        Field2D f = detail::empty_field(cfg.ygrid, x);
        const Field2D f1 = one_slit_field(cfg, c1, 0.0);
        const Field2D f2 = one_slit_field(cfg, c2, 0.0);
        for (std::size_t iy = 0; iy < cfg.ygrid.count; ++iy)
            f.values[iy] = amp * (f1.values[iy] + f2.values[iy]);
        return f;
    }
    Field2D f = detail::empty_field(cfg.ygrid, x);
    const auto spec = detail::slit_spectrum(cfg, x);
    const auto ys = cfg.ygrid.points();
    detail::accumulate_slit(spec, c1, amp, ys, f);
    detail::accumulate_slit(spec, c2, amp, ys, f);
    return f;
}

inline Field2D two_slit_field(const SlitConfig& cfg, double x) {
    return two_slit_field_centers(cfg, -cfg.half_separation, cfg.half_separation, x);
}

// Half-plane decomposition: psi1 lives at y < 0, psi2 at y > 0, the y = 0
// value split evenly.
struct SlitDecomposition {
    Field2D psi1;
    Field2D psi2;
};

inline SlitDecomposition decompose(const Field2D& two) {
    std::size_t izero = two.ygrid.count;
    for (std::size_t i = 0; i < two.ygrid.count; ++i) {
        if (two.ygrid.point(i) == 0.0) {
            izero = i;
            break;
        }
    }
    if (izero == two.ygrid.count)
        throw ConfigError("decompose: y = 0 must be a grid node");
    SlitDecomposition d{detail::empty_field(two.ygrid, two.x),
                        detail::empty_field(two.ygrid, two.x)};
    for (std::size_t i = 0; i < two.ygrid.count; ++i) {
        if (i < izero) {
            d.psi1.values[i] = two.values[i];
            d.psi1.dvalues_dy[i] = two.dvalues_dy[i];
            d.psi1.dvalues_dx[i] = two.dvalues_dx[i];
        } else if (i > izero) {
            d.psi2.values[i] = two.values[i];
            d.psi2.dvalues_dy[i] = two.dvalues_dy[i];
            d.psi2.dvalues_dx[i] = two.dvalues_dx[i];
        } else {
            d.psi1.values[i] = 0.5 * two.values[i];
            d.psi2.values[i] = 0.5 * two.values[i];
            d.psi1.dvalues_dy[i] = 0.5 * two.dvalues_dy[i];
            d.psi2.dvalues_dy[i] = 0.5 * two.dvalues_dy[i];
            d.psi1.dvalues_dx[i] = 0.5 * two.dvalues_dx[i];
            d.psi2.dvalues_dx[i] = 0.5 * two.dvalues_dx[i];
        }
    }
    return d;
}

// Plane norm <F|F> = Int |F|^2 dy.
inline double plane_norm(const Field2D& f) {
    std::vector<double> dens(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) dens[i] = std::norm(f.values[i]);
    return integrate(dens, f.ygrid);
}

// Norm of one half-plane restriction of a field, Int_{y<0} or Int_{y>0} of
// |F|^2 dy. This is the norm of the corresponding decomposition member (the
// y = 0 node is a measure-zero boundary); it needs y = 0 at an even node
// index so the Simpson panels split cleanly there.
inline double half_plane_norm(const Field2D& f, bool left) {
    std::size_t izero = f.ygrid.count;
    for (std::size_t i = 0; i < f.ygrid.count; ++i)
        if (f.ygrid.point(i) == 0.0) izero = i;
    if (izero == f.ygrid.count || izero % 2 != 0 || (f.ygrid.count - 1 - izero) % 2 != 0)
        throw ConfigError("half_plane_norm: y = 0 must sit on an even Simpson node");
    const std::size_t lo = left ? 0 : izero;
    const std::size_t n = left ? izero + 1 : f.ygrid.count - izero;
    UniformGrid sub(f.ygrid.point(lo), f.ygrid.point(lo + n - 1), n);
    std::vector<double> dens(n);
    for (std::size_t i = 0; i < n; ++i) dens[i] = std::norm(f.values[lo + i]);
    return integrate(dens, sub);
}

// Transverse probability current (hbar/m) Im(F* dF/dy) at a node.
inline double transverse_current(const Field2D& f, std::size_t iy,
                                 const PhysicalConstants& pc) {
    return (pc.hbar / pc.mass()) *
           std::imag(std::conj(f.values[iy]) * f.dvalues_dy[iy]);
}

// Total x-flux through the plane.
inline double plane_flux(const Field2D& f, const PhysicalConstants& pc) {
    std::vector<double> j(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i)
        j[i] = (pc.hbar / pc.mass()) *
               std::imag(std::conj(f.values[i]) * f.dvalues_dx[i]);
    return integrate(j, f.ygrid);
}

// Mirror-symmetry diagnostics over a set of planes: worst evenness mismatch
// and worst transverse current on the symmetry plane y = 0.
struct MirrorReport {
    double max_evenness_residual;   // max |F(x,-y) - F(x,y)| / field scale
    double max_axis_current;        // max |J_y(x, 0)| / (v_k * field scale^2)
};

inline MirrorReport mirror_diagnostic(const SlitConfig& cfg,
                                      const std::vector<double>& planes,
                                      const PhysicalConstants& pc, double c1,
                                      double c2) {
    MirrorReport rep{0.0, 0.0};
    std::size_t izero = cfg.ygrid.count;
    for (std::size_t i = 0; i < cfg.ygrid.count; ++i)
        if (cfg.ygrid.point(i) == 0.0) izero = i;
    if (izero == cfg.ygrid.count)
        throw ConfigError("mirror_diagnostic: y = 0 must be a grid node");
    const double vk = pc.velocity(cfg.k);
    const auto ys = cfg.ygrid.points();
    std::vector<double> ys_neg(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) ys_neg[i] = -ys[i];
    const double amp = 1.0 / std::sqrt(2.0);
    for (double x : planes) {
        const Field2D f = two_slit_field_centers(cfg, c1, c2, x);
        // same field sampled at the exactly negated coordinates
        Field2D g = detail::empty_field(cfg.ygrid, x);
        const auto spec = detail::slit_spectrum(cfg, x);
        detail::accumulate_slit(spec, c1, amp, ys_neg, g);
        detail::accumulate_slit(spec, c2, amp, ys_neg, g);
        double scale = 0.0;
        for (const auto& v : f.values) scale = std::max(scale, std::abs(v));
        if (scale == 0.0) continue;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            const double res = std::abs(f.values[i] - g.values[i]) / scale;
            rep.max_evenness_residual = std::max(rep.max_evenness_residual, res);
        }
        const double jy = std::abs(transverse_current(f, izero, pc)) /
                          (vk * scale * scale);
        rep.max_axis_current = std::max(rep.max_axis_current, jy);
    }
    return rep;
}

inline MirrorReport mirror_diagnostic(const SlitConfig& cfg,
                                      const std::vector<double>& planes,
                                      const PhysicalConstants& pc) {
    return mirror_diagnostic(cfg, planes, pc, -cfg.half_separation,
                             cfg.half_separation);
}

}  // namespace subscatter
