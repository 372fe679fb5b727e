#pragma once

#include <cmath>
#include <vector>

#include "subscatter/constants.hpp"
#include "subscatter/grid.hpp"
#include "subscatter/quadrature.hpp"

namespace subscatter {

// k-space amplitudes of the incident packet on a symmetric k-grid.
struct Spectrum {
    UniformGrid kgrid;               // 1/nm, spans negative and positive k
    std::vector<double> amplitudes;  // A_in(k_j), real for the Gaussian packet
    double l0 = 0.0;                 // nm
    double k0 = 0.0;                 // 1/nm

    double amplitude_at_index(std::size_t j) const { return amplitudes[j]; }
};

// Symmetric default k-grid covering +-(k0 + 8 sigma_k), sigma_k = 1/(2 l0).
inline UniformGrid default_kgrid(double l0, double k0, std::size_t count = 4097) {
    const double span = k0 + 8.0 / (2.0 * l0);
    return UniformGrid(-span, span, odd_count(count));
}

// Sampled Gaussian spectrum, renormalized on the grid. Enforces the
// completed-scattering condition |A(k0)| >> |A(-k0)|.
inline Spectrum gaussian_spectrum(double l0, double k0, const UniformGrid& kgrid) {
    if (!(l0 > 0.0) || !(k0 > 0.0))
        throw ConfigError("spectrum: l0 and k0 must be positive");
    const double sigma = 1.0 / (2.0 * l0);
    if (kgrid.start > k0 - 6.0 * sigma || kgrid.stop < k0 + 6.0 * sigma)
        throw ConfigError("spectrum: k-grid must cover k0 +- 6 sigma_k");
    // |A(k0)/A(-k0)| = exp(4 l0^2 k0^2)
    if (4.0 * l0 * l0 * k0 * k0 < std::log(1e6))
        throw ConfigError("spectrum: not a completed scattering (l0 k0 too small)");

    Spectrum s;
    s.kgrid = kgrid;
    s.l0 = l0;
    s.k0 = k0;
    s.amplitudes.resize(kgrid.count);
    const double norm0 = std::pow(2.0 * l0 * l0 / M_PI, 0.25);
    for (std::size_t j = 0; j < kgrid.count; ++j) {
        const double k = kgrid.point(j);
        // the stationary problem is undefined at k = 0; the node carries
        // amplitude exp(-l0^2 k0^2) <= 1e-3 of peak and is dropped
        s.amplitudes[j] = (k == 0.0) ? 0.0 : norm0 * std::exp(-l0 * l0 * (k - k0) * (k - k0));
    }
    std::vector<double> dens(kgrid.count);
    for (std::size_t j = 0; j < kgrid.count; ++j) dens[j] = s.amplitudes[j] * s.amplitudes[j];
    const double total = integrate(dens, kgrid);
    const double scale = 1.0 / std::sqrt(total);
    for (auto& a : s.amplitudes) a *= scale;
    return s;
}

// varpi(k) = |A(k)|^2 - |A(-k)|^2 evaluated exactly for the Gaussian.
inline double spectral_asymmetry(const Spectrum& s, double k) {
    const double n0 = std::sqrt(2.0 * s.l0 * s.l0 / M_PI);
    const double ap = n0 * std::exp(-2.0 * s.l0 * s.l0 * (k - s.k0) * (k - s.k0));
    const double am = n0 * std::exp(-2.0 * s.l0 * s.l0 * (k + s.k0) * (k + s.k0));
    return ap - am;
}

}  // namespace subscatter
