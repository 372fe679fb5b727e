#pragma once

#include <cmath>

#include "subscatter/errors.hpp"

namespace subscatter {

// Unit system: nm, ps, eV.
namespace units {
constexpr double hbar = 6.582119569e-4;     // eV ps
constexpr double hbar2_over_2me = 0.0380998;  // eV nm^2, free electron
}  // namespace units

// Particle constants for one scenario. mass_ratio is m/m_e.
struct PhysicalConstants {
    double hbar = units::hbar;      // eV ps
    double mass_ratio = 0.067;      // GaAs effective mass by default

    // hbar^2/(2m) in eV nm^2
    double kinetic_factor() const { return units::hbar2_over_2me / mass_ratio; }
    // m in eV ps^2 / nm^2
    double mass() const { return hbar * hbar / (2.0 * kinetic_factor()); }
    // E(k) = hbar^2 k^2 / 2m, k in 1/nm, E in eV
    double energy(double k) const { return kinetic_factor() * k * k; }
    // k(E), E in eV
    double wavenumber(double E) const {
        if (E <= 0.0) throw DomainError("wavenumber: energy must be positive");
        return std::sqrt(E / kinetic_factor());
    }
    // group velocity hbar k / m in nm/ps
    double velocity(double k) const { return 2.0 * kinetic_factor() * k / hbar; }

    void validate() const {
        if (!(hbar > 0.0)) throw ConfigError("constants: hbar must be positive");
        if (!(mass_ratio > 0.0)) throw ConfigError("constants: mass_ratio must be positive");
    }
};

}  // namespace subscatter
