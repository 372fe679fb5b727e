#pragma once

#include <cmath>
#include <complex>

#include "subscatter/errors.hpp"

namespace subscatter {

// Central difference (f(k+h) - f(k-h)) / 2h.
template <typename F>
double differentiate(const F& f, double k, double h) {
    if (!(h > 0.0)) throw DomainError("differentiate: step must be positive");
    const double d = (f(k + h) - f(k - h)) / (2.0 * h);
    if (!std::isfinite(d)) throw DomainError("differentiate: non-finite evaluation");
    return d;
}

// Central difference with one Richardson step (h and h/2).
template <typename F>
double differentiate_richardson(const F& f, double k, double h) {
    const double d1 = differentiate(f, k, h);
    const double d2 = differentiate(f, k, 0.5 * h);
    return (4.0 * d2 - d1) / 3.0;
}

// d/dk arg(z(k)) through the relative rotation arg(z(k+h)/z(k-h)); immune to
// principal-branch wraps as long as the rotation per step stays below pi.
template <typename F>
double phase_derivative(const F& z, double k, double h) {
    if (!(h > 0.0)) throw DomainError("phase_derivative: step must be positive");
    auto step = [&](double hh) {
        const std::complex<double> ratio = z(k + hh) / z(k - hh);
        return std::arg(ratio) / (2.0 * hh);
    };
    const double d1 = step(h);
    const double d2 = step(0.5 * h);
    const double d = (4.0 * d2 - d1) / 3.0;
    if (!std::isfinite(d)) throw DomainError("phase_derivative: non-finite evaluation");
    return d;
}

}  // namespace subscatter
