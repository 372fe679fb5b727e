#pragma once

// Independent numerical oracles used by the tests. These deliberately avoid
// the library's closed-form segment propagation: stationary solutions are
// integrated with plain RK4, the free packet with the analytic Gaussian.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "subscatter/barrier.hpp"
#include "subscatter/constants.hpp"

namespace oracles {

using subscatter::BarrierSpec;
using subscatter::PhysicalConstants;

// RK4 for f'' = q(x) f with piecewise-constant q; integration is split at
// segment boundaries so the discontinuities never sit inside a step.
template <typename T>
struct OdeState {
    T f;
    T fp;
};

template <typename T>
OdeState<T> rk4_segment(OdeState<T> y, double q, double x0, double x1, int steps) {
    const double h = (x1 - x0) / steps;
    for (int i = 0; i < steps; ++i) {
        const T k1f = y.fp, k1p = q * y.f;
        const T k2f = y.fp + 0.5 * h * k1p, k2p = q * (y.f + 0.5 * h * k1f);
        const T k3f = y.fp + 0.5 * h * k2p, k3p = q * (y.f + 0.5 * h * k2f);
        const T k4f = y.fp + h * k3p, k4p = q * (y.f + h * k3f);
        y.f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
        y.fp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    }
    return y;
}

// Integrate across [x0, x1] inside the barrier region.
template <typename T>
OdeState<T> integrate_schrodinger(const BarrierSpec& bar, double E,
                                  const PhysicalConstants& pc, double x0, double x1,
                                  OdeState<T> y, int steps_per_nm = 2000) {
    const double kf = pc.kinetic_factor();
    const bool forward = x1 >= x0;
    double left = bar.a();
    std::vector<std::pair<double, double>> edges;  // (x_left, q) per segment
    for (const auto& s : bar.segments()) {
        edges.push_back({left, (s.V - E) / kf});
        left += s.width;
    }
    auto q_at = [&](double x) {
        double q = -E / kf;
        for (const auto& e : edges)
            if (x >= e.first) q = e.second;
        return q;
    };
    // collect breakpoints between x0 and x1
    std::vector<double> cuts{x0};
    for (const auto& e : edges) {
        const double xb = e.first;
        if ((forward && xb > x0 && xb < x1) || (!forward && xb < x0 && xb > x1))
            cuts.push_back(xb);
    }
    cuts.push_back(x1);
    if (!forward) std::sort(cuts.begin(), cuts.end(), std::greater<double>());
    else std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double xa = cuts[i], xb = cuts[i + 1];
        const double mid = 0.5 * (xa + xb);
        const int steps =
            std::max(8, static_cast<int>(std::abs(xb - xa) * steps_per_nm));
        y = rk4_segment(y, q_at(mid), xa, xb, steps);
    }
    return y;
}

// Analytic freely spreading Gaussian packet with the standard initial
// moments <x>=0, <p>=hbar k0, <x^2>=l0^2.
inline std::complex<double> free_gaussian(double x, double t, double l0, double k0,
                                          const PhysicalConstants& pc) {
    const double v0 = pc.velocity(k0);
    const std::complex<double> alpha(l0 * l0, pc.hbar * t / (2.0 * pc.mass()));
    const std::complex<double> pref =
        std::pow(2.0 * l0 * l0 / M_PI, 0.25) / std::sqrt(2.0 * alpha);
    return pref * std::exp(std::complex<double>(0.0, k0 * (x - 0.5 * v0 * t))) *
           std::exp(-(x - v0 * t) * (x - v0 * t) / (4.0 * alpha));
}

}  // namespace oracles
