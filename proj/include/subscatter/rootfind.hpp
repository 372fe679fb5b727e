#pragma once

#include <cmath>

#include "subscatter/errors.hpp"

namespace subscatter {

// Bisection on [lo, hi]. Requires a sign change (either endpoint may be an
// exact root). Returns the midpoint of the final bracket, |hi - lo| <= tol.
template <typename F>
double find_root(const F& f, double lo, double hi, double tol) {
    if (!(hi > lo)) throw DomainError("find_root: empty bracket");
    if (!(tol > 0.0)) throw DomainError("find_root: tolerance must be positive");
    double flo = f(lo);
    double fhi = f(hi);
    if (!std::isfinite(flo) || !std::isfinite(fhi))
        throw DomainError("find_root: non-finite endpoint value");
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw NoRootError("find_root: no sign change over bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if (flo * fmid < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace subscatter
