#pragma once

#include <memory>

#include "subscatter/stationary.hpp"

namespace subscatter {

enum class Kind { full, tr, ref };

inline const char* kind_name(Kind k) {
    switch (k) {
        case Kind::full: return "full";
        case Kind::tr: return "tr";
        case Kind::ref: return "ref";
    }
    return "?";
}

// Region of the axis relative to the barrier, for diagnostics.
enum class Region { left_of_a, barrier_left_of_xc, barrier_right_of_xc, right_of_b };

// One matched stationary subprocess wavefunction (or the full state),
// evaluable anywhere on the axis.
class SubprocessField {
public:
    SubprocessField(Kind kind, std::shared_ptr<const StationaryState> state)
        : kind_(kind), state_(std::move(state)) {}

    PsiD operator()(double x) const {
        switch (kind_) {
            case Kind::full: return state_->full_at(x);
            case Kind::tr: return state_->tr_at(x);
            case Kind::ref: return state_->ref_at(x);
        }
        return {};
    }

    Kind kind() const { return kind_; }
    double k() const { return state_->k(); }
    double x_c() const { return state_->x_c(); }
    const StationaryState& state() const { return *state_; }

    Region region(double x) const {
        if (x <= state_->a()) return Region::left_of_a;
        if (x < state_->x_c()) return Region::barrier_left_of_xc;
        if (x <= state_->b()) return Region::barrier_right_of_xc;
        return Region::right_of_b;
    }

private:
    Kind kind_;
    std::shared_ptr<const StationaryState> state_;
};

inline SubprocessField full_stationary(const BarrierSpec& barrier, double k,
                                       const PhysicalConstants& pc) {
    return SubprocessField(Kind::full, std::make_shared<StationaryState>(barrier, k, pc));
}

inline SubprocessField stationary_subprocess(const BarrierSpec& barrier, double k,
                                             Kind kind, const PhysicalConstants& pc) {
    return SubprocessField(kind, std::make_shared<StationaryState>(barrier, k, pc));
}

// Probability current density (hbar/m) Im(psi* dpsi/dx), in nm/ps units.
inline double current(Complex psi, Complex dpsi, const PhysicalConstants& pc) {
    return (pc.hbar / pc.mass()) * std::imag(std::conj(psi) * dpsi);
}

inline double current(const PsiD& p, const PhysicalConstants& pc) {
    return current(p.psi, p.dpsi, pc);
}

}  // namespace subscatter
