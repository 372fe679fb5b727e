#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "subscatter/errors.hpp"
#include "subscatter/grid.hpp"

namespace subscatter {

namespace detail {

// Fixed-structure pairwise sum: the reduction tree depends only on the index
// range, never on thread count, so results are bit-reproducible.
template <typename T, typename F>
T pairwise_sum(std::size_t lo, std::size_t hi, const F& term) {
    const std::size_t n = hi - lo;
    if (n == 0) return T{};
    if (n <= 8) {
        T acc = term(lo);
        for (std::size_t i = lo + 1; i < hi; ++i) acc += term(i);
        return acc;
    }
    const std::size_t mid = lo + n / 2;
    return pairwise_sum<T>(lo, mid, term) + pairwise_sum<T>(mid, hi, term);
}

}  // namespace detail

// Composite Simpson weight for node i of an odd-count grid, in units of h/3.
inline double simpson_weight(std::size_t i, std::size_t count) {
    if (i == 0 || i + 1 == count) return 1.0;
    return (i % 2 == 1) ? 4.0 : 2.0;
}

// Composite Simpson integral of sampled values over a uniform grid.
template <typename T>
T integrate(std::span<const T> values, const UniformGrid& grid) {
    if (values.size() != grid.count)
        throw ConfigError("integrate: value count does not match grid");
    const double scale = grid.spacing() / 3.0;
    T sum = detail::pairwise_sum<T>(0, grid.count, [&](std::size_t i) {
        return values[i] * simpson_weight(i, grid.count);
    });
    return sum * scale;
}

template <typename T>
T integrate(const std::vector<T>& values, const UniformGrid& grid) {
    return integrate(std::span<const T>(values.data(), values.size()), grid);
}

// Simpson integral of f sampled on the grid nodes.
template <typename F>
auto integrate_fn(const F& f, const UniformGrid& grid) -> decltype(f(0.0)) {
    using T = decltype(f(0.0));
    const double scale = grid.spacing() / 3.0;
    T sum = detail::pairwise_sum<T>(0, grid.count, [&](std::size_t i) {
        return f(grid.point(i)) * simpson_weight(i, grid.count);
    });
    return sum * scale;
}

}  // namespace subscatter
