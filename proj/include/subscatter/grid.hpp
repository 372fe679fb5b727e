#pragma once

#include <cstddef>
#include <vector>

#include "subscatter/errors.hpp"

namespace subscatter {

// Uniform 1D grid with an odd number of nodes so composite Simpson applies.
struct UniformGrid {
    double start = 0.0;
    double stop = 1.0;
    std::size_t count = 3;

    UniformGrid() = default;
    UniformGrid(double start_, double stop_, std::size_t count_)
        : start(start_), stop(stop_), count(count_) {
        validate();
    }

    void validate() const {
        if (!(stop > start)) throw ConfigError("grid: stop must exceed start");
        if (count < 3 || count % 2 == 0)
            throw ConfigError("grid: node count must be odd and >= 3");
    }

    double spacing() const { return (stop - start) / static_cast<double>(count - 1); }
    double point(std::size_t i) const { return start + spacing() * static_cast<double>(i); }

    std::vector<double> points() const {
        std::vector<double> xs(count);
        for (std::size_t i = 0; i < count; ++i) xs[i] = point(i);
        return xs;
    }
};

// Smallest odd count >= n.
inline std::size_t odd_count(std::size_t n) { return (n % 2 == 0) ? n + 1 : n; }

}  // namespace subscatter
