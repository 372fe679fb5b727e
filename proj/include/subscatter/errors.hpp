#pragma once

#include <stdexcept>
#include <string>

namespace subscatter {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical/physical domain of an operation.
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Invalid scenario/grid configuration.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Root bracket does not change sign.
struct NoRootError : Error {
    explicit NoRootError(const std::string& msg) : Error(msg) {}
};

// Scattering coefficient denominator numerically vanished.
struct SingularCoefficientError : Error {
    explicit SingularCoefficientError(const std::string& msg) : Error(msg) {}
};

// Packet mass leaked past the spatial grid.
struct GridTooSmallError : Error {
    explicit GridTooSmallError(const std::string& msg) : Error(msg) {}
};

}  // namespace subscatter
