#pragma once

#include <stdexcept>
#include <string>

namespace gipeps {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeError : Error { using Error::Error; };
struct LabelError : Error { using Error::Error; };
struct ChargeError : Error { using Error::Error; };
struct RegionError : Error { using Error::Error; };
struct GeometryError : Error { using Error::Error; };
struct LimitError : Error { using Error::Error; };
struct CapExceeded : Error { using Error::Error; };
struct BlockLeakage : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct ZeroOperator : Error { using Error::Error; };

struct NonConvergence : Error {
    NonConvergence(const std::string& what, double residual, int iterations)
        : Error(what), residual(residual), iterations(iterations) {}
    double residual;
    int iterations;
};

} // namespace gipeps
