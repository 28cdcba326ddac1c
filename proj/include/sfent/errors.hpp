#pragma once

#include <stdexcept>
#include <string>

namespace sfent {

/// Invalid or inconsistent configuration; maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Failure of a numerical procedure (non-finite values, solver breakdown,
/// non-convergence, truncated support); maps to CLI exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sfent
