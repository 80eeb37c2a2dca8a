// Shared scalar types, tolerances and error classes.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ntca {

using cdouble = std::complex<double>;
using cvector = std::vector<cdouble>;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kProjectionFloor = 1e-300;
inline constexpr int kDefaultDenseCap = 14;

// Raised when inputs violate a documented precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when a numerical contract cannot be met at runtime
// (zero-probability projection, non-convergent solve, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw PreconditionError(msg);
}

} // namespace ntca
