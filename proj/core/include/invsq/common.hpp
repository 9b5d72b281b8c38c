#pragma once

#include <stdexcept>
#include <string>

namespace invsq {

/// Domain error: preconditions violated, solvers failed to converge, etc.
/// The CLI maps these to exit code 1; usage problems exit with 2.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;

/// Critical coupling (d-2)^2/4 of the inverse-square potential.
inline double critical_coupling(int d) {
    const double q = (d - 2) / 2.0;
    return q * q;
}

}  // namespace invsq
