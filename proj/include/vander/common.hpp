#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace vander {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// log(2 (1 - cos x)) = log|e^{ix} - 1|^2, evaluated as 2 log(2 |sin(x/2)|)
/// so arguments near the singularity keep full precision. Returns -inf at
/// multiples of 2 pi.
inline double log_two_minus_two_cos(double x) {
    return 2.0 * std::log(std::abs(2.0 * std::sin(0.5 * x)));
}

/// Eigensolver failed to reach its off-diagonal tolerance within the sweep
/// budget. Carries the relative off-diagonal residual that was reached.
struct convergence_error : std::runtime_error {
    double residual;
    explicit convergence_error(double r)
        : std::runtime_error("eigensolver did not converge, relative off-diagonal residual " +
                             std::to_string(r)),
          residual(r) {}
};

/// An exact enumeration (or eigensolve) was requested beyond its configured budget.
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A root search scanned its whole grid without finding a sign change.
struct search_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A matrix that must be inverted is singular (duplicate Vandermonde nodes).
struct singular_matrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace vander
