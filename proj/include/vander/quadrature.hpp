#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>

#include "vander/common.hpp"

namespace vander {

/// Quadrature failed to reach the requested tolerance.
struct quadrature_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson on [a,b]. The integrand must be finite on the closed
/// interval; use integrate_tanh_sinh for endpoint singularities.
template <class F>
double integrate_simpson(const F& f, double a, double b, double tol = 1e-10, int max_depth = 40) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// tanh-sinh (double exponential) quadrature on (a,b). Tolerates integrable
/// endpoint singularities such as log^2 at 0 or (4-x)^{1/2}/x^{1/2}.
template <class F>
double integrate_tanh_sinh(const F& f, double a, double b, double tol = 1e-11) {
    const double half = 0.5 * (b - a);
    const double tmax = 7.0; // weights underflow past this abscissa

    // Abscissas are formed from the distance to the nearer endpoint,
    // 1 -+ tanh(u) = 2 / (1 + e^{+-2u}), so points exponentially close to a
    // singular endpoint keep full relative precision.
    auto term = [&](double t) -> double {
        const double u = 0.5 * kPi * std::sinh(t);
        const double dist = half * 2.0 / (1.0 + std::exp(2.0 * std::abs(u)));
        const double x = u >= 0.0 ? b - dist : a + dist;
        if (x <= a || x >= b) return 0.0;
        const double ch = std::cosh(u);
        const double w = half * 0.5 * kPi * std::cosh(t) / (ch * ch);
        const double v = f(x);
        if (!std::isfinite(v) || !std::isfinite(w)) return 0.0;
        return v * w;
    };

    double h = 1.0;
    double sum = term(0.0);
    for (double t = h; t <= tmax; t += h) sum += term(t) + term(-t);
    double integral = sum * h;

    double prev_change = std::numeric_limits<double>::infinity();
    for (int level = 1; level <= 14; ++level) {
        h *= 0.5;
        double add = 0.0;
        for (double t = h; t <= tmax; t += 2.0 * h) add += term(t) + term(-t);
        const double next = 0.5 * integral + add * h;
        const double change = std::abs(next - integral);
        integral = next;
        if (level >= 4 && change <= tol * (std::abs(integral) + 1.0) &&
            prev_change <= std::sqrt(tol) * (std::abs(integral) + 1.0))
            return integral;
        prev_change = change;
    }
    throw quadrature_error("tanh-sinh quadrature did not converge");
}

} // namespace vander
