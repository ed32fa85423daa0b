#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "vander/phase.hpp"
#include "vander/quadrature.hpp"
#include "vander/rng.hpp"

namespace vander {

/// Discretized Brownian bridge on [0, 2pi]: values at psi_j = 2 pi j / M,
/// pinned to zero at both endpoints.
struct BridgePath {
    int grid = 0;          // M
    std::vector<double> w; // M + 1 samples

    double spacing() const { return kTwoPi / grid; }
};

/// W(psi) = B(psi) - (psi / 2pi) B(2pi) for a Gaussian random walk B with
/// step variance 2pi/M. Deterministic given the seed; endpoints exactly zero.
inline BridgePath sample_bridge(int m, uint64_t seed) {
    if (m < 2 || (m & (m - 1)) != 0) throw std::invalid_argument("sample_bridge: M must be a power of two >= 2");
    BridgePath path;
    path.grid = m;
    path.w.assign(m + 1, 0.0);
    Rng rng(trial_seed(seed, "bridge", 0));
    const double step_sd = std::sqrt(kTwoPi / m);
    double b = 0.0;
    for (int j = 1; j <= m; ++j) {
        b += step_sd * rng.gaussian();
        path.w[j] = b;
    }
    const double drift = path.w[m];
    for (int j = 0; j <= m; ++j) path.w[j] -= (static_cast<double>(j) / m) * drift;
    path.w[m] = 0.0;
    return path;
}

/// Shift by phi (snapped to the nearest grid point): W_phi(theta) =
/// W(phi + theta) - W(phi), wrapped past 2pi. Endpoints stay exactly zero.
inline BridgePath shift_bridge(const BridgePath& path, double phi) {
    const int m = path.grid;
    int s = static_cast<int>(std::llround(phi / path.spacing())) % m;
    if (s < 0) s += m;
    BridgePath out;
    out.grid = m;
    out.w.assign(m + 1, 0.0);
    const double base = path.w[s];
    for (int j = 0; j <= m; ++j) {
        int idx = s + j;
        if (idx > m) idx -= m;
        out.w[j] = path.w[idx] - base;
    }
    out.w[0] = 0.0;
    out.w[m] = 0.0;
    return out;
}

/// Dyadic phases on [0, 2pi) enumerated level by level:
/// pi; pi/2, 3pi/2; pi/4, 3pi/4, ...; depth R gives 2^R - 1 phases.
inline std::vector<double> dyadic_phases(int depth) {
    if (depth < 1 || depth > 24) throw std::invalid_argument("dyadic_phases: 1 <= depth <= 24");
    std::vector<double> out;
    out.reserve((1u << depth) - 1);
    for (int level = 1; level <= depth; ++level) {
        const double unit = kTwoPi / (1 << level);
        for (int odd = 1; odd < (1 << level); odd += 2) out.push_back(odd * unit);
    }
    return out;
}

namespace detail {

// Value of the shifted path at grid index j without materializing the shift;
// agrees bit for bit with shift_bridge followed by indexing.
struct ShiftView {
    const BridgePath& path;
    int s;
    double base;

    ShiftView(const BridgePath& p, double phi) : path(p) {
        s = static_cast<int>(std::llround(phi / p.spacing())) % p.grid;
        if (s < 0) s += p.grid;
        base = p.w[s];
    }
    double operator()(int j) const {
        int idx = s + j;
        if (idx > path.grid) idx -= path.grid;
        return path.w[idx] - base;
    }
};

} // namespace detail

/// The singular kernel sin(psi)/(1 - cos(psi)) = cot(psi/2) tabulated on an
/// M-point grid; shared across phases and paths when many I_phi values are
/// needed on one grid.
inline std::vector<double> i_phi_kernel(int m) {
    std::vector<double> g(m + 1, 0.0);
    const double h = kTwoPi / m;
    for (int j = 1; j < m; ++j) g[j] = std::cos(0.5 * j * h) / std::sin(0.5 * j * h);
    return g;
}

/// I_phi = integral over [eps, 2pi - eps] of W_phi(psi) sin(psi)/(1 - cos(psi)),
/// by the trapezoid rule on the path grid. eps below the grid spacing cannot
/// be resolved and is an error.
inline double i_phi(const BridgePath& path, double phi, double eps,
                    std::span<const double> kernel) {
    const double h = path.spacing();
    if (eps < h * (1.0 - 1e-12)) throw std::invalid_argument("i_phi: eps below grid resolution");
    if (eps >= kPi) throw std::invalid_argument("i_phi: eps must be below pi");
    if (static_cast<int>(kernel.size()) != path.grid + 1)
        throw std::invalid_argument("i_phi: kernel size mismatch");
    const detail::ShiftView w(path, phi);
    const int j0 = static_cast<int>(std::ceil(eps / h - 1e-9));
    const int j1 = static_cast<int>(std::floor((kTwoPi - eps) / h + 1e-9));
    double sum = 0.5 * (w(j0) * kernel[j0] + w(j1) * kernel[j1]);
    for (int j = j0 + 1; j < j1; ++j) sum += w(j) * kernel[j];
    return sum * h;
}

inline double i_phi(const BridgePath& path, double phi, double eps) {
    return i_phi(path, phi, eps, i_phi_kernel(path.grid));
}

/// The integration-by-parts form of the truncated functional:
/// [W_phi(psi) log 2(1 - cos psi)] at the cut points, minus the raw integral.
/// For paths pinned at the ends the bracket vanishes as eps -> 0, so this
/// carries the opposite sign of i_phi in that limit.
inline double i_phi_parts(const BridgePath& path, double phi, double eps) {
    const double h = path.spacing();
    if (eps < h * (1.0 - 1e-12)) throw std::invalid_argument("i_phi_parts: eps below grid resolution");
    const detail::ShiftView w(path, phi);
    const int j0 = static_cast<int>(std::ceil(eps / h - 1e-9));
    const int j1 = static_cast<int>(std::floor((kTwoPi - eps) / h + 1e-9));
    const double bracket =
        w(j1) * log_two_minus_two_cos(j1 * h) - w(j0) * log_two_minus_two_cos(j0 * h);
    return bracket - i_phi(path, phi, eps);
}

/// I*: maximum of I_phi over the dyadic phases down to the given depth.
/// Nondecreasing in depth by construction.
inline double i_star(const BridgePath& path, int depth, double eps) {
    const std::vector<double> kernel = i_phi_kernel(path.grid);
    double best = -std::numeric_limits<double>::infinity();
    for (double phi : dyadic_phases(depth)) best = std::max(best, i_phi(path, phi, eps, kernel));
    return best;
}

/// Cycled empirical process W_{N,phi}(psi) = sqrt(N) (F_{N,phi}(psi) - psi/2pi),
/// where F_{N,phi} is the right-continuous empirical CDF of the phase angles
/// shifted by phi and wrapped to [0, 2pi).
struct StepProcess {
    int n = 0;
    std::vector<double> jumps; // sorted shifted angles

    double cdf(double psi) const {
        const auto it = std::upper_bound(jumps.begin(), jumps.end(), psi);
        return static_cast<double>(it - jumps.begin()) / n;
    }
    double value(double psi) const {
        return std::sqrt(static_cast<double>(n)) * (cdf(psi) - psi / kTwoPi);
    }
    /// sup over [0, 2pi) of |W|; checked at every jump from both sides.
    double sup_abs() const {
        const double root_n = std::sqrt(static_cast<double>(n));
        double best = 0.0;
        for (size_t i = 0; i < jumps.size(); ++i) {
            const double at = static_cast<double>(i + 1) / n - jumps[i] / kTwoPi;
            const double before = static_cast<double>(i) / n - jumps[i] / kTwoPi;
            best = std::max({best, std::abs(at), std::abs(before)});
        }
        return root_n * best;
    }
};

inline StepProcess empirical_process(const PhaseVector& phases, double phi) {
    StepProcess sp;
    sp.n = phases.count();
    sp.jumps.resize(sp.n);
    for (int q = 0; q < sp.n; ++q) {
        double psi = std::fmod(kTwoPi * phases.value(q) - phi, kTwoPi);
        if (psi < 0.0) psi += kTwoPi;
        sp.jumps[q] = psi;
    }
    std::sort(sp.jumps.begin(), sp.jumps.end());
    return sp;
}

/// mu_eps = (2/2pi) int_0^eps log(2(1 - cos psi)) dpsi.
inline double mu_eps(double eps, double tol = 1e-11) {
    if (eps <= 0.0 || eps >= kPi) throw std::invalid_argument("mu_eps: eps in (0, pi)");
    return integrate_tanh_sinh([](double x) { return log_two_minus_two_cos(x); }, 0.0, eps, tol) /
           kPi;
}

/// sigma^2_eps = (2/2pi) int_0^eps log^2(2(1 - cos psi)) dpsi - mu_eps^2:
/// the variance of one truncated summand of Z_{N,eps}.
inline double sigma2_eps(double eps, double tol = 1e-11) {
    if (eps <= 0.0 || eps >= kPi) throw std::invalid_argument("sigma2_eps: eps in (0, pi)");
    const double second = integrate_tanh_sinh(
                              [](double x) {
                                  const double l = log_two_minus_two_cos(x);
                                  return l * l;
                              },
                              0.0, eps, tol) /
                          kPi;
    const double mu = mu_eps(eps, tol);
    return second - mu * mu;
}

/// T_{N,eps}(phi): sqrt(N) [ (F - psi/2pi) log 2(1-cos psi) ] at the cut
/// points minus sqrt(N) int (F - psi/2pi) sin/(1-cos), integrated segment by
/// segment between the jumps of F (the process is linear there).
inline double t_n_eps(const PhaseVector& phases, double phi, double eps, double tol = 1e-12) {
    if (eps <= 0.0 || eps >= 0.5 * kPi) throw std::invalid_argument("t_n_eps: eps in (0, pi/2)");
    const StepProcess sp = empirical_process(phases, phi);
    const double a = eps, b = kTwoPi - eps;
    const double bracket = sp.value(b) * log_two_minus_two_cos(b) - sp.value(a) * log_two_minus_two_cos(a);

    std::vector<double> cuts{a};
    for (double j : sp.jumps)
        if (j > a && j < b) cuts.push_back(j);
    cuts.push_back(b);
    const double root_n = std::sqrt(static_cast<double>(sp.n));
    double integral = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (hi - lo < 1e-15) continue;
        const double f_const = sp.cdf(0.5 * (lo + hi)); // constant between jumps
        integral += integrate_simpson(
            [&](double psi) {
                return root_n * (f_const - psi / kTwoPi) * std::cos(0.5 * psi) / std::sin(0.5 * psi);
            },
            lo, hi, tol);
    }
    return bracket - integral;
}

/// Z_{N,eps}(phi): (1/sqrt N) sum over phases within eps of phi (circularly)
/// of log(2(1 - cos(phi - theta_q))), centered by sqrt(N) mu_eps.
inline double z_n_eps(const PhaseVector& phases, double phi, double eps, double tol = 1e-11) {
    if (eps <= 0.0 || eps >= 0.5 * kPi) throw std::invalid_argument("z_n_eps: eps in (0, pi/2)");
    const StepProcess sp = empirical_process(phases, phi);
    double sum = 0.0;
    for (double psi : sp.jumps)
        if (psi <= eps || psi > kTwoPi - eps) sum += log_two_minus_two_cos(psi);
    const double root_n = std::sqrt(static_cast<double>(sp.n));
    return sum / root_n - root_n * mu_eps(eps, tol);
}

} // namespace vander
