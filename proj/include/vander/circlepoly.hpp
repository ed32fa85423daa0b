#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <vector>

#include "vander/phase.hpp"
#include "vander/rng.hpp"

namespace vander {

/// Monic polynomial P(z) = prod_k (z - z_k) with all roots on the unit circle,
/// kept as root phases. |P(e^{i phi})| is always evaluated in the log domain:
/// log|e^{ia} - e^{ib}| = log(2 |sin((a-b)/2)|).
class CirclePolynomial {
public:
    explicit CirclePolynomial(std::vector<double> root_phases) : phase_(std::move(root_phases)) {
        for (auto& p : phase_) {
            p = std::fmod(p, kTwoPi);
            if (p < 0.0) p += kTwoPi;
        }
    }

    static CirclePolynomial from_phases(const PhaseVector& pv) {
        std::vector<double> ph(pv.count());
        for (int q = 0; q < pv.count(); ++q) ph[q] = kTwoPi * pv.value(q);
        return CirclePolynomial(std::move(ph));
    }

    static CirclePolynomial from_roots(std::span<const cplx> roots) {
        std::vector<double> ph(roots.size());
        for (size_t k = 0; k < roots.size(); ++k) {
            if (std::abs(std::abs(roots[k]) - 1.0) > 1e-12)
                throw std::invalid_argument("CirclePolynomial: root off the unit circle");
            ph[k] = std::arg(roots[k]);
        }
        return CirclePolynomial(std::move(ph));
    }

    int degree() const { return static_cast<int>(phase_.size()); }
    const std::vector<double>& root_phases() const { return phase_; }
    cplx root(int k) const { return {std::cos(phase_[k]), std::sin(phase_[k])}; }

    /// Polynomial with the root at 1-based index p removed.
    CirclePolynomial without_root(int p) const {
        std::vector<double> ph;
        ph.reserve(phase_.size() - 1);
        for (int k = 0; k < degree(); ++k)
            if (k != p - 1) ph.push_back(phase_[k]);
        return CirclePolynomial(std::move(ph));
    }

    /// Monomial coefficients (a_0 = 1 leading first). Linear-scale; only
    /// sensible at degrees where the coefficients fit a double.
    std::vector<cplx> coefficients() const {
        std::vector<cplx> c{1.0};
        for (int k = 0; k < degree(); ++k) {
            c.push_back(0.0);
            const cplx z = root(k);
            for (int j = static_cast<int>(c.size()) - 1; j >= 1; --j) c[j] -= z * c[j - 1];
        }
        return c;
    }

private:
    std::vector<double> phase_;
};

/// log|P(e^{i phi})| as a compensated sum of log(2|sin((phi - phi_k)/2)|).
/// Returns -inf when phi collides with a root phase.
inline double log_abs_poly(const CirclePolynomial& p, double phi) {
    double sum = 0.0, comp = 0.0;
    for (double pk : p.root_phases()) {
        const double s = std::abs(2.0 * std::sin(0.5 * (phi - pk)));
        if (s < 1e-15) return -std::numeric_limits<double>::infinity();
        const double term = std::log(s) - comp;
        const double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
    }
    return sum;
}

/// T_N(phi) = (1/sqrt(N)) log|P(e^{i phi})|^2
///          = (1/sqrt(N)) sum_q log(2 (1 - cos(phi - theta_q))).
inline double t_n_functional(const CirclePolynomial& p, double phi) {
    return 2.0 / std::sqrt(static_cast<double>(p.degree())) * log_abs_poly(p, phi);
}

namespace detail {

template <class F>
double golden_max(const F& f, double a, double b, double tol, double& best_x) {
    const double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    best_x = 0.5 * (a + b);
    return f(best_x);
}

/// Refine every strict local maximum of grid values (circular) and keep the best.
template <class F>
std::pair<double, double> refine_circular_maxima(const F& f, std::span<const double> grid_vals,
                                                 double tol) {
    const int g = static_cast<int>(grid_vals.size());
    const double step = kTwoPi / g;
    double best_val = -std::numeric_limits<double>::infinity(), best_phi = 0.0;
    for (int i = 0; i < g; ++i) {
        const double prev = grid_vals[(i + g - 1) % g], cur = grid_vals[i],
                     next = grid_vals[(i + 1) % g];
        if (!(cur >= prev && cur >= next) || !std::isfinite(cur)) continue;
        double phi = 0.0;
        const double v = golden_max(f, (i - 1) * step, (i + 1) * step, tol, phi);
        if (v > best_val) {
            best_val = v;
            best_phi = phi;
        }
    }
    return {best_phi, best_val};
}

} // namespace detail

struct CircleMax {
    double phi = 0.0;    // a maximizer, in [0, 2pi)
    double log_max = 0.0;
};

/// max over |z| = 1 of log|P(z)|: dense grid scan (at least 8N points, 16N by
/// default) followed by golden-section refinement of every grid-local maximum.
inline CircleMax max_on_circle(const CirclePolynomial& p, int grid = 0, double tol = 1e-10) {
    const int n = std::max(p.degree(), 1);
    if (grid == 0) grid = 16 * n;
    if (grid < 8 * n) throw std::invalid_argument("max_on_circle: grid must be >= 8N");
    std::vector<double> vals(grid);
    for (int i = 0; i < grid; ++i) vals[i] = log_abs_poly(p, kTwoPi * i / grid);
    auto f = [&](double phi) { return log_abs_poly(p, phi); };
    auto [phi, v] = detail::refine_circular_maxima(f, vals, tol);
    double out_phi = std::fmod(phi, kTwoPi);
    if (out_phi < 0.0) out_phi += kTwoPi;
    return {out_phi, v};
}

/// sum_{q != p} log|z_p - z_q| (p is 1-based).
inline double deleted_log_product(const CirclePolynomial& p, int idx) {
    const auto& ph = p.root_phases();
    const int n = p.degree();
    if (idx < 1 || idx > n) throw std::out_of_range("deleted_log_product: bad index");
    double sum = 0.0;
    for (int q = 0; q < n; ++q) {
        if (q == idx - 1) continue;
        const double s = std::abs(2.0 * std::sin(0.5 * (ph[idx - 1] - ph[q])));
        if (s == 0.0) throw std::invalid_argument("deleted_log_product: duplicate roots");
        sum += std::log(s);
    }
    return sum;
}

/// log max over |z| = 1 of |T_p(z)| = prod_{q != p} |z - z_q| / |z_p - z_q|.
/// |T_p| -> 1 as z -> z_p, so log 1 = 0 always enters as a candidate.
inline double t_p_max(const CirclePolynomial& p, int idx, int grid = 0, double tol = 1e-10) {
    const CirclePolynomial deflated = p.without_root(idx);
    const double m = max_on_circle(deflated, grid == 0 ? std::max(16 * p.degree(), 16) : grid, tol).log_max;
    return std::max(m - deleted_log_product(p, idx), 0.0);
}

/// t_p_max for every p off one shared grid evaluation of log|P|.
inline std::vector<double> t_p_max_all(const CirclePolynomial& p, int grid = 0, double tol = 1e-10) {
    const int n = p.degree();
    if (grid == 0) grid = 16 * n;
    if (grid < 8 * n) throw std::invalid_argument("t_p_max_all: grid must be >= 8N");
    std::vector<double> log_p(grid);
    for (int i = 0; i < grid; ++i) log_p[i] = log_abs_poly(p, kTwoPi * i / grid);

    const auto& ph = p.root_phases();
    std::vector<double> out(n);
    std::vector<double> vals(grid);
    for (int idx = 1; idx <= n; ++idx) {
        for (int i = 0; i < grid; ++i) {
            const double s = std::abs(2.0 * std::sin(0.5 * (kTwoPi * i / grid - ph[idx - 1])));
            // grid points colliding with any root stay out of the maximum
            vals[i] = (s < 1e-15 || !std::isfinite(log_p[i]))
                          ? -std::numeric_limits<double>::infinity()
                          : log_p[i] - std::log(s);
        }
        auto f = [&](double phi) {
            const double s = std::abs(2.0 * std::sin(0.5 * (phi - ph[idx - 1])));
            if (s < 1e-15) return -std::numeric_limits<double>::infinity();
            return log_abs_poly(p, phi) - std::log(s);
        };
        auto [phi, v] = detail::refine_circular_maxima(f, vals, tol);
        (void)phi;
        out[idx - 1] = std::max(v - deleted_log_product(p, idx), 0.0);
    }
    return out;
}

/// Index p0 minimizing prod_{q != p0} |z_{p0} - z_q|; Hadamard's inequality
/// guarantees the minimum deleted product is at most N.
inline int hadamard_index(const CirclePolynomial& p) {
    int best = 1;
    double best_v = std::numeric_limits<double>::infinity();
    for (int idx = 1; idx <= p.degree(); ++idx) {
        const double v = deleted_log_product(p, idx);
        if (v < best_v) {
            best_v = v;
            best = idx;
        }
    }
    return best;
}

struct Lambda1Bounds {
    double log_lower = 0.0;     // log of 1 / (N^3 max_p max|T_p|^2)
    double log_upper = 0.0;     // log of 1 / max_p max|T_p|^2
    double log_upper_4n2 = 0.0; // log of 4 N^2 / max|P|^2
};

/// Log-domain sandwich for the minimum Gram eigenvalue of the square ensemble
/// whose nodes are the roots of P.
inline Lambda1Bounds lambda1_sandwich(const CirclePolynomial& p, int grid = 0, double tol = 1e-10) {
    const int n = p.degree();
    const std::vector<double> tp = t_p_max_all(p, grid, tol);
    const double max_tp = *std::max_element(tp.begin(), tp.end());
    const double log_pmax = max_on_circle(p, grid, tol).log_max;
    Lambda1Bounds b;
    b.log_upper = -2.0 * max_tp;
    b.log_lower = b.log_upper - 3.0 * std::log(static_cast<double>(n));
    b.log_upper_4n2 = std::log(4.0) + 2.0 * std::log(static_cast<double>(n)) - 2.0 * log_pmax;
    return b;
}

/// N diametric root pairs (z_i, -z_i). The sign assignment is external: the
/// balanced point below depends only on the pair set.
struct PairedRoots {
    std::vector<cplx> base; // z_i; the pair is (z_i, -z_i)

    static PairedRoots from_phases(const PhaseVector& pv) {
        PairedRoots pr;
        pr.base.resize(pv.count());
        for (int q = 0; q < pv.count(); ++q) {
            const double a = kTwoPi * pv.value(q);
            pr.base[q] = cplx{std::cos(a), std::sin(a)};
        }
        return pr;
    }
};

/// Psi(phi) = log|P(e^{i phi})| + log|P(-e^{i phi})| = sum_k log(2 |sin(phi - phi_k)|),
/// using |e^{i phi} - z||e^{i phi} + z| = |e^{2 i phi} - z^2|. Flipping any
/// z_k -> -z_k shifts phi_k by pi and leaves every term unchanged.
inline double balanced_psi(const PairedRoots& pairs, double phi) {
    double sum = 0.0;
    for (const cplx& z : pairs.base) {
        const double s = std::abs(2.0 * std::sin(phi - std::arg(z)));
        if (s == 0.0) return -std::numeric_limits<double>::infinity();
        sum += std::log(s);
    }
    return sum;
}

/// A unit-modulus w with |P(w) P(-w)| = 1, located by a sign-change scan of
/// Psi on a 64N grid followed by bisection. Psi integrates to zero over the
/// circle, so a sign change exists unless Psi vanishes identically.
inline cplx find_balanced_point(const PairedRoots& pairs, double target = 1e-10) {
    const int n = std::max<int>(1, static_cast<int>(pairs.base.size()));
    auto psi = [&](double phi) { return balanced_psi(pairs, phi); };
    for (int attempt = 0, grid = 64 * n; attempt < 2; ++attempt, grid *= 4) {
        double prev_phi = 0.0, prev_v = psi(0.0);
        for (int i = 1; i <= grid; ++i) {
            const double phi = kTwoPi * i / grid;
            const double v = psi(phi);
            // -inf endpoints (root collisions) count as negative values
            const bool sign_change = (prev_v <= 0.0 && v >= 0.0) || (prev_v >= 0.0 && v <= 0.0);
            if (sign_change) {
                double a = prev_phi, b = phi, fa = prev_v;
                for (int it = 0; it < 200; ++it) {
                    const double m = 0.5 * (a + b);
                    const double fm = psi(m);
                    if (std::abs(fm) <= target) return {std::cos(m), std::sin(m)};
                    if ((fa <= 0.0) == (fm <= 0.0)) {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                }
            }
            prev_phi = phi;
            prev_v = v;
        }
    }
    throw search_failure("find_balanced_point: no sign change of Psi located");
}

struct SignFlipSample {
    double y = 0.0;      // sum form: sum_i v_i log(alpha_i / beta_i)
    double y_poly = 0.0; // polynomial form: log|P_v(w)|^2
};

/// y(v) = sum_i v_i log(|w - z_i| / |w + z_i|), and the same value through
/// log|P_v(w)|^2 where P_v has roots v_i z_i. The two agree because
/// prod alpha_i beta_i = 1 at the balanced point.
inline SignFlipSample sign_flip_sample(const PairedRoots& pairs, cplx w, std::span<const int> signs) {
    if (signs.size() != pairs.base.size())
        throw std::invalid_argument("sign_flip_sample: sign vector size mismatch");
    SignFlipSample out;
    for (size_t i = 0; i < pairs.base.size(); ++i) {
        const double alpha = std::abs(w - pairs.base[i]);
        const double beta = std::abs(w + pairs.base[i]);
        out.y += signs[i] * (std::log(alpha) - std::log(beta));
        out.y_poly += 2.0 * std::log(signs[i] > 0 ? alpha : beta);
    }
    return out;
}

/// gamma = log(cos(pi/8) / sin(pi/8)) = log(1 + sqrt 2), about 0.8814: the
/// guaranteed log-ratio gap for roots in the half of the circle far from w.
inline double sign_gap_constant() { return std::log(std::cos(kPi / 8.0) / std::sin(kPi / 8.0)); }

/// Exact one-dimensional small-ball probability: the numerator over 2^n of
/// p_1(n, Delta) = 2^{-n} sum of the s largest binomial coefficients among
/// C(n,1..n), where s = floor(Delta) + 1. Requires n >= s.
inline uint64_t lo_exact_numerator(int n, double delta) {
    if (delta < 0.0) throw std::domain_error("lo_exact: Delta must be nonnegative");
    const int s = static_cast<int>(std::floor(delta)) + 1;
    if (n < s) throw std::domain_error("lo_exact: requires n >= s = floor(Delta) + 1");
    if (n > 62) throw std::domain_error("lo_exact: n too large for exact 64-bit arithmetic");
    std::vector<uint64_t> binom(n + 1);
    binom[0] = 1;
    for (int m = 1; m <= n; ++m) binom[m] = binom[m - 1] * (n - m + 1) / m;
    std::sort(binom.begin() + 1, binom.end(), std::greater<>());
    uint64_t num = 0;
    for (int j = 1; j <= s; ++j) num += binom[j];
    return num;
}

inline double lo_exact(int n, double delta) {
    return std::ldexp(static_cast<double>(lo_exact_numerator(n, delta)), -n);
}

struct RandPolyResult {
    double mean_two_log_max = 0.0;
    double threshold_gamma_sqrt_pi = 0.0; // gamma sqrt(pi) eps sqrt(N) / 2
    double threshold_sqrt_gamma_pi = 0.0; // sqrt(gamma pi) eps sqrt(N) / 2
    double freq_gamma_sqrt_pi = 0.0;      // fraction of trials exceeding each threshold
    double freq_sqrt_gamma_pi = 0.0;
};

/// Frequency of {2 log max|P| >= threshold} over seeded trials with uniform
/// roots. Both threshold normalizations in circulation are computed and
/// reported side by side.
inline RandPolyResult randpoly_experiment(int n, double eps, int trials, uint64_t seed,
                                          int grid = 0, double tol = 1e-9) {
    if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("randpoly_experiment: eps in (0,1)");
    RandPolyResult out;
    const double g = sign_gap_constant();
    out.threshold_gamma_sqrt_pi = g * std::sqrt(kPi) * eps * std::sqrt(static_cast<double>(n)) / 2.0;
    out.threshold_sqrt_gamma_pi = std::sqrt(g * kPi) * eps * std::sqrt(static_cast<double>(n)) / 2.0;
    int hits_a = 0, hits_b = 0;
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        const PhaseVector pv = sample_phases(n, 1, SeedSpec{seed, static_cast<uint64_t>(t)});
        const double two_log_max = 2.0 * max_on_circle(CirclePolynomial::from_phases(pv), grid, tol).log_max;
        sum += two_log_max;
        if (two_log_max >= out.threshold_gamma_sqrt_pi) ++hits_a;
        if (two_log_max >= out.threshold_sqrt_gamma_pi) ++hits_b;
    }
    out.mean_two_log_max = sum / trials;
    out.freq_gamma_sqrt_pi = static_cast<double>(hits_a) / trials;
    out.freq_sqrt_gamma_pi = static_cast<double>(hits_b) / trials;
    return out;
}

} // namespace vander
