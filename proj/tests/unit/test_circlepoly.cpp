#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "vander/circlepoly.hpp"
#include "vander/inverse.hpp"
#include "vander/quadrature.hpp"
#include "vander/spectral.hpp"
#include "vander/stats.hpp"

using namespace vander;

namespace {

CirclePolynomial roots_of_unity(int n) {
    std::vector<double> ph(n);
    for (int k = 0; k < n; ++k) ph[k] = kTwoPi * k / n;
    return CirclePolynomial(std::move(ph));
}

/// 2^n enumeration of unit-step sign sums; the largest mass any window of s
/// consecutive lattice values can capture.
uint64_t lo_exhaustive(int n, double delta) {
    const int s = static_cast<int>(std::floor(delta)) + 1;
    std::vector<uint64_t> count(n + 1, 0);
    for (uint64_t v = 0; v < (1ull << n); ++v) ++count[std::popcount(v)];
    uint64_t best = 0;
    for (int j = 0; j + s <= n + 1; ++j) {
        uint64_t w = 0;
        for (int i = j; i < j + s; ++i) w += count[i];
        best = std::max(best, w);
    }
    return best;
}

} // namespace

TEST_CASE("log_abs_poly: single root, roots of unity, linear-scale oracle") {
    const CirclePolynomial single(std::vector<double>{0.0});
    CHECK(log_abs_poly(single, kPi) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(std::isinf(log_abs_poly(single, 0.0)));

    for (int n : {4, 9}) {
        const CirclePolynomial p = roots_of_unity(n);
        CHECK(log_abs_poly(p, kPi / n) == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    }

    for (int n : {8, 64}) {
        const PhaseVector pv = sample_phases(n, 1, SeedSpec{42, static_cast<uint64_t>(n)});
        const CirclePolynomial p = CirclePolynomial::from_phases(pv);
        Rng rng(5);
        for (int rep = 0; rep < 10; ++rep) {
            const double phi = kTwoPi * rng.uniform();
            cplx prod = 1.0;
            const cplx z{std::cos(phi), std::sin(phi)};
            for (int k = 0; k < n; ++k) prod *= z - p.root(k);
            CHECK(log_abs_poly(p, phi) == doctest::Approx(std::log(std::abs(prod))).epsilon(1e-10));
        }
    }
}

TEST_CASE("t_n_functional: fixed value, zero mean, variance pi^2/3") {
    const CirclePolynomial single(std::vector<double>{0.0});
    CHECK(t_n_functional(single, kPi / 3.0) == doctest::Approx(0.0).epsilon(1e-12));

    // quadrature oracle for the variance of one summand, frozen at pi^2/3
    const double ref = integrate_tanh_sinh(
                           [](double x) {
                               const double l = log_two_minus_two_cos(x);
                               return l * l;
                           },
                           0.0, kPi, 1e-11) /
                       kPi;
    CHECK(ref == doctest::Approx(kPi * kPi / 3.0).epsilon(1e-8));

    const int n = 400, trials = 5000;
    const double phi = 1.0;
    std::vector<double> vals(trials);
    for (int t = 0; t < trials; ++t) {
        const PhaseVector pv = sample_phases(n, 1, SeedSpec{61, static_cast<uint64_t>(t)});
        vals[t] = t_n_functional(CirclePolynomial::from_phases(pv), phi);
    }
    CHECK(std::abs(mean(vals)) < 3.0 * std_error(vals));
    CHECK(sample_variance(vals) == doctest::Approx(kPi * kPi / 3.0).epsilon(0.10));
}

TEST_CASE("max_on_circle: closed forms, grid contract, rotation invariance") {
    const CirclePolynomial single(std::vector<double>{0.0});
    const CircleMax m1 = max_on_circle(single);
    CHECK(m1.log_max == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(m1.phi == doctest::Approx(kPi).epsilon(1e-6));

    for (int n : {8, 16}) {
        const CircleMax m = max_on_circle(roots_of_unity(n));
        CHECK(m.log_max == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    }

    CHECK_THROWS_AS(max_on_circle(roots_of_unity(8), 32), std::invalid_argument);

    const PhaseVector pv = sample_phases(24, 1, SeedSpec{43, 0});
    const CirclePolynomial p = CirclePolynomial::from_phases(pv);
    const double base = max_on_circle(p).log_max;
    Rng rng(44);
    for (int rep = 0; rep < 3; ++rep) {
        const double rot = kTwoPi * rng.uniform();
        std::vector<double> shifted = p.root_phases();
        for (double& x : shifted) x += rot;
        CHECK(max_on_circle(CirclePolynomial(std::move(shifted))).log_max ==
              doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("max_on_circle: coefficient sandwich") {
    for (uint64_t s = 0; s < 4; ++s) {
        const int n = 32;
        const PhaseVector pv = sample_phases(n, 1, SeedSpec{45 + s, 0});
        const CirclePolynomial p = CirclePolynomial::from_phases(pv);
        double coeff_sum = 0.0;
        for (const cplx& c : p.coefficients()) coeff_sum += std::abs(c);
        const double peak = std::exp(max_on_circle(p).log_max);
        CHECK(coeff_sum / (n + 1) <= peak * (1.0 + 1e-9));
        CHECK(peak <= coeff_sum * (1.0 + 1e-9));
    }
}

TEST_CASE("t_p_max: two nodes, symmetry at roots of unity, beta sandwich") {
    const CirclePolynomial pm(std::vector<double>{0.0, kPi});
    CHECK(t_p_max(pm, 1) == doctest::Approx(0.0).epsilon(1e-10));

    const CirclePolynomial eq = roots_of_unity(12);
    const std::vector<double> all = t_p_max_all(eq);
    for (double v : all) CHECK(v == doctest::Approx(all[0]).epsilon(1e-9));

    const int n = 16;
    const PhaseVector pv = sample_phases(n, 1, SeedSpec{47, 0});
    const CirclePolynomial p = CirclePolynomial::from_phases(pv);
    const std::vector<double> beta = beta_closed_form(nodes_from_phases(pv));
    const std::vector<double> tp = t_p_max_all(p);
    const double half_log_n = 0.5 * std::log(static_cast<double>(n));
    for (int idx = 0; idx < n; ++idx) {
        const double lhs = std::log(beta[idx]) - std::log(static_cast<double>(n));
        const double mid = half_log_n + tp[idx];
        const double rhs = std::log(beta[idx]);
        CHECK(lhs <= mid + 1e-9);
        CHECK(mid <= rhs + 1e-9);
        CHECK(t_p_max(p, idx + 1) == doctest::Approx(tp[idx]).epsilon(1e-9));
    }
}

TEST_CASE("hadamard_index: deleted product at most N") {
    const CirclePolynomial eq = roots_of_unity(10);
    for (int idx = 1; idx <= 10; ++idx)
        CHECK(deleted_log_product(eq, idx) == doctest::Approx(std::log(10.0)).epsilon(1e-10));

    const CirclePolynomial pm(std::vector<double>{0.0, kPi});
    CHECK(hadamard_index(pm) >= 1);
    CHECK(deleted_log_product(pm, hadamard_index(pm)) == doctest::Approx(std::log(2.0)));

    const PhaseVector pv = sample_phases(64, 1, SeedSpec{48, 0});
    const CirclePolynomial p = CirclePolynomial::from_phases(pv);
    CHECK(deleted_log_product(p, hadamard_index(p)) <= std::log(64.0) + 1e-9);
}

TEST_CASE("lambda1_sandwich brackets the eigensolver at desk scale") {
    // exact cases: equispaced roots and the two-node ensemble give lambda_1 = 1
    for (const CirclePolynomial& p :
         {roots_of_unity(8), CirclePolynomial(std::vector<double>{0.0, kPi})}) {
        const Lambda1Bounds b = lambda1_sandwich(p);
        CHECK(b.log_lower <= 1e-9);
        CHECK(std::min(b.log_upper, b.log_upper_4n2) >= -1e-9);
    }

    for (uint64_t s = 0; s < 5; ++s) {
        for (int n : {8, 16}) {
            const PhaseVector pv = sample_phases(n, 1, SeedSpec{120 + s, 0});
            const double lam1 = eig_hermitian(gram(build_vandermonde(pv, n))).spectrum.min();
            const Lambda1Bounds b = lambda1_sandwich(CirclePolynomial::from_phases(pv));
            const double log_l1 = std::log(lam1);
            CHECK(log_l1 >= b.log_lower - 1e-6);
            CHECK(log_l1 <= std::min(b.log_upper, b.log_upper_4n2) + 1e-6);
        }
    }
}

TEST_CASE("find_balanced_point: closed-form zeros and the zero-mean of Psi") {
    PairedRoots one;
    one.base = {cplx{1.0, 0.0}};
    const cplx w = find_balanced_point(one);
    CHECK(std::abs(balanced_psi(one, std::arg(w))) <= 1e-10);
    // zeros of log|e^{2 i phi} - 1| sit where 2 |sin phi| = 1
    CHECK(std::abs(2.0 * std::abs(std::sin(std::arg(w))) - 1.0) < 1e-9);

    const PhaseVector pv = sample_phases(9, 1, SeedSpec{49, 0});
    PairedRoots pairs = PairedRoots::from_phases(pv);
    const cplx wb = find_balanced_point(pairs);
    const double psi_w = balanced_psi(pairs, std::arg(wb));
    CHECK(std::abs(psi_w) <= 1e-10);

    // |P(w) P(-w)| = 1 through the two-factor route, and sign-flip invariance
    const CirclePolynomial p = CirclePolynomial::from_roots(pairs.base);
    const double two_call = log_abs_poly(p, std::arg(wb)) + log_abs_poly(p, std::arg(wb) + kPi);
    CHECK(two_call == doctest::Approx(psi_w).epsilon(1e-11));
    PairedRoots flipped = pairs;
    flipped.base[2] = -flipped.base[2];
    flipped.base[5] = -flipped.base[5];
    CHECK(balanced_psi(flipped, std::arg(wb)) == doctest::Approx(psi_w).epsilon(1e-12));

    // integral of Psi over the circle vanishes: piecewise quadrature between
    // the singular phases, each piece handled by tanh-sinh
    for (int n : {4, 16}) {
        const PhaseVector pq = sample_phases(n, 1, SeedSpec{50, static_cast<uint64_t>(n)});
        PairedRoots pr = PairedRoots::from_phases(pq);
        std::vector<double> sing;
        for (const cplx& z : pr.base) {
            double a = std::arg(z);
            if (a < 0.0) a += kTwoPi;
            sing.push_back(std::fmod(a, kPi));
            sing.push_back(std::fmod(a, kPi) + kPi);
        }
        std::sort(sing.begin(), sing.end());
        sing.push_back(sing.front() + kTwoPi);
        double integral = 0.0;
        for (size_t i = 0; i + 1 < sing.size(); ++i)
            if (sing[i + 1] - sing[i] > 1e-13)
                integral += integrate_tanh_sinh([&](double x) { return balanced_psi(pr, x); },
                                                sing[i], sing[i + 1], 1e-10);
        CHECK(std::abs(integral) <= 1e-6);
    }
}

TEST_CASE("sign_flip_sample: antisymmetry, closed form, exhaustive mean and tail") {
    PairedRoots one;
    one.base = {cplx{1.0, 0.0}};
    const cplx w{std::cos(kPi / 6.0), std::sin(kPi / 6.0)};
    const int plus[] = {1};
    const SignFlipSample s1 = sign_flip_sample(one, w, plus);
    CHECK(s1.y == doctest::Approx(std::log(std::tan(kPi / 12.0))).epsilon(1e-12));
    CHECK(s1.y_poly == doctest::Approx(s1.y).epsilon(1e-9));

    const int n = 14;
    const PhaseVector pv = sample_phases(n, 1, SeedSpec{52, 0});
    PairedRoots pairs = PairedRoots::from_phases(pv);
    const cplx wb = find_balanced_point(pairs);

    std::vector<int> signs(n, 1);
    const SignFlipSample all_plus = sign_flip_sample(pairs, wb, signs);
    for (auto& v : signs) v = -1;
    const SignFlipSample all_minus = sign_flip_sample(pairs, wb, signs);
    CHECK(all_plus.y == doctest::Approx(-all_minus.y).epsilon(1e-12));
    CHECK(std::abs(all_plus.y - all_plus.y_poly) <= 1e-9);

    const double gamma = sign_gap_constant();
    const double eps = 0.5;
    const double thr = gamma * std::sqrt(kPi) * eps * std::sqrt(static_cast<double>(n)) / 2.0;
    double sum = 0.0;
    int tail = 0;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        for (int i = 0; i < n; ++i) signs[i] = (mask >> i) & 1 ? 1 : -1;
        const double y = sign_flip_sample(pairs, wb, signs).y;
        sum += y;
        if (std::abs(y) >= thr) ++tail;
    }
    CHECK(std::abs(sum / (1 << n)) <= 1e-9);
    CHECK(static_cast<double>(tail) / (1 << n) >= 1.0 - eps);
}

TEST_CASE("lo_exact: fixed values, domain errors, exhaustive equality") {
    CHECK(lo_exact(4, 0.5) == doctest::Approx(0.375));
    CHECK(lo_exact(5, 1.5) == doctest::Approx(0.625));
    CHECK(lo_exact(1, 0.5) == doctest::Approx(0.5));
    CHECK_THROWS_AS(lo_exact(1, 1.5), std::domain_error);
    CHECK_THROWS_AS(lo_exact(3, -1.0), std::domain_error);

    for (double delta : {0.5, 1.5, 2.5}) {
        const int s = static_cast<int>(std::floor(delta)) + 1;
        for (int n = s; n <= 16; ++n)
            CHECK(lo_exact_numerator(n, delta) == lo_exhaustive(n, delta));
    }
}

TEST_CASE("randpoly_experiment: constant, degenerate size, frequency floor") {
    CHECK(sign_gap_constant() == doctest::Approx(0.8814).epsilon(5e-5));
    CHECK(sign_gap_constant() == doctest::Approx(std::log(1.0 + std::sqrt(2.0))).epsilon(1e-14));

    const RandPolyResult tiny = randpoly_experiment(1, 0.5, 50, 71);
    CHECK(tiny.mean_two_log_max == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-6));
    CHECK(tiny.freq_gamma_sqrt_pi == 1.0);

    CHECK_THROWS_AS(randpoly_experiment(10, 1.5, 10, 1), std::invalid_argument);

    const RandPolyResult r = randpoly_experiment(100, 0.5, 300, 72);
    CHECK(r.freq_sqrt_gamma_pi >= 0.5);
    CHECK(r.threshold_gamma_sqrt_pi < r.threshold_sqrt_gamma_pi);
}
