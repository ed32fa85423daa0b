#include <doctest.h>

#include <cmath>
#include <vector>

#include "vander/quadrature.hpp"
#include "vander/rng.hpp"
#include "vander/stats.hpp"

using namespace vander;

TEST_CASE("rng streams are reproducible and distinct across trials") {
    Rng a(trial_seed(7, "x", 0)), b(trial_seed(7, "x", 0)), c(trial_seed(7, "x", 1));
    bool same = true, differs = false;
    for (int i = 0; i < 64; ++i) {
        const uint64_t va = a.next_u64();
        same = same && (va == b.next_u64());
        differs = differs || (va != c.next_u64());
    }
    CHECK(same);
    CHECK(differs);
}

TEST_CASE("uniform moments and gaussian variance") {
    Rng rng(42);
    double s = 0.0, s2 = 0.0, g2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        s += u;
        s2 += u * u;
        const double g = rng.gaussian();
        g2 += g * g;
    }
    CHECK(std::abs(s / n - 0.5) < 4.0 / std::sqrt(12.0 * n));
    CHECK(std::abs(s2 / n - 1.0 / 3.0) < 0.005);
    CHECK(std::abs(g2 / n - 1.0) < 0.02);
}

TEST_CASE("quadrature: smooth and endpoint-singular integrands") {
    CHECK(std::abs(integrate_simpson([](double x) { return std::sin(x); }, 0.0, kPi) - 2.0) < 1e-10);
    // int_0^1 log(x)^2 dx = 2
    CHECK(std::abs(integrate_tanh_sinh([](double x) { return std::log(x) * std::log(x); }, 0.0, 1.0) -
                   2.0) < 1e-9);
    // int_0^1 x^{-1/2} dx = 2
    CHECK(std::abs(integrate_tanh_sinh([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0) - 2.0) <
          1e-9);
    // the zero-mean kernel over the circle (symmetric about pi)
    CHECK(std::abs(2.0 * integrate_tanh_sinh(
                             [](double x) { return log_two_minus_two_cos(x); }, 0.0, kPi)) < 1e-8);
}

TEST_CASE("stats: mean, stderr, histogram mass, KS") {
    std::vector<double> xs{1.0, 2.0, 3.0};
    CHECK(mean(xs) == doctest::Approx(2.0));
    CHECK(std_error(xs) == doctest::Approx(1.0 / std::sqrt(3.0)));

    Rng rng(5);
    std::vector<double> sample(4000);
    for (auto& x : sample) x = rng.uniform();
    const Histogram h = histogram_fixed(sample, 0.0, 1.0, 16);
    double total = h.below + h.above;
    for (double m : h.mass) total += m;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // KS of a sample against its own empirical CDF is 0
    std::vector<double> sorted = sample;
    std::sort(sorted.begin(), sorted.end());
    const double d_self = ks_statistic(sample, [&](double x) { return empirical_cdf(sorted, x); });
    CHECK(d_self == doctest::Approx(0.0).epsilon(1e-12));

    CHECK(kolmogorov_cdf(0.0) == 0.0);
    CHECK(kolmogorov_cdf(3.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(mean(std::vector<double>{}), std::domain_error);
}
