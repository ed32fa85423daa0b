#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "vander/moments.hpp"

using namespace vander;

namespace {

// Bell numbers by the Bell-triangle recurrence
std::vector<uint64_t> bell_numbers(int rmax) {
    std::vector<uint64_t> out;
    std::vector<uint64_t> row{1};
    for (int r = 1; r <= rmax; ++r) {
        out.push_back(row.back());
        std::vector<uint64_t> next{row.back()};
        for (uint64_t v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return out; // out[r-1] = Bell(r)
}

uint64_t catalan(int n) {
    std::vector<uint64_t> c{1};
    for (int m = 1; m <= n; ++m) {
        uint64_t s = 0;
        for (int i = 0; i < m; ++i) s += c[i] * c[m - 1 - i];
        c.push_back(s);
    }
    return c[n];
}

SetPartition rotate_partition(const SetPartition& p, int shift) {
    std::vector<std::vector<int>> blocks;
    for (const auto& b : p.blocks) {
        std::vector<int> nb;
        for (int e : b) nb.push_back((e - 1 + shift) % p.r + 1);
        std::sort(nb.begin(), nb.end());
        blocks.push_back(std::move(nb));
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return SetPartition{p.r, std::move(blocks)};
}

} // namespace

TEST_CASE("enumerate_partitions: Bell counts, uniqueness, range errors") {
    const std::vector<uint64_t> bell = bell_numbers(8);
    CHECK(bell[0] == 1);
    CHECK(bell[2] == 5);
    CHECK(bell[3] == 15);
    for (int r = 1; r <= 8; ++r) {
        const auto parts = enumerate_partitions(r);
        CHECK(parts.size() == bell[r - 1]);
        for (size_t i = 0; i < parts.size(); ++i)
            for (size_t j = i + 1; j < parts.size(); ++j) CHECK(!(parts[i] == parts[j]));
    }
    CHECK_THROWS_AS(enumerate_partitions(0), std::out_of_range);
    CHECK_THROWS_AS(enumerate_partitions(9), std::out_of_range);
}

TEST_CASE("is_noncrossing: crossing witness, singletons, Catalan census") {
    CHECK(!is_noncrossing(four_cycle_partition()));
    CHECK(is_noncrossing(SetPartition{4, {{1}, {2}, {3}, {4}}}));
    for (int r = 1; r <= 8; ++r) {
        int nc = 0;
        for (const auto& p : enumerate_partitions(r))
            if (is_noncrossing(p)) ++nc;
        CHECK(static_cast<uint64_t>(nc) == catalan(r));
    }
}

TEST_CASE("count_solutions: four-cycle fixed values and closed forms") {
    const SetPartition& rho = four_cycle_partition();
    const SolutionCount pow2_small = count_solutions(rho, 4, ExponentSequence::pow2());
    CHECK(pow2_small.count == 28); // 2*16 - 4

    const SolutionCount lin100 = count_solutions(rho, 100, ExponentSequence::linear());
    CHECK(lin100.count == 666700);
    CHECK(lin100.normalized == doctest::Approx(0.6667).epsilon(1e-12));

    for (int n = 2; n <= 30; ++n) {
        CHECK(count_solutions_brute(rho, n, ExponentSequence::linear()).count ==
              four_cycle_count_linear(n));
        CHECK(count_solutions_brute(rho, n, ExponentSequence::pow2()).count ==
              four_cycle_count_pow2(n));
        CHECK(count_solutions_brute(rho, n, ExponentSequence::square()).count ==
              count_solutions(rho, n, ExponentSequence::square()).count);
    }
}

TEST_CASE("count_solutions: budget, cyclic relabeling invariance") {
    const auto parts8 = enumerate_partitions(8);
    CHECK_THROWS_AS(count_solutions_brute(parts8[3], 40, ExponentSequence::linear()), budget_error);

    for (const auto& p : enumerate_partitions(4)) {
        const uint64_t base = count_solutions_brute(p, 7, ExponentSequence::square()).count;
        for (int shift = 1; shift < 4; ++shift)
            CHECK(count_solutions_brute(rotate_partition(p, shift), 7, ExponentSequence::square())
                      .count == base);
    }
}

TEST_CASE("k_rho_estimate: crossing decay and the 2/3 limit") {
    const SetPartition& rho = four_cycle_partition();
    const std::vector<int> ns{10, 20, 40};
    const auto pow2_seq = k_rho_estimate(rho, ExponentSequence::pow2(), ns);
    for (size_t i = 0; i < ns.size(); ++i) {
        const double n = ns[i];
        CHECK(pow2_seq[i].normalized == doctest::Approx(2.0 / n - 1.0 / (n * n)).epsilon(1e-12));
        if (i) CHECK(pow2_seq[i].normalized < pow2_seq[i - 1].normalized);
    }
    const auto lin_seq = k_rho_estimate(rho, ExponentSequence::linear(), ns);
    for (size_t i = 0; i < ns.size(); ++i)
        CHECK(std::abs(lin_seq[i].normalized - 2.0 / 3.0) < 2.0 / ns[i]);
}

TEST_CASE("normalized counts: singleton partition exact, non-crossing toward 1") {
    const SetPartition singles{3, {{1}, {2}, {3}}};
    for (int n : {5, 9}) {
        const SolutionCount c = count_solutions(singles, n, ExponentSequence::square());
        CHECK(c.count == static_cast<uint64_t>(n));
        CHECK(c.normalized == 1.0);
    }
    for (const auto& p : enumerate_partitions(4)) {
        if (!is_noncrossing(p)) continue;
        double prev_gap = 2.0;
        for (int n : {10, 20, 40}) {
            const double v = count_solutions(p, n, ExponentSequence::linear()).normalized;
            CHECK(v <= 1.0 + 1e-12);
            const double gap = std::abs(1.0 - v);
            CHECK(gap <= prev_gap + 1e-12);
            prev_gap = gap;
        }
    }
}

TEST_CASE("asymptotic_moment: universal small moments and the Catalan fourth") {
    CHECK(asymptotic_moment(1, ExponentSequence::linear(), 11) == doctest::Approx(1.0));
    CHECK(asymptotic_moment(1, ExponentSequence::pow2(), 11) == doctest::Approx(1.0));
    CHECK(asymptotic_moment(3, ExponentSequence::square(), 30) == doctest::Approx(5.0).epsilon(0.04));
    CHECK(std::abs(asymptotic_moment(4, ExponentSequence::pow2(), 40) - 14.0) < 0.3);
}

TEST_CASE("empirical_moment: unit first moment and second-moment sanity") {
    const PhaseVector pv = sample_phases(24, 1, SeedSpec{210, 0});
    const ComplexMatrix v = build_generalized(pv, ExponentSequence::linear(), 24);
    CHECK(empirical_moment(v, 1) == doctest::Approx(1.0).epsilon(1e-12));

    double m2 = 0.0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        const PhaseVector pt = sample_phases(24, 1, SeedSpec{211, static_cast<uint64_t>(t)});
        m2 += empirical_moment(build_generalized(pt, ExponentSequence::linear(), 24), 2);
    }
    CHECK(m2 / trials == doctest::Approx(2.0 - 1.0 / 24.0).epsilon(0.05));
}

TEST_CASE("mp_density and mp_moment: fixed values and Catalan moments") {
    CHECK(mp_density(2.0) == doctest::Approx(1.0 / kTwoPi).epsilon(1e-14));
    CHECK(mp_density(-0.5) == 0.0);
    CHECK(mp_density(4.5) == 0.0);
    CHECK(std::abs(mp_moment(0) - 1.0) < 1e-8);
    CHECK(std::abs(mp_moment(4) - 14.0) < 1e-6);
    for (int r = 1; r <= 6; ++r)
        CHECK(mp_moment(r) == doctest::Approx(static_cast<double>(catalan(r))).epsilon(1e-7));
}

TEST_CASE("polytope_volume: slab value 2/3, degenerate whole cube, infeasible") {
    const VolumeEstimate v = polytope_volume(0.0, 1.0, 1000000, 99);
    CHECK(std::abs(v.volume - 2.0 / 3.0) <= 3.0 * v.std_error);
    CHECK(v.std_error < 0.001);

    CHECK(polytope_volume(-10.0, 10.0, 10000, 1).volume == 1.0);
    CHECK(polytope_volume(2.0, 10.0, 10000, 1).volume == 0.0);
}
