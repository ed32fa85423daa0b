#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "vander/ensemble.hpp"
#include "vander/quadrature.hpp"
#include "vander/rng.hpp"
#include "vander/spectral.hpp"

namespace vander {

/// Partition of {1,...,r} into disjoint nonempty blocks, blocks ordered by
/// least element, elements ascending within a block.
struct SetPartition {
    int r = 0;
    std::vector<std::vector<int>> blocks;

    int block_count() const { return static_cast<int>(blocks.size()); }

    /// block index (0-based) containing a 1-based element
    int block_of(int elem) const {
        for (int b = 0; b < block_count(); ++b)
            for (int e : blocks[b])
                if (e == elem) return b;
        throw std::out_of_range("SetPartition::block_of");
    }

    bool operator==(const SetPartition& o) const { return r == o.r && blocks == o.blocks; }
};

/// All Bell(r) partitions via restricted growth strings.
inline std::vector<SetPartition> enumerate_partitions(int r) {
    if (r < 1 || r > 8) throw std::out_of_range("enumerate_partitions: 1 <= r <= 8");
    std::vector<SetPartition> out;
    std::vector<int> code(r, 0);
    while (true) {
        SetPartition p;
        p.r = r;
        const int nb = *std::max_element(code.begin(), code.end()) + 1;
        p.blocks.assign(nb, {});
        for (int i = 0; i < r; ++i) p.blocks[code[i]].push_back(i + 1);
        out.push_back(std::move(p));

        // next restricted growth string: code[i] <= 1 + max(code[0..i-1])
        int i = r - 1;
        for (; i > 0; --i) {
            int max_prefix = 0;
            for (int j = 0; j < i; ++j) max_prefix = std::max(max_prefix, code[j]);
            if (code[i] <= max_prefix) break;
        }
        if (i == 0) return out;
        ++code[i];
        std::fill(code.begin() + i + 1, code.end(), 0);
    }
}

/// Crossing test: a < b < c < d with {a,c} in one block and {b,d} in another.
inline bool is_noncrossing(const SetPartition& p) {
    std::vector<int> owner(p.r + 1, -1);
    for (int b = 0; b < p.block_count(); ++b)
        for (int e : p.blocks[b]) owner[e] = b;
    for (int a = 1; a <= p.r; ++a)
        for (int b = a + 1; b <= p.r; ++b)
            for (int c = b + 1; c <= p.r; ++c)
                for (int d = c + 1; d <= p.r; ++d)
                    if (owner[a] == owner[c] && owner[b] == owner[d] && owner[a] != owner[b])
                        return false;
    return true;
}

inline const SetPartition& four_cycle_partition() {
    static const SetPartition p{4, {{1, 3}, {2, 4}}};
    return p;
}

struct SolutionCount {
    SetPartition partition;
    int N = 0;
    std::string sequence;
    uint64_t count = 0;
    double normalized = 0.0; // count / N^{r+1-|rho|}
};

namespace detail {

inline double normalize_count(uint64_t count, int r, int blocks, int N) {
    double denom = 1.0;
    for (int i = 0; i < r + 1 - blocks; ++i) denom *= N;
    return static_cast<double>(count) / denom;
}

/// Exhaustive enumeration of S_{rho,N} with per-block pruning. Position m
/// contributes +k_{p_m} to the balance of its own block and -k_{p_m} to the
/// block of position m-1 (cyclically); a block's balance is checked as soon
/// as the last position touching it has been assigned. The final position is
/// never looped: its value is forced by the two blocks it closes and resolved
/// by binary search, so the enumeration is over N^{r-1} prefixes.
inline uint64_t count_brute(const SetPartition& rho, int N, const ExponentSequence& k) {
    const int r = rho.r;
    if (r == 1) return static_cast<uint64_t>(N); // the single equation k_p = k_p
    std::vector<int64_t> kv(N);
    for (int p = 1; p <= N; ++p) kv[p - 1] = static_cast<int64_t>(k.value(p));
    const __int128 balance_cap = kv.back();

    std::vector<int> plus_block(r), minus_block(r); // 0-based position -> block
    for (int m = 1; m <= r; ++m) {
        plus_block[m - 1] = rho.block_of(m);
        minus_block[m - 1] = rho.block_of(m == 1 ? r : m - 1);
    }
    // last position (0-based) that touches each block
    std::vector<int> last_touch(rho.block_count(), 0);
    for (int m = 0; m < r; ++m) {
        last_touch[plus_block[m]] = std::max(last_touch[plus_block[m]], m);
        last_touch[minus_block[m]] = std::max(last_touch[minus_block[m]], m);
    }
    std::vector<std::vector<int>> completed(r);
    for (int b = 0; b < rho.block_count(); ++b) completed[last_touch[b]].push_back(b);

    const int pb = plus_block[r - 1], mb = minus_block[r - 1];
    // balances can reach r * k_max, past the int64 range for k_p = 2^p
    std::vector<__int128> balance(rho.block_count(), 0);
    std::vector<int> choice(r - 1, 0);
    uint64_t count = 0;
    int m = 0;
    while (m >= 0) {
        if (m == r - 1) {
            // close out the last position against the blocks it completes
            if (pb == mb) {
                if (balance[pb] == 0) count += N;
            } else {
                const __int128 kreq = -balance[pb];
                if (balance[mb] == kreq && kreq >= 0 && kreq <= balance_cap &&
                    std::binary_search(kv.begin(), kv.end(), static_cast<int64_t>(kreq)))
                    ++count;
            }
            --m;
            const int64_t kv_old = kv[choice[m]];
            balance[plus_block[m]] -= kv_old;
            balance[minus_block[m]] += kv_old;
            ++choice[m];
            continue;
        }
        if (choice[m] == N) {
            choice[m] = 0;
            --m;
            if (m >= 0) {
                const int64_t kv_old = kv[choice[m]];
                balance[plus_block[m]] -= kv_old;
                balance[minus_block[m]] += kv_old;
                ++choice[m];
            }
            continue;
        }
        const int64_t kval = kv[choice[m]];
        balance[plus_block[m]] += kval;
        balance[minus_block[m]] -= kval;
        bool ok = true;
        for (int b : completed[m])
            if (balance[b] != 0) {
                ok = false;
                break;
            }
        if (!ok) {
            balance[plus_block[m]] -= kval;
            balance[minus_block[m]] += kval;
            ++choice[m];
            continue;
        }
        ++m;
    }
    return count;
}

/// Meet-in-the-middle count for the 4-cycle partition: sum_s r(s)^2 with
/// r(s) = #{(a,c) : k_a + k_c = s}.
inline uint64_t count_four_cycle_mim(int N, const ExponentSequence& k) {
    std::vector<uint64_t> kv(N);
    for (int p = 1; p <= N; ++p) kv[p - 1] = k.value(p);
    std::vector<uint64_t> sums;
    sums.reserve(static_cast<size_t>(N) * N);
    for (int a = 0; a < N; ++a)
        for (int c = 0; c < N; ++c) sums.push_back(kv[a] + kv[c]);
    std::sort(sums.begin(), sums.end());
    uint64_t total = 0;
    for (size_t i = 0; i < sums.size();) {
        size_t j = i;
        while (j < sums.size() && sums[j] == sums[i]) ++j;
        const uint64_t run = j - i;
        total += run * run;
        i = j;
    }
    return total;
}

} // namespace detail

/// Closed form for the 4-cycle under k_p = p-1: sum_s r(s)^2 telescopes to
/// N(N+1)(2N+1)/6 + (N-1)N(2N-1)/6.
inline uint64_t four_cycle_count_linear(uint64_t n) {
    return n * (n + 1) * (2 * n + 1) / 6 + (n - 1) * n * (2 * n - 1) / 6;
}

/// Closed form for the 4-cycle under k_p = 2^p: 2^a + 2^c = 2^b + 2^d forces
/// {a,c} = {b,d}, giving 2N^2 - N ordered solutions.
inline uint64_t four_cycle_count_pow2(uint64_t n) { return 2 * n * n - n; }

/// Always-exhaustive count, subject to the r log2(N) <= 40 budget.
inline SolutionCount count_solutions_brute(const SetPartition& rho, int N, const ExponentSequence& k) {
    if (rho.r * std::log2(static_cast<double>(N)) > 40.0)
        throw budget_error("count_solutions_brute: r log2 N exceeds 40");
    SolutionCount out{rho, N, k.name(), detail::count_brute(rho, N, k), 0.0};
    out.normalized = detail::normalize_count(out.count, rho.r, rho.block_count(), N);
    return out;
}

/// Exact |S_{rho,N}|. Dispatches to the closed forms for the 4-cycle crossing
/// partition under the linear and power-of-two sequences, to meet-in-the-middle
/// for the 4-cycle under any other sequence, and to pruned brute force
/// elsewhere (budget r log2 N <= 40).
inline SolutionCount count_solutions(const SetPartition& rho, int N, const ExponentSequence& k) {
    SolutionCount out{rho, N, k.name(), 0, 0.0};
    if (rho == four_cycle_partition()) {
        if (k.kind == ExponentSequence::Kind::linear)
            out.count = four_cycle_count_linear(static_cast<uint64_t>(N));
        else if (k.kind == ExponentSequence::Kind::pow2)
            out.count = four_cycle_count_pow2(static_cast<uint64_t>(N));
        else
            out.count = detail::count_four_cycle_mim(N, k);
        out.normalized = detail::normalize_count(out.count, rho.r, rho.block_count(), N);
        return out;
    }
    return count_solutions_brute(rho, N, k);
}

/// Normalized counts |S_{rho,N}| / N^{r+1-|rho|} along an N-list; the finite-N
/// trace toward K_rho. No extrapolated limit is produced.
inline std::vector<SolutionCount> k_rho_estimate(const SetPartition& rho, const ExponentSequence& k,
                                                 std::span<const int> n_list) {
    std::vector<SolutionCount> out;
    out.reserve(n_list.size());
    for (int n : n_list) out.push_back(count_solutions(rho, n, k));
    return out;
}

/// Finite-N proxy for the asymptotic moment m_r = sum_rho K_rho: the sum over
/// all partitions of the normalized counts at this N.
inline double asymptotic_moment(int r, const ExponentSequence& k, int N) {
    if (r < 1 || r > 5) throw std::out_of_range("asymptotic_moment: 1 <= r <= 5");
    double sum = 0.0;
    for (const SetPartition& rho : enumerate_partitions(r)) sum += count_solutions(rho, N, k).normalized;
    return sum;
}

/// tr_N((V V^*)^r) by repeated Hermitian multiplication.
inline double empirical_moment(const ComplexMatrix& v, int r) {
    if (v.rows != v.cols) throw std::invalid_argument("empirical_moment: square matrix required");
    if (r < 1) throw std::invalid_argument("empirical_moment: r >= 1");
    const HermitianMatrix x = gram_right(v);
    ComplexMatrix xm(x.n, x.n);
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.n; ++j) xm.at(i, j) = x.at(i, j);
    ComplexMatrix pow = xm;
    for (int i = 1; i < r; ++i) pow = matmul(pow, xm);
    return trace(pow).real() / x.n;
}

/// Marchenko-Pastur density (square case): (1/2pi) sqrt((4-x)/x) on [0,4].
inline double mp_density(double x) {
    if (x <= 0.0 || x >= 4.0) return 0.0;
    return std::sqrt((4.0 - x) / x) / kTwoPi;
}

/// r-th MP moment by quadrature; equals the r-th Catalan number.
inline double mp_moment(int r, double tol = 1e-11) {
    if (r < 0 || r > 10) throw std::out_of_range("mp_moment: 0 <= r <= 10");
    return integrate_tanh_sinh([r](double x) { return std::pow(x, r) * mp_density(x); }, 0.0, 4.0, tol);
}

struct VolumeEstimate {
    double volume = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo volume of {(x,y,z) in [0,1]^3 : lo <= x + y - z <= hi}; the
/// 4-cycle K_rho under k_p = p-1 is the (0,1) slab with volume 2/3.
inline VolumeEstimate polytope_volume(double lo, double hi, int64_t samples, uint64_t seed) {
    Rng rng(trial_seed(seed, "polytope", 0));
    int64_t hits = 0;
    for (int64_t i = 0; i < samples; ++i) {
        const double s = rng.uniform() + rng.uniform() - rng.uniform();
        if (s >= lo && s <= hi) ++hits;
    }
    const double p = static_cast<double>(hits) / samples;
    return {p, std::sqrt(p * (1.0 - p) / samples)};
}

} // namespace vander
