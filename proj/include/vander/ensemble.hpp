#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vander/matrix.hpp"
#include "vander/phase.hpp"

namespace vander {

/// Strictly increasing integer exponent sequence k_p, p = 1..N.
/// Built-in kinds: linear k_p = p-1, power-of-two k_p = 2^p, square k_p = p^2,
/// or an explicit list. Power-of-two values above 2^62 cannot be materialized
/// as integers; matrix builders route them through bit shifts on the phase
/// fraction instead (see build_generalized).
struct ExponentSequence {
    enum class Kind { linear, pow2, square, explicit_list };
    Kind kind = Kind::linear;
    std::vector<uint64_t> list;

    static ExponentSequence linear() { return {Kind::linear, {}}; }
    static ExponentSequence pow2() { return {Kind::pow2, {}}; }
    static ExponentSequence square() { return {Kind::square, {}}; }
    static ExponentSequence explicit_list(std::vector<uint64_t> v) {
        for (size_t i = 1; i < v.size(); ++i)
            if (v[i] <= v[i - 1]) throw std::invalid_argument("exponent sequence must be strictly increasing");
        return {Kind::explicit_list, std::move(v)};
    }
    static ExponentSequence from_name(const std::string& name) {
        if (name == "linear") return linear();
        if (name == "pow2") return pow2();
        if (name == "square") return square();
        throw std::invalid_argument("unknown exponent sequence: " + name);
    }

    const char* name() const {
        switch (kind) {
            case Kind::linear: return "linear";
            case Kind::pow2: return "pow2";
            case Kind::square: return "square";
            default: return "explicit";
        }
    }

    /// k_p for 1-based p. Throws length_error once the sequence is exhausted
    /// (explicit list shorter than p, or 2^p beyond 64-bit range).
    uint64_t value(int p) const {
        if (p < 1) throw std::length_error("exponent index must be >= 1");
        switch (kind) {
            case Kind::linear: return static_cast<uint64_t>(p) - 1;
            case Kind::pow2:
                if (p > 62) throw std::length_error("2^p exceeds exact integer range for p > 62");
                return 1ull << p;
            case Kind::square: return static_cast<uint64_t>(p) * static_cast<uint64_t>(p);
            default:
                if (static_cast<size_t>(p) > list.size())
                    throw std::length_error("explicit exponent sequence exhausted");
                return list[p - 1];
        }
    }
};

/// gamma(ell) = sum_j N^{j-1} ell_j, the bijection {0..N-1}^d -> {0..N^d-1}
/// that fixes the row order of the d-fold matrix.
inline int64_t gamma_index(std::span<const int> ell, int N, int d) {
    if (static_cast<int>(ell.size()) != d) throw std::out_of_range("gamma_index: index size != d");
    int64_t idx = 0, scale = 1;
    for (int j = 0; j < d; ++j) {
        if (ell[j] < 0 || ell[j] >= N) throw std::out_of_range("gamma_index: component out of range");
        idx += scale * ell[j];
        scale *= N;
    }
    return idx;
}

/// N^d x L d-fold Vandermonde matrix: row gamma(ell), column q holds
/// N^{-d/2} exp(2*pi*i <ell, x_q>). d = 1 is the classical matrix with rows
/// 1, z_q, ..., z_q^{N-1} over sqrt(N).
inline ComplexMatrix build_vandermonde(const PhaseVector& phases, int N) {
    const int d = phases.dim(), L = phases.count();
    if (N < 1) throw std::invalid_argument("build_vandermonde: N >= 1 required");
    double rows_d = 1.0;
    for (int j = 0; j < d; ++j) rows_d *= N;
    if (rows_d > 1.0e8) throw budget_error("build_vandermonde: N^d too large to materialize");
    const int64_t rows = static_cast<int64_t>(rows_d + 0.5);

    const double norm = 1.0 / std::sqrt(rows_d);
    ComplexMatrix V(static_cast<int>(rows), L, norm);
    std::vector<int> ell(d, 0);
    for (int64_t r = 0; r < rows; ++r) {
        // r == gamma_index(ell); ell advances in mixed radix N with digit 0 fastest
        for (int q = 0; q < L; ++q) {
            const double ph = kTwoPi * phases.frac_dot(q, ell);
            V.at(static_cast<int>(r), q) = cplx{norm * std::cos(ph), norm * std::sin(ph)};
        }
        for (int j = 0; j < d; ++j) {
            if (++ell[j] < N) break;
            ell[j] = 0;
        }
    }
    return V;
}

/// N x N generalized matrix V(p,q) = z_q^{k_p} / sqrt(N) for 1-based row p.
/// For k_p = 2^p the row phase frac(2^p theta) is taken from the stored phase
/// bits directly, so exponents beyond 2^62 need no integer representation
/// (the phase vector must carry at least N + 106 fractional bits).
inline ComplexMatrix build_generalized(const PhaseVector& phases, const ExponentSequence& k, int N) {
    if (phases.dim() != 1) throw std::invalid_argument("build_generalized: d = 1 phases required");
    if (phases.count() != N) throw std::invalid_argument("build_generalized: L = N required");
    const double norm = 1.0 / std::sqrt(static_cast<double>(N));
    ComplexMatrix V(N, N, norm);
    const bool shift_path = (k.kind == ExponentSequence::Kind::pow2);
    for (int p = 1; p <= N; ++p) {
        const uint64_t kp = shift_path ? 0 : k.value(p);
        for (int q = 0; q < N; ++q) {
            const double f = shift_path ? phases.frac_shift(q, 0, p) : phases.frac_mul(q, 0, kp);
            const double ph = kTwoPi * f;
            V.at(p - 1, q) = cplx{norm * std::cos(ph), norm * std::sin(ph)};
        }
    }
    return V;
}

/// Dirichlet kernel D_N(x) = sin(Nx/2) / (N sin(x/2)), extended continuously
/// across the removable singularities at x = 2*pi*k where it equals
/// cos(N*pi*k)/cos(pi*k) = (-1)^{k(N-1)}.
inline double dirichlet_kernel(double x, int N) {
    const double s = std::sin(0.5 * x);
    if (std::abs(s) < 1e-12) {
        const long long k = std::llround(x / kTwoPi);
        return ((k % 2 != 0) && (N % 2 == 0)) ? -1.0 : 1.0;
    }
    const double v = std::sin(0.5 * N * x) / (N * s);
    return std::clamp(v, -1.0, 1.0);
}

/// L x L real symmetric Gram matrix A(k,m) = prod_j D_N(2*pi*(x_{k,j}-x_{m,j})).
/// Shares its spectrum with V^* V for the d-fold matrix on the same phases.
inline RealMatrix build_dirichlet_gram(const PhaseVector& phases, int N) {
    const int L = phases.count(), d = phases.dim();
    RealMatrix A(L, L);
    for (int k = 0; k < L; ++k) {
        A.at(k, k) = 1.0;
        for (int m = k + 1; m < L; ++m) {
            double v = 1.0;
            for (int j = 0; j < d; ++j)
                v *= dirichlet_kernel(kTwoPi * (phases.value(k, j) - phases.value(m, j)), N);
            A.at(k, m) = v;
            A.at(m, k) = v;
        }
    }
    return A;
}

} // namespace vander
