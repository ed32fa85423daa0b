#pragma once

#include <limits>
#include <vector>

#include "vander/spectral.hpp"

namespace vander {

inline std::vector<cplx> nodes_from_phases(const PhaseVector& phases) {
    std::vector<cplx> z(phases.count());
    for (int q = 0; q < phases.count(); ++q) {
        const double a = kTwoPi * phases.value(q);
        z[q] = cplx{std::cos(a), std::sin(a)};
    }
    return z;
}

/// sigma^m_r: elementary symmetric functions of the nodes excluding x_m
/// (m is 1-based). Computed by direct product expansion over the N-1 nodes:
/// e_r <- e_r + x_j e_{r-1}. Returns sigma_0..sigma_{N-1}; sigma_0 = 1 and
/// sigma_{N-1} = 0 by convention (only N-1 nodes enter).
inline std::vector<cplx> elem_sym_excluding(std::span<const cplx> x, int m) {
    const int n = static_cast<int>(x.size());
    if (m < 1 || m > n) throw std::out_of_range("elem_sym_excluding: index out of range");
    std::vector<cplx> sigma(n, 0.0);
    sigma[0] = 1.0;
    int used = 0;
    for (int j = 0; j < n; ++j) {
        if (j == m - 1) continue;
        ++used;
        for (int r = used; r >= 1; --r) sigma[r] += x[j] * sigma[r - 1];
    }
    return sigma;
}

/// Inverse of the unnormalized square Vandermonde matrix with columns
/// (1, x_q, ..., x_q^{N-1})^T:
///   M(m,n) = (-1)^{N-n} sigma^m_{N-n} / prod_{j != m} (x_m - x_j).
/// Each denominator is carried as a (log-magnitude, phase) pair so clustered
/// nodes do not underflow; entries are materialized in linear scale.
/// `beta` holds the row absolute sums of the NORMALIZED inverse sqrt(N) * M,
/// i.e. the row sums for the ensemble matrix with the 1/sqrt(N) factor.
struct InverseMatrix {
    int n = 0;
    ComplexMatrix m;          // inverse of the unnormalized matrix
    std::vector<double> beta; // row abs-sums of sqrt(N) * m
};

inline InverseMatrix vandermonde_inverse(std::span<const cplx> x) {
    const int n = static_cast<int>(x.size());
    InverseMatrix out;
    out.n = n;
    out.m = ComplexMatrix(n, n);
    out.beta.assign(n, 0.0);
    const double half_log_n = 0.5 * std::log(static_cast<double>(n));
    for (int m = 1; m <= n; ++m) {
        double log_den = 0.0, arg_den = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == m - 1) continue;
            const cplx d = x[m - 1] - x[j];
            const double ad = std::abs(d);
            if (ad == 0.0) throw singular_matrix("vandermonde_inverse: duplicate nodes");
            log_den += std::log(ad);
            arg_den += std::arg(d);
        }
        double abs_row = 0.0;
        const std::vector<cplx> sigma = elem_sym_excluding(x, m);
        for (int col = 1; col <= n; ++col) {
            const cplx s = sigma[n - col];
            if (s == cplx{}) continue;
            const double mag = std::exp(std::log(std::abs(s)) - log_den);
            double ang = std::arg(s) - arg_den;
            if ((n - col) % 2 != 0) ang += kPi; // the (-1)^{N-n} sign
            out.m.at(m - 1, col - 1) = cplx{mag * std::cos(ang), mag * std::sin(ang)};
            abs_row += mag;
        }
        out.beta[m - 1] = std::exp(half_log_n + std::log(abs_row));
    }
    return out;
}

/// Inverse of the normalized ensemble matrix V = V_unnorm / sqrt(N).
inline ComplexMatrix normalized_inverse(const InverseMatrix& inv) {
    ComplexMatrix m = inv.m;
    const double s = std::sqrt(static_cast<double>(inv.n));
    for (auto& v : m.a) v *= s;
    return m;
}

inline std::vector<double> row_abs_sums(const ComplexMatrix& m) {
    std::vector<double> sums(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) sums[i] += std::abs(m.at(i, j));
    return sums;
}

/// beta_p from the closed form sqrt(N)/prod_{q != p}|z_p - z_q| * sum_r |sigma^p_r|,
/// an independent route from summing inverse entries.
inline std::vector<double> beta_closed_form(std::span<const cplx> x) {
    const int n = static_cast<int>(x.size());
    std::vector<double> beta(n, 0.0);
    for (int p = 1; p <= n; ++p) {
        double log_den = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == p - 1) continue;
            const double ad = std::abs(x[p - 1] - x[j]);
            if (ad == 0.0) throw singular_matrix("beta_closed_form: duplicate nodes");
            log_den += std::log(ad);
        }
        double sum_abs = 0.0;
        for (const cplx& s : elem_sym_excluding(x, p)) sum_abs += std::abs(s);
        beta[p - 1] = std::exp(0.5 * std::log(static_cast<double>(n)) - log_den + std::log(sum_abs));
    }
    return beta;
}

struct DistanceIdentity {
    double lhs = 0.0; // sum of squared inverse entries = Tr((V^{-1})^* V^{-1})
    double rhs = 0.0; // sum over columns of dist(X_i, span of the others)^{-2}
};

/// Tr((V^{-1})^* V^{-1}) = sum_i dist(X_i, V_i)^{-2} where X_i are the columns
/// of V and V_i the span of the remaining columns. The left side comes from the
/// explicit inverse; the right side projects X_i onto the complement through
/// the normal equations solved by the Hermitian eigensolver.
inline DistanceIdentity distance_identity_check(const ComplexMatrix& v) {
    if (v.rows != v.cols) throw std::invalid_argument("distance_identity_check: square matrix");
    const int n = v.rows;
    DistanceIdentity out;

    const ComplexMatrix inv = lu_inverse(v);
    for (const auto& e : inv.a) out.lhs += std::norm(e);

    for (int i = 0; i < n; ++i) {
        ComplexMatrix b(n, n - 1);
        for (int j = 0, c = 0; j < n; ++j) {
            if (j == i) continue;
            for (int k = 0; k < n; ++k) b.at(k, c) = v.at(k, j);
            ++c;
        }
        // normal equations: (B^* B) coeffs = B^* x
        const EigResult eig = eig_hermitian(gram(b), 1e-13, true);
        std::vector<cplx> rhs_vec(n - 1, 0.0);
        for (int c = 0; c < n - 1; ++c)
            for (int k = 0; k < n; ++k) rhs_vec[c] += std::conj(b.at(k, c)) * v.at(k, i);
        std::vector<cplx> coeffs(n - 1, 0.0);
        for (int e = 0; e < n - 1; ++e) {
            cplx proj = 0.0;
            for (int c = 0; c < n - 1; ++c) proj += std::conj(eig.vectors.at(c, e)) * rhs_vec[c];
            proj /= eig.spectrum.values[e];
            for (int c = 0; c < n - 1; ++c) coeffs[c] += proj * eig.vectors.at(c, e);
        }
        double dist2 = 0.0;
        for (int k = 0; k < n; ++k) {
            cplx r = v.at(k, i);
            for (int c = 0; c < n - 1; ++c) r -= b.at(k, c) * coeffs[c];
            dist2 += std::norm(r);
        }
        out.rhs += 1.0 / dist2;
    }
    return out;
}

struct InverseMomentProbe {
    std::vector<double> value;        // tr_N((V^* V)^{-1}) per trial
    std::vector<double> running_mean; // cumulative means in trial order
};

/// Seeded trials of tr_N((V^* V)^{-1}) = ||V_unnorm^{-1}||_F^2 (no eigensolve
/// needed). The expectation diverges; the running means are reported for
/// heavy-tail inspection, never asserted to settle.
inline InverseMomentProbe inverse_moment_probe(int N, int trials, uint64_t seed) {
    if (N < 2) throw std::invalid_argument("inverse_moment_probe: N >= 2");
    InverseMomentProbe out;
    out.value.resize(trials);
    out.running_mean.resize(trials);
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        const PhaseVector pv = sample_phases(N, 1, SeedSpec{seed, static_cast<uint64_t>(t)});
        const InverseMatrix inv = vandermonde_inverse(nodes_from_phases(pv));
        double tr = 0.0;
        for (const auto& e : inv.m.a) tr += std::norm(e);
        out.value[t] = tr;
        sum += tr;
        out.running_mean[t] = sum / (t + 1);
    }
    return out;
}

} // namespace vander
