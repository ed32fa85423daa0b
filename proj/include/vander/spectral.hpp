#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "vander/ensemble.hpp"
#include "vander/matrix.hpp"

namespace vander {

/// Eigenvalues in ascending order.
struct Spectrum {
    std::vector<double> values;

    int size() const { return static_cast<int>(values.size()); }
    double min() const { return values.front(); }
    double max() const { return values.back(); }
    double sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }
};

struct EigResult {
    Spectrum spectrum;
    ComplexMatrix vectors; // columns are eigenvectors when requested
    bool has_vectors = false;
};

struct EigResultReal {
    Spectrum spectrum;
    RealMatrix vectors;
    bool has_vectors = false;
};

namespace detail {

inline double offdiag_norm(const HermitianMatrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.n; ++i)
        for (int j = i + 1; j < m.n; ++j) s += std::norm(m.at(i, j));
    return std::sqrt(2.0 * s);
}

inline double offdiag_norm(const RealMatrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.rows; ++i)
        for (int j = i + 1; j < m.cols; ++j) s += m.at(i, j) * m.at(i, j);
    return std::sqrt(2.0 * s);
}

inline double frobenius(const HermitianMatrix& m) {
    double s = 0.0;
    for (const auto& v : m.a) s += std::norm(v);
    return std::sqrt(s);
}

inline double frobenius_sym(const RealMatrix& m) {
    double s = 0.0;
    for (const auto& v : m.a) s += v * v;
    return std::sqrt(s);
}

// tan of the annihilating angle from cot(2theta) = tau, smaller root
inline double jacobi_tan(double tau) {
    const double r = std::abs(tau) + std::sqrt(1.0 + tau * tau);
    return tau >= 0.0 ? 1.0 / r : -1.0 / r;
}

template <class Vals, class Vecs>
void sort_ascending(Vals& vals, Vecs* vecs, int n) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return vals[i] < vals[j]; });
    Vals sorted(n);
    for (int i = 0; i < n; ++i) sorted[i] = vals[order[i]];
    vals = std::move(sorted);
    if (vecs) {
        auto permuted = *vecs;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) permuted.at(i, j) = vecs->at(i, order[j]);
        *vecs = std::move(permuted);
    }
}

} // namespace detail

/// Cyclic-by-row Jacobi for a complex Hermitian matrix. Stops once the
/// off-diagonal Frobenius norm falls below tol * ||H||_F; throws
/// convergence_error (with the residual) after max_sweeps full sweeps.
inline EigResult eig_hermitian(HermitianMatrix h, double tol = 1e-12, bool want_vectors = false,
                               int max_sweeps = 30) {
    const int n = h.n;
    if (tol <= 0.0) throw std::invalid_argument("eig_hermitian: tol must be positive");
    EigResult out;
    if (want_vectors) out.vectors = ComplexMatrix::identity(n);
    out.has_vectors = want_vectors;
    if (n == 0) return out;

    const double norm_f = detail::frobenius(h);
    const double target = tol * norm_f;
    if (n == 1 || norm_f == 0.0 || detail::offdiag_norm(h) <= target) {
        std::vector<double> vals(n);
        for (int i = 0; i < n; ++i) vals[i] = h.at(i, i).real();
        detail::sort_ascending(vals, want_vectors ? &out.vectors : nullptr, n);
        out.spectrum.values = std::move(vals);
        return out;
    }

    const double skip = target / (2.0 * n);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx b = h.at(p, q);
                const double ab = std::abs(b);
                if (ab <= skip) continue;
                const double app = h.at(p, p).real();
                const double aqq = h.at(q, q).real();
                const double t = detail::jacobi_tan((aqq - app) / (2.0 * ab));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const cplx sigma = (t * c / ab) * b; // s * e^{i arg b}

                // columns: A <- A G with G = [[c, sigma], [-conj(sigma), c]] in the (p,q) plane
                for (int k = 0; k < n; ++k) {
                    const cplx kp = h.at(k, p), kq = h.at(k, q);
                    h.at(k, p) = c * kp - std::conj(sigma) * kq;
                    h.at(k, q) = sigma * kp + c * kq;
                }
                // rows: A <- G^* A
                for (int k = 0; k < n; ++k) {
                    const cplx pk = h.at(p, k), qk = h.at(q, k);
                    h.at(p, k) = c * pk - sigma * qk;
                    h.at(q, k) = std::conj(sigma) * pk + c * qk;
                }
                h.at(p, q) = 0.0;
                h.at(q, p) = 0.0;
                h.at(p, p) = h.at(p, p).real();
                h.at(q, q) = h.at(q, q).real();

                if (want_vectors) {
                    for (int k = 0; k < n; ++k) {
                        const cplx kp = out.vectors.at(k, p), kq = out.vectors.at(k, q);
                        out.vectors.at(k, p) = c * kp - std::conj(sigma) * kq;
                        out.vectors.at(k, q) = sigma * kp + c * kq;
                    }
                }
            }
        }
        if (detail::offdiag_norm(h) <= target) {
            std::vector<double> vals(n);
            for (int i = 0; i < n; ++i) vals[i] = h.at(i, i).real();
            detail::sort_ascending(vals, want_vectors ? &out.vectors : nullptr, n);
            out.spectrum.values = std::move(vals);
            return out;
        }
    }
    throw convergence_error(detail::offdiag_norm(h) / norm_f);
}

/// Real symmetric specialization (the Dirichlet Gram path); identical contract.
inline EigResultReal eig_symmetric(RealMatrix h, double tol = 1e-12, bool want_vectors = false,
                                   int max_sweeps = 30) {
    if (h.rows != h.cols) throw std::invalid_argument("eig_symmetric: square matrix required");
    if (tol <= 0.0) throw std::invalid_argument("eig_symmetric: tol must be positive");
    const int n = h.rows;
    EigResultReal out;
    out.has_vectors = want_vectors;
    if (want_vectors) {
        out.vectors = RealMatrix(n, n);
        for (int i = 0; i < n; ++i) out.vectors.at(i, i) = 1.0;
    }
    if (n == 0) return out;

    const double norm_f = detail::frobenius_sym(h);
    const double target = tol * norm_f;
    const double skip = (n > 1) ? target / (2.0 * n) : 0.0;
    int sweep = 0;
    while (detail::offdiag_norm(h) > target) {
        if (sweep++ >= max_sweeps) throw convergence_error(detail::offdiag_norm(h) / norm_f);
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double b = h.at(p, q);
                if (std::abs(b) <= skip) continue;
                const double t = detail::jacobi_tan((h.at(q, q) - h.at(p, p)) / (2.0 * std::abs(b)));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = (b >= 0.0 ? t : -t) * c;
                for (int k = 0; k < n; ++k) {
                    const double kp = h.at(k, p), kq = h.at(k, q);
                    h.at(k, p) = c * kp - s * kq;
                    h.at(k, q) = s * kp + c * kq;
                }
                for (int k = 0; k < n; ++k) {
                    const double pk = h.at(p, k), qk = h.at(q, k);
                    h.at(p, k) = c * pk - s * qk;
                    h.at(q, k) = s * pk + c * qk;
                }
                h.at(p, q) = 0.0;
                h.at(q, p) = 0.0;
                if (want_vectors) {
                    for (int k = 0; k < n; ++k) {
                        const double kp = out.vectors.at(k, p), kq = out.vectors.at(k, q);
                        out.vectors.at(k, p) = c * kp - s * kq;
                        out.vectors.at(k, q) = s * kp + c * kq;
                    }
                }
            }
        }
    }
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) vals[i] = h.at(i, i);
    detail::sort_ascending(vals, want_vectors ? &out.vectors : nullptr, n);
    out.spectrum.values = std::move(vals);
    return out;
}

/// V^* V, stored exactly Hermitian (upper triangle computed, mirrored by conjugation).
inline HermitianMatrix gram(const ComplexMatrix& v) {
    HermitianMatrix h(v.cols);
    for (int i = 0; i < v.cols; ++i)
        for (int j = i; j < v.cols; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < v.rows; ++k) s += std::conj(v.at(k, i)) * v.at(k, j);
            if (i == j) s = s.real();
            h.at(i, j) = s;
            h.at(j, i) = std::conj(s);
        }
    return h;
}

/// V V^*, the right Gram matrix (used for the generalized square ensembles).
inline HermitianMatrix gram_right(const ComplexMatrix& v) {
    HermitianMatrix h(v.rows);
    for (int i = 0; i < v.rows; ++i)
        for (int j = i; j < v.rows; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < v.cols; ++k) s += v.at(i, k) * std::conj(v.at(j, k));
            if (i == j) s = s.real();
            h.at(i, j) = s;
            h.at(j, i) = std::conj(s);
        }
    return h;
}

/// Singular values s_i = sqrt(lambda_i(V^* V)), ascending. Tiny negative
/// eigenvalues from roundoff are clamped to zero.
inline Spectrum singular_values(const ComplexMatrix& v, double tol = 1e-12) {
    Spectrum s = eig_hermitian(gram(v), tol).spectrum;
    for (auto& x : s.values) x = std::sqrt(std::max(x, 0.0));
    return s;
}

struct LogDet {
    double value = 0.0;
    bool degenerate = false; // repeated node: det is exactly zero, value is -inf
};

/// log det(V^* V) for the square d = 1 ensemble, entirely in the log domain:
///   sum_{p<q} 2 log|e^{2 pi i theta_p} - e^{2 pi i theta_q}| - N log N,
/// with |e^{ia} - e^{ib}| = 2 |sin((a-b)/2)|.
inline LogDet logdet_gram(const PhaseVector& phases, int N) {
    if (phases.dim() != 1 || phases.count() != N)
        throw std::invalid_argument("logdet_gram: square d = 1 ensemble required");
    LogDet out;
    double sum = 0.0, comp = 0.0;
    for (int p = 0; p < N; ++p)
        for (int q = p + 1; q < N; ++q) {
            const double s = std::abs(2.0 * std::sin(kPi * (phases.value(p) - phases.value(q))));
            if (s == 0.0) {
                out.degenerate = true;
                out.value = -std::numeric_limits<double>::infinity();
                return out;
            }
            const double term = 2.0 * std::log(s) - comp;
            const double t = sum + term;
            comp = (t - sum) - term;
            sum = t;
        }
    out.value = sum - N * std::log(static_cast<double>(N));
    return out;
}

inline LogDet trace_log(const PhaseVector& phases, int N) {
    LogDet out = logdet_gram(phases, N);
    if (!out.degenerate) out.value /= N;
    return out;
}

/// Interlacing bound from the 2x2 principal minors of the Dirichlet Gram:
/// min over pairs of 1 - |D_N(2 pi (theta_k - theta_l))|, the smaller root of
/// (1 - lambda)^2 = D_N^2.
inline double min_eig_2x2_bound(const PhaseVector& phases, int N) {
    const int L = phases.count();
    if (phases.dim() != 1 || L < 2) throw std::invalid_argument("min_eig_2x2_bound: d = 1, L >= 2");
    double best = 1.0;
    for (int k = 0; k < L; ++k)
        for (int l = k + 1; l < L; ++l) {
            const double d = dirichlet_kernel(kTwoPi * (phases.value(k) - phases.value(l)), N);
            best = std::min(best, 1.0 - std::abs(d));
        }
    return best;
}

/// Minimum circular spacing of the phases, in theta units on the circle of
/// circumference 1.
inline double min_spacing(const PhaseVector& phases) {
    const int L = phases.count();
    std::vector<double> t(L);
    for (int q = 0; q < L; ++q) t[q] = phases.value(q);
    std::sort(t.begin(), t.end());
    double best = 1.0 - t.back() + t.front(); // wrap gap
    for (int q = 1; q < L; ++q) best = std::min(best, t[q] - t[q - 1]);
    return best;
}

/// de Finetti: P(min circular spacing > delta) = (1 - N delta)_+^{N-1}.
inline double min_spacing_exact_prob(int N, double delta) {
    if (delta < 0.0) throw std::invalid_argument("min_spacing_exact_prob: delta >= 0");
    const double base = 1.0 - N * delta;
    return base <= 0.0 ? 0.0 : std::pow(base, N - 1);
}

struct SpacingCheck {
    double empirical = 0.0;
    double exact = 0.0;
};

inline SpacingCheck min_spacing_cdf_check(int N, double delta, int trials, uint64_t seed) {
    SpacingCheck out;
    out.exact = min_spacing_exact_prob(N, delta);
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
        const PhaseVector pv = sample_phases(N, 1, SeedSpec{seed, static_cast<uint64_t>(t)});
        if (min_spacing(pv) > delta) ++hits;
    }
    out.empirical = static_cast<double>(hits) / trials;
    return out;
}

struct Norms {
    double colsum = 0.0; // sup_j sum_k |M(k,j)|
    double op = 0.0;     // largest singular value
};

/// Both norms of the sandwich ||M||/sqrt(N) <= ||M||_op <= ||M||.
inline Norms matrix_norms(const ComplexMatrix& m, double tol = 1e-12) {
    Norms out;
    for (int j = 0; j < m.cols; ++j) {
        double s = 0.0;
        for (int k = 0; k < m.rows; ++k) s += std::abs(m.at(k, j));
        out.colsum = std::max(out.colsum, s);
    }
    out.op = singular_values(m, tol).max();
    return out;
}

} // namespace vander
