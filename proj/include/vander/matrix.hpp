#pragma once

#include <algorithm>
#include <vector>

#include "vander/common.hpp"

namespace vander {

/// Dense complex rectangular matrix, row-major. `normalization` records the
/// entry magnitude scalar fixed at construction (1/sqrt(N), N^{-d/2}, or 1).
struct ComplexMatrix {
    int rows = 0, cols = 0;
    double normalization = 1.0;
    std::vector<cplx> a;

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c, double norm = 1.0)
        : rows(r), cols(c), normalization(norm), a(static_cast<size_t>(r) * c) {}

    cplx& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const cplx& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

/// Dense real matrix, row-major.
struct RealMatrix {
    int rows = 0, cols = 0;
    std::vector<double> a;

    RealMatrix() = default;
    RealMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const double& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

/// Hermitian matrix stored fully; H(i,j) == conj(H(j,i)) holds exactly as
/// stored (enforced at construction time by every producer in this library).
struct HermitianMatrix {
    int n = 0;
    std::vector<cplx> a;

    HermitianMatrix() = default;
    explicit HermitianMatrix(int order) : n(order), a(static_cast<size_t>(order) * order) {}

    cplx& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const cplx& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    static HermitianMatrix identity(int order) {
        HermitianMatrix h(order);
        for (int i = 0; i < order; ++i) h.at(i, i) = 1.0;
        return h;
    }
};

inline ComplexMatrix matmul(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matmul: shape mismatch");
    ComplexMatrix z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const cplx v = x.at(i, k);
            if (v == cplx{}) continue;
            for (int j = 0; j < y.cols; ++j) z.at(i, j) += v * y.at(k, j);
        }
    return z;
}

inline cplx trace(const ComplexMatrix& m) {
    cplx t = 0.0;
    for (int i = 0; i < std::min(m.rows, m.cols); ++i) t += m.at(i, i);
    return t;
}

inline double trace_real(const HermitianMatrix& h) {
    double t = 0.0;
    for (int i = 0; i < h.n; ++i) t += h.at(i, i).real();
    return t;
}

inline double frobenius(const ComplexMatrix& m) {
    double s = 0.0;
    for (const auto& v : m.a) s += std::norm(v);
    return std::sqrt(s);
}

inline double max_abs(const ComplexMatrix& m) {
    double s = 0.0;
    for (const auto& v : m.a) s = std::max(s, std::abs(v));
    return s;
}

/// LU determinant with partial pivoting. Test oracle for the log-domain
/// determinant identities; only sensible at sizes where det does not under- or
/// overflow in linear scale.
inline cplx lu_det(ComplexMatrix m) {
    if (m.rows != m.cols) throw std::invalid_argument("lu_det: square matrix required");
    const int n = m.rows;
    cplx det = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(m.at(i, k)) > std::abs(m.at(piv, k))) piv = i;
        if (m.at(piv, k) == cplx{}) return 0.0;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(piv, j));
            det = -det;
        }
        det *= m.at(k, k);
        for (int i = k + 1; i < n; ++i) {
            const cplx f = m.at(i, k) / m.at(k, k);
            for (int j = k; j < n; ++j) m.at(i, j) -= f * m.at(k, j);
        }
    }
    return det;
}

/// Gauss-Jordan inverse with partial pivoting (plumbing for identity checks).
inline ComplexMatrix lu_inverse(ComplexMatrix m) {
    if (m.rows != m.cols) throw std::invalid_argument("lu_inverse: square matrix required");
    const int n = m.rows;
    ComplexMatrix inv = ComplexMatrix::identity(n);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(m.at(i, k)) > std::abs(m.at(piv, k))) piv = i;
        if (m.at(piv, k) == cplx{}) throw singular_matrix("lu_inverse: singular matrix");
        if (piv != k)
            for (int j = 0; j < n; ++j) {
                std::swap(m.at(k, j), m.at(piv, j));
                std::swap(inv.at(k, j), inv.at(piv, j));
            }
        const cplx d = m.at(k, k);
        for (int j = 0; j < n; ++j) {
            m.at(k, j) /= d;
            inv.at(k, j) /= d;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            const cplx f = m.at(i, k);
            if (f == cplx{}) continue;
            for (int j = 0; j < n; ++j) {
                m.at(i, j) -= f * m.at(k, j);
                inv.at(i, j) -= f * inv.at(k, j);
            }
        }
    }
    return inv;
}

} // namespace vander
