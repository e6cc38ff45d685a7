// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_LINALG_HPP
#define RADIALBORN_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "radialborn/errors.hpp"

namespace rb {

/// Row-major dense matrix, just big enough for the small fitting problems
/// in this library.
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

struct LsqResult {
    std::vector<double> x;
    double residual_norm = 0.0;
    /// max |R_ii| / min |R_ii| of the QR factor, as a conditioning proxy.
    double condition = 0.0;
};

/// Least squares via Householder QR: minimizes ||A x - b||_2.
/// Optionally adds Tikhonov damping sqrt(reg) * ||x||_2.
inline LsqResult least_squares(Matrix A, std::vector<double> b, double reg = 0.0) {
    if (A.rows != b.size()) throw NumericError("least_squares: size mismatch");
    if (reg > 0.0) {
        // append sqrt(reg) * I rows
        Matrix B(A.rows + A.cols, A.cols);
        for (std::size_t i = 0; i < A.rows; ++i)
            for (std::size_t j = 0; j < A.cols; ++j) B(i, j) = A(i, j);
        const double s = std::sqrt(reg);
        for (std::size_t j = 0; j < A.cols; ++j) B(A.rows + j, j) = s;
        b.resize(A.rows + A.cols, 0.0);
        A = std::move(B);
    }
    const std::size_t m = A.rows, n = A.cols;
    if (m < n) throw NumericError("least_squares: underdetermined system");
    std::vector<double> rdiag(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += A(i, k) * A(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) throw NumericError("least_squares: rank-deficient matrix");
        // reflector v = x/norm + e1 with norm signed like x1, so v1 >= 1;
        // the transformed diagonal is then -norm
        if (A(k, k) < 0) norm = -norm;
        for (std::size_t i = k; i < m; ++i) A(i, k) /= norm;
        A(k, k) += 1.0;
        for (std::size_t j = k + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i) s += A(i, k) * A(i, j);
            s = -s / A(k, k);
            for (std::size_t i = k; i < m; ++i) A(i, j) += s * A(i, k);
        }
        double s = 0.0;
        for (std::size_t i = k; i < m; ++i) s += A(i, k) * b[i];
        s = -s / A(k, k);
        for (std::size_t i = k; i < m; ++i) b[i] += s * A(i, k);
        rdiag[k] = -norm;
    }
    LsqResult out;
    out.x.assign(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= A(k, j) * out.x[j];
        out.x[k] = s / rdiag[k];
    }
    double res = 0.0;
    for (std::size_t i = n; i < m; ++i) res += b[i] * b[i];
    out.residual_norm = std::sqrt(res);
    double dmax = 0.0, dmin = std::abs(rdiag[0]);
    for (double v : rdiag) {
        dmax = std::max(dmax, std::abs(v));
        dmin = std::min(dmin, std::abs(v));
    }
    out.condition = dmin > 0 ? dmax / dmin : std::numeric_limits<double>::infinity();
    return out;
}

/// Jacobi eigendecomposition of a small symmetric matrix. Returns
/// eigenvalues; V (if non-null) receives eigenvectors in its columns.
inline std::vector<double> symmetric_eigen(Matrix S, Matrix* V = nullptr) {
    const std::size_t n = S.rows;
    if (V) {
        *V = Matrix(n, n);
        for (std::size_t i = 0; i < n; ++i) (*V)(i, i) = 1.0;
    }
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += S(p, q) * S(p, q);
        if (off < 1e-26) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(S(p, q)) < 1e-300) continue;
                const double theta = 0.5 * (S(q, q) - S(p, p)) / S(p, q);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double sip = S(i, p), siq = S(i, q);
                    S(i, p) = c * sip - s * siq;
                    S(i, q) = s * sip + c * siq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double spi = S(p, i), sqi = S(q, i);
                    S(p, i) = c * spi - s * sqi;
                    S(q, i) = s * spi + c * sqi;
                }
                if (V)
                    for (std::size_t i = 0; i < n; ++i) {
                        const double vip = (*V)(i, p), viq = (*V)(i, q);
                        (*V)(i, p) = c * vip - s * viq;
                        (*V)(i, q) = s * vip + c * viq;
                    }
            }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = S(i, i);
    return ev;
}

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares line y = a + b x.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw NumericError("fit_line: need >= 2 points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
    return f;
}

} // namespace rb

#endif
