// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_SPLINE_HPP
#define RADIALBORN_SPLINE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "radialborn/errors.hpp"
#include "radialborn/jet.hpp"

namespace rb {

/// Cubic interpolating spline with not-a-knot end conditions (exact on
/// cubic polynomials). Falls back to a quadratic/linear fit below 4 nodes.
/// Evaluation outside the node range extrapolates the end piece.
class CubicSpline {
public:
    CubicSpline() = default;

    CubicSpline(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n != y_.size() || n < 2) throw InsufficientDataError("spline: need >= 2 nodes");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1])) throw NumericError("spline: nodes must be strictly increasing");
        m_.assign(n, 0.0);
        if (n >= 4) solve_not_a_knot();
        // n == 2 or 3: m_ stays zero -> linear pieces; fine for the fallback
    }

    double min_x() const { return x_.front(); }
    double max_x() const { return x_.back(); }
    const std::vector<double>& nodes() const { return x_; }
    const std::vector<double>& values() const { return y_; }

    double operator()(double x) const { return jet(x).v; }

    Jet jet(double x) const {
        const std::size_t i = locate(x);
        const double h = x_[i + 1] - x_[i];
        const double u = x_[i + 1] - x, w = x - x_[i];
        Jet out;
        out.v = m_[i] * u * u * u / (6 * h) + m_[i + 1] * w * w * w / (6 * h) +
                (y_[i] / h - m_[i] * h / 6) * u + (y_[i + 1] / h - m_[i + 1] * h / 6) * w;
        out.d1 = -m_[i] * u * u / (2 * h) + m_[i + 1] * w * w / (2 * h) -
                 (y_[i] / h - m_[i] * h / 6) + (y_[i + 1] / h - m_[i + 1] * h / 6);
        out.d2 = (m_[i] * u + m_[i + 1] * w) / h;
        return out;
    }

private:
    std::size_t locate(double x) const {
        if (x <= x_.front()) return 0;
        if (x >= x_.back()) return x_.size() - 2;
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        return static_cast<std::size_t>(it - x_.begin()) - 1;
    }

    void solve_not_a_knot() {
        const std::size_t n = x_.size();
        std::vector<double> h(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];
        // unknowns M_1 .. M_{n-2}; M_0 and M_{n-1} recovered from the
        // third-derivative continuity conditions at x_1 and x_{n-2}
        const std::size_t m = n - 2;
        std::vector<double> sub(m, 0.0), diag(m, 0.0), sup(m, 0.0), rhs(m, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const std::size_t j = i - 1;
            rhs[j] = (y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1];
            sub[j] = h[i - 1] / 6;
            diag[j] = (h[i - 1] + h[i]) / 3;
            sup[j] = h[i] / 6;
        }
        diag[0] = (h[0] + h[1]) * (h[0] + 2 * h[1]) / (6 * h[1]);
        sup[0] = (h[1] - h[0]) * (h[1] + h[0]) / (6 * h[1]);
        const double hn2 = h[n - 2], hn3 = h[n - 3];
        diag[m - 1] = (hn3 + hn2) * (2 * hn3 + hn2) / (6 * hn3);
        sub[m - 1] = (hn3 - hn2) * (hn3 + hn2) / (6 * hn3);
        // Thomas algorithm
        for (std::size_t j = 1; j < m; ++j) {
            const double w = sub[j] / diag[j - 1];
            diag[j] -= w * sup[j - 1];
            rhs[j] -= w * rhs[j - 1];
        }
        std::vector<double> sol(m);
        sol[m - 1] = rhs[m - 1] / diag[m - 1];
        for (std::size_t j = m - 1; j-- > 0;) sol[j] = (rhs[j] - sup[j] * sol[j + 1]) / diag[j];
        for (std::size_t j = 0; j < m; ++j) m_[j + 1] = sol[j];
        m_[0] = m_[1] * (h[0] + h[1]) / h[1] - m_[2] * h[0] / h[1];
        m_[n - 1] = m_[n - 2] * (hn2 + hn3) / hn3 - m_[n - 3] * hn2 / hn3;
    }

    std::vector<double> x_, y_, m_;
};

/// Finite-difference weights on arbitrary nodes (Fornberg's recursion):
/// weights[j] such that sum_j w_j f(x_j) approximates f^{(order)}(x0).
inline std::vector<double> fd_weights(double x0, const std::vector<double>& x, int order) {
    const int n = static_cast<int>(x.size());
    if (n < order + 1) throw InsufficientDataError("fd_weights: too few nodes for requested order");
    std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = c[i][order];
    return w;
}

} // namespace rb

#endif
