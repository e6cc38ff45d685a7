// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_QUADRATURE_HPP
#define RADIALBORN_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "radialborn/errors.hpp"

namespace rb {

namespace detail {

// Gauss-Kronrod 15(7) nodes and weights on [-1,1] (symmetric half listed).
inline constexpr double gk15_x[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double gk15_wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double gk15_wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
    double value;
    double error;
};

template <class F>
PanelResult gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fk[15];
    for (int i = 0; i < 7; ++i) {
        fk[i] = f(c - h * gk15_x[i]);
        fk[14 - i] = f(c + h * gk15_x[i]);
    }
    fk[7] = f(c);
    double resk = gk15_wk[7] * fk[7];
    double resg = gk15_wg[3] * fk[7];
    for (int i = 0; i < 7; ++i) {
        resk += gk15_wk[i] * (fk[i] + fk[14 - i]);
        if (i % 2 == 1) resg += gk15_wg[i / 2] * (fk[i] + fk[14 - i]);
    }
    return {resk * h, std::abs(resk - resg) * h};
}

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

} // namespace detail

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

/// Adaptive Gauss-Kronrod integration of f over [a,b].
/// Splits the worst interval until the global error estimate is below
/// abs_tol + rel_tol*|I|. Throws DivergenceError if the estimate keeps
/// growing without converging (non-integrable input).
template <class F>
QuadratureResult integrate(const F& f, double a, double b, double abs_tol = 1e-12,
                           double rel_tol = 1e-12, int max_intervals = 2000) {
    if (a == b) return {0.0, 0.0, 0};
    std::priority_queue<detail::Interval> queue;
    auto first = detail::gk15(f, a, b);
    queue.push({a, b, first.value, first.error});
    double total = first.value, err = first.error;
    int n = 1;
    while (err > abs_tol + rel_tol * std::abs(total) && n < max_intervals) {
        detail::Interval worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        queue.push({worst.a, mid, left.value, left.error});
        queue.push({mid, worst.b, right.value, right.error});
        ++n;
        if (!std::isfinite(total) || !std::isfinite(err))
            throw DivergenceError("non-finite integrand in adaptive quadrature");
    }
    if (err > 1e-3 * std::max(1.0, std::abs(total)) && err > 1e6 * (abs_tol + rel_tol * std::abs(total)))
        throw DivergenceError("adaptive quadrature failed to converge (integrand likely non-integrable)");
    return {total, err, 15 * (2 * n - 1)};
}

/// Fixed-order Gauss-Legendre rule (for panel-based oscillatory quadrature).
inline void gauss_legendre_16(std::vector<double>& nodes, std::vector<double>& weights) {
    static const double x[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                0.9445750230732326, 0.9894009349916499};
    static const double w[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                0.0622535239386479, 0.0271524594117541};
    nodes.clear();
    weights.clear();
    for (int i = 7; i >= 0; --i) {
        nodes.push_back(-x[i]);
        weights.push_back(w[i]);
    }
    for (int i = 0; i < 8; ++i) {
        nodes.push_back(x[i]);
        weights.push_back(w[i]);
    }
}

/// Cumulative integral of f from `from` to each point of the sorted grid,
/// one GK panel per grid cell. Used for the volume-potential operator.
template <class F>
std::vector<double> cumulative_integral(const F& f, double from, const std::vector<double>& grid) {
    std::vector<double> out(grid.size());
    double acc = 0.0, prev = from;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] > prev) {
            // split long cells so single panels stay accurate
            const double len = grid[i] - prev;
            int pieces = len > 0.05 ? 4 : 1;
            double x0 = prev;
            for (int p = 1; p <= pieces; ++p) {
                double x1 = prev + len * p / pieces;
                acc += detail::gk15(f, x0, x1).value;
                x0 = x1;
            }
        }
        prev = grid[i];
        out[i] = acc;
    }
    return out;
}

} // namespace rb

#endif
