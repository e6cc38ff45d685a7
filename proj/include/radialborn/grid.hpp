// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_GRID_HPP
#define RADIALBORN_GRID_HPP

#include <cmath>
#include <vector>

#include "radialborn/errors.hpp"

namespace rb {

/// Composite radial grid on (0,1]: logarithmically refined towards r=0
/// (origin singularities) and towards r=1 (boundary traces). Last node
/// is exactly 1.
inline std::vector<double> default_grid(int n = 2048, double r_min = 1e-6) {
    if (n < 16) throw NumericError("default_grid: need at least 16 nodes");
    const int n0 = n / 2;      // log-spaced on [r_min, 1/2]
    const int n1 = n - n0;     // 1 - log-spaced distance on (1/2, 1]
    std::vector<double> g;
    g.reserve(n);
    const double l0 = std::log(r_min), l1 = std::log(0.5);
    for (int i = 0; i < n0; ++i) g.push_back(std::exp(l0 + (l1 - l0) * i / (n0 - 1)));
    // distances to the boundary from 1/2 down to d_min, log-spaced
    const double d_min = 1e-6;
    const double m0 = std::log(0.5), m1 = std::log(d_min);
    for (int i = 1; i < n1; ++i) g.push_back(1.0 - std::exp(m0 + (m1 - m0) * i / (n1 - 1)));
    g.push_back(1.0);
    return g;
}

/// Uniform grid on [a, b] with n nodes.
inline std::vector<double> uniform_grid(double a, double b, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
    return g;
}

} // namespace rb

#endif
