// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_CONSTANTS_HPP
#define RADIALBORN_CONSTANTS_HPP

#include <cmath>

#include "radialborn/errors.hpp"

namespace rb {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr const char* version = "0.1.0";

/// Half-line mode shift nu_d = (d-2)/2.
inline double nu_d(int d) { return 0.5 * (d - 2); }

/// Surface measure of the unit sphere S^{d-1}: 2 pi^{d/2} / Gamma(d/2).
inline double sphere_measure(int d) {
    return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

/// Volume of the unit ball B^d.
inline double ball_volume(int d) { return sphere_measure(d) / d; }

inline void require_dimension(int d) {
    if (d < 2) throw SchemaError("dimension must satisfy d >= 2");
}

} // namespace rb

#endif
