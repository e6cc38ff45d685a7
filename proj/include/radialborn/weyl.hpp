// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_WEYL_HPP
#define RADIALBORN_WEYL_HPP

#include <array>
#include <cmath>

#include "radialborn/halfline.hpp"
#include "radialborn/ode.hpp"

namespace rb {

/// Jost solution data at the origin: psi(0,z) and psi'(0,z) for the
/// renormalized solution u = e^{zt} psi (u(T)=1, u'(T)=0 encodes the
/// e^{-zt}(1+o(1)) asymptotics at the truncation point).
struct JostOrigin {
    double value = 0.0;      // psi(0,z) = F(z) when evaluated at the Jost data
    double derivative = 0.0; // psi'(0,z)
};

inline JostOrigin jost_at_origin(const HalflinePotential& Q, double z, double rel_tol = 1e-12) {
    if (z < 0.0) throw NumericError("jost_at_origin: need z >= 0");
    auto rhs = [&](double t, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        dy[0] = y[1];
        dy[1] = 2.0 * z * y[1] + Q(t) * y[0];
    };
    auto y = integrate_ode<2>(rhs, {1.0, 0.0}, Q.T(), 0.0, rel_tol, 1e-14);
    // psi(0) = u(0), psi'(0) = u'(0) - z u(0)
    return {y[0], y[1] - z * y[0]};
}

/// Jost function F(z) = psi(0,z), z >= 0.
inline double jost_function(const HalflinePotential& Q, double z, double rel_tol = 1e-12) {
    return jost_at_origin(Q, z, rel_tol).value;
}

struct WeylValue {
    double m = 0.0;
    double truncation_estimate = 0.0;
};

/// Weyl-Titchmarsh function m_Q(-z^2) = v'(0)/v(0) of the L^2 solution,
/// computed from the Jost solution. Throws NearEigenvalueError when z is
/// too close to a zero of the Jost function.
inline WeylValue weyl_m(const HalflinePotential& Q, double z, double rel_tol = 1e-12) {
    auto j = jost_at_origin(Q, z, rel_tol);
    const double scale = 1.0 + std::abs(j.derivative) / (1.0 + z);
    if (std::abs(j.value) < 1e-9 * scale)
        throw NearEigenvalueError("weyl_m: z too close to a Dirichlet eigenvalue (Jost zero)");
    WeylValue out;
    out.m = j.derivative / j.value;
    out.truncation_estimate = Q.tail_bound() / (2.0 * z + 1.0) + 100.0 * rel_tol;
    return out;
}

} // namespace rb

#endif
