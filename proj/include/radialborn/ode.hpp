// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_ODE_HPP
#define RADIALBORN_ODE_HPP

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "radialborn/errors.hpp"

namespace rb {

/// Adaptive Dormand-Prince 5(4) integration of a small fixed-size system
/// dy/dt = f(t, y), from t0 to t1 (either direction). The Fehlberg 7(8)
/// pair is avoided on purpose: its embedded error estimate degenerates on
/// the near-quadrature half-line systems integrated here and silently
/// loses ~4 digits.
template <std::size_t N, class F>
std::array<double, N> integrate_ode(const F& f, std::array<double, N> y0, double t0, double t1,
                                    double rel_tol = 1e-12, double abs_tol = 1e-13) {
    namespace od = boost::numeric::odeint;
    using state = std::array<double, N>;
    auto sys = [&](const state& y, state& dydt, double t) { f(t, y, dydt); };
    auto stepper = od::make_controlled<od::runge_kutta_dopri5<state>>(abs_tol, rel_tol);
    const double dt0 = (t1 > t0 ? 1.0 : -1.0) * std::max(1e-4, 1e-3 * std::abs(t1 - t0));
    try {
        od::integrate_adaptive(stepper, sys, y0, t0, t1, dt0);
    } catch (const std::exception& e) {
        throw SolverError(std::string("ODE integration failed: ") + e.what());
    }
    for (double v : y0)
        if (!std::isfinite(v)) throw SolverError("ODE integration produced non-finite state");
    return y0;
}

/// Same, but records the state at each of the given (sorted, in the
/// direction of integration) observation points.
template <std::size_t N, class F>
std::vector<std::array<double, N>> integrate_ode_at(const F& f, std::array<double, N> y0,
                                                    double t0, const std::vector<double>& ts,
                                                    double rel_tol = 1e-12,
                                                    double abs_tol = 1e-13) {
    std::vector<std::array<double, N>> out;
    out.reserve(ts.size());
    double t = t0;
    auto y = y0;
    for (double tnext : ts) {
        if (tnext != t) y = integrate_ode<N>(f, y, t, tnext, rel_tol, abs_tol);
        t = tnext;
        out.push_back(y);
    }
    return out;
}

} // namespace rb

#endif
