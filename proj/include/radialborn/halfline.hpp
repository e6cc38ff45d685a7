// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_HALFLINE_HPP
#define RADIALBORN_HALFLINE_HPP

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "radialborn/conductivity.hpp"
#include "radialborn/quadrature.hpp"
#include "radialborn/spline.hpp"

namespace rb {

/// Potential Q on the truncated half-line [0,T], from the change of
/// variables Q(t) = e^{-2t} q_V(e^{-t}). Conductivity-derived potentials
/// decay like e^{-2t}, which fixes the truncation rule. The weighted
/// norms ||Q||_{L^1_l}, l = 0..3, are recorded at construction.
class HalflinePotential {
public:
    HalflinePotential() = default;

    /// Tabulates q on [0,T]; keeps the exact evaluator when provided.
    HalflinePotential(std::function<double(double)> q, double T, int n = 8192,
                      bool keep_exact = true) : T_(T) {
        if (!(T > 0.0)) throw NumericError("HalflinePotential: need T > 0");
        std::vector<double> ts(n), qs(n);
        for (int i = 0; i < n; ++i) {
            ts[i] = T * i / (n - 1.0);
            qs[i] = q(ts[i]);
        }
        // recorded L^1_l norms (trapezoid on the sample grid + tail term)
        tail_bound_ = std::abs(qs[n - 1]);
        const double h = T / (n - 1.0);
        for (int l = 0; l <= 3; ++l) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
                acc += w * std::abs(qs[i]) * std::pow(1.0 + ts[i], l);
            }
            recorded_norms_[l] = acc * h + 0.5 * tail_bound_ * std::pow(1.0 + T, l);
        }
        spline_ = CubicSpline(std::move(ts), std::move(qs));
        if (keep_exact) exact_ = std::move(q);
    }

    double T() const { return T_; }
    double tail_bound() const { return tail_bound_; }
    /// Recorded norm for integer weights l = 0..3.
    double recorded_norm(int ell) const {
        if (ell < 0 || ell > 3) throw NumericError("recorded_norm: l must be 0..3");
        return recorded_norms_[ell];
    }

    double operator()(double t) const {
        if (t >= T_) return 0.0;
        return exact_ ? exact_(t) : spline_(t);
    }

    /// Weighted norm ||Q||_{L^1_l} = int_0^T |Q|(1+t)^l dt plus an e^{-2t}
    /// tail estimate beyond T, by adaptive quadrature.
    double weighted_norm(double ell) const {
        auto f = [&](double t) { return std::abs((*this)(t)) * std::pow(1.0 + t, ell); };
        double v = integrate(f, 0.0, T_, 1e-11, 1e-11).value;
        v += 0.5 * tail_bound_ * std::pow(1.0 + T_, ell);
        return v;
    }

private:
    double T_ = 0.0;
    double tail_bound_ = 0.0;
    std::array<double, 4> recorded_norms_{};
    CubicSpline spline_;
    std::function<double(double)> exact_;
};

/// Truncation rule T = max(12, -log(eps_tail)/2 + log(1 + sup|q_V|)),
/// so that e^{-2t}-decaying potentials are below eps_tail at T.
inline double halfline_truncation(double q_sup, double eps_tail = 1e-12) {
    return std::max(12.0, -0.5 * std::log(eps_tail) + std::log1p(std::abs(q_sup)));
}

/// Constant C(0,p,d) = ((p-1)/(2p-d))^{1-1/p} in the a-priori bound
/// ||Q_V||_{L^1} <= C ||V||_{L^p}; the p = infinity limit is 1/2.
inline double halfline_l1_bound_constant(double p, int d) {
    if (std::isinf(p)) return 0.5;
    if (!(p > 0.5 * d)) throw NumericError("halfline bound constant needs p > d/2");
    return std::pow((p - 1.0) / (2.0 * p - d), 1.0 - 1.0 / p);
}

/// Change of variables V(|x|) -> Q(t) = e^{-2t} V(e^{-t}) on [0,T].
/// When an integrability exponent p > d/2 is supplied, the recorded L^1
/// norm is checked against the a-priori bound C(0,p,d) ||V||_{L^p}.
inline HalflinePotential potential_to_halfline(const RadialProfile& V, double T = 0.0,
                                               double p = 0.0, bool* bound_ok = nullptr) {
    double sup = 0.0;
    for (double r : default_grid(256, 1e-4)) sup = std::max(sup, std::abs(V.jet(r).v));
    if (T <= 0.0) T = halfline_truncation(sup);
    auto q = [V](double t) {
        const double r = std::exp(-t);
        return r * r * V.jet(r).v;
    };
    HalflinePotential Q(q, T);
    if (bound_ok && p > 0.0) {
        const int d = V.dimension();
        const double vnorm = std::isinf(p) ? sup : norm_sobolev(V, 0, p, 0.0, 1.0, 1e-8);
        *bound_ok = Q.recorded_norm(0) <= halfline_l1_bound_constant(p, d) * vnorm * (1.0 + 1e-4);
    }
    return Q;
}

/// Q directly from a conductivity, using the logarithmic-derivative form
/// Q(t) = phi''/phi - nu_d^2 with phi(t) = e^{-nu_d t} sqrt(gamma(e^{-t})),
/// which expands to r^2 g''/g + (d-1) r g'/g for g = sqrt(gamma).
inline HalflinePotential halfline_from_conductivity(const ConductivitySpec& spec, double T = 0.0) {
    const int d = spec.d;
    const RadialProfile gamma = spec.gamma;
    auto q = [gamma, d](double t) {
        const double r = std::exp(-t);
        Jet g = sqrt(gamma.jet(r));
        if (!(g.v > 0.0)) throw EllipticityError("conductivity touches zero on the half-line map");
        return r * r * g.d2 / g.v + (d - 1) * r * g.d1 / g.v;
    };
    if (T <= 0.0) {
        double sup = 0.0;
        for (double t : uniform_grid(0.0, 14.0, 256)) sup = std::max(sup, std::abs(q(t)));
        T = halfline_truncation(sup);
    }
    return HalflinePotential(q, T);
}

} // namespace rb

#endif
