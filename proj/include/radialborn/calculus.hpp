// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_CALCULUS_HPP
#define RADIALBORN_CALCULUS_HPP

#include <cmath>
#include <memory>
#include <vector>

#include "radialborn/constants.hpp"
#include "radialborn/grid.hpp"
#include "radialborn/profile.hpp"
#include "radialborn/quadrature.hpp"

namespace rb {

namespace detail {

/// sigma-moment of a single power/log term against r^{2k+d-1}.
/// integral_0^1 c r^{p+2k+d-1} (log r)^q dr, exact.
inline double term_moment(const PowerTerm& t, int k, int d) {
    const double e = t.exponent + 2.0 * k + d - 1.0;
    if (e <= -1.0)
        throw DivergenceError("moment_sigma: non-integrable power term (exponent " +
                              std::to_string(t.exponent) + ")");
    const double a = e + 1.0;
    return t.log_factor ? -t.coeff / (a * a) : t.coeff / a;
}

} // namespace detail

/// Hausdorff-type moment sigma_k[u] = (1/|S^{d-1}|) int_{B^d} u |x|^{2k} dx
///                                  = int_0^1 u_0(r) r^{2k+d-1} dr.
/// Power/log terms are integrated analytically; the smooth remainder by
/// adaptive quadrature to abs_tol.
inline double moment_sigma(const RadialProfile& u, int k, double abs_tol = 1e-12) {
    if (k < 0) throw NumericError("moment_sigma: k must be >= 0");
    const int d = u.dimension();
    double value = 0.0;
    for (const auto& t : u.terms()) value += detail::term_moment(t, k, d);
    if (u.smooth()) {
        const auto& f = *u.smooth();
        const double w = 2.0 * k + d - 1.0;
        auto integrand = [&](double r) { return f.jet(r).v * std::pow(r, w); };
        value += integrate(integrand, 0.0, 1.0, abs_tol, abs_tol).value;
    }
    return value;
}

/// Radial Laplacian Delta u = u'' + (d-1) u'/r, returned as a profile.
/// Closed-form and sampled parts differentiate through their jets (exact
/// for closed forms, spline-exact for sampled data with >= 5 nodes).
inline RadialProfile laplacian_radial(const RadialProfile& u) {
    const int d = u.dimension();
    if (u.is_sampled()) {
        const auto* s = dynamic_cast<const fn::Sampled*>(u.smooth().get());
        if (s->spline().nodes().size() < 5)
            throw InsufficientDataError("laplacian_radial: sampled profile needs >= 5 nodes");
    }
    std::vector<PowerTerm> terms;
    for (const auto& t : u.terms()) {
        if (t.coeff == 0.0) continue;
        const double p = t.exponent;
        if (!t.log_factor) {
            if (p != 0.0) terms.push_back({t.coeff * p * (p + d - 2.0), p - 2.0, false});
        } else {
            terms.push_back({t.coeff * p * (p + d - 2.0), p - 2.0, true});
            terms.push_back({t.coeff * (2.0 * p + d - 2.0), p - 2.0, false});
        }
    }
    FnPtr smooth;
    if (u.smooth()) {
        class LaplacianFn final : public RadialFn {
        public:
            LaplacianFn(FnPtr f, int d) : f_(std::move(f)), d_(d) {}
            Jet jet(double r) const override {
                auto v = [&](double x) {
                    Jet j = f_->jet(x);
                    return j.d2 + (d_ - 1) * j.d1 / x;
                };
                // derivatives of Delta u by second-order central differences
                const double h = std::min(std::max(1e-5 * r, 1e-7), 0.5 * r);
                const double vm = v(r - h), v0 = v(r), vp = v(r + h);
                return {v0, (vp - vm) / (2 * h), (vp - 2 * v0 + vm) / (h * h)};
            }
            bool finite_at_zero() const override { return false; }

        private:
            FnPtr f_;
            int d_;
        };
        smooth = std::make_shared<LaplacianFn>(u.smooth(), d);
    }
    return RadialProfile(d, std::move(terms), std::move(smooth));
}

namespace detail {

/// T_d of one power/log term, as exact power/log terms.
inline std::vector<PowerTerm> td_term(const PowerTerm& t, int d) {
    const double p = t.exponent;
    if (p <= -d) throw DivergenceError("apply_Td: non-integrable input term");
    std::vector<PowerTerm> out;
    if (!t.log_factor) {
        if (p == -2.0) {
            // T_d(r^{-2}) = -log(r)/(d-2)
            if (d == 2) throw DivergenceError("apply_Td: r^{-2} is not integrable in d=2");
            out.push_back({-t.coeff / (d - 2.0), 0.0, true});
        } else {
            const double den = (p + d) * (p + 2.0);
            out.push_back({t.coeff / den, 0.0, false});
            out.push_back({-t.coeff / den, p + 2.0, false});
        }
    } else {
        if (p == -2.0 || p == -static_cast<double>(d))
            throw NumericError("apply_Td: log-factor term with exponent -2 or -d unsupported");
        const double a = p + d, b = p + 2.0;
        out.push_back({t.coeff * (-1.0 / (a * b * b) - 1.0 / (a * a * b)), 0.0, false});
        out.push_back({t.coeff * (1.0 / (a * b * b) + 1.0 / (a * a * b)), b, false});
        out.push_back({-t.coeff / (a * b), b, true});
    }
    return out;
}

class TdFn final : public RadialFn {
public:
    TdFn(FnPtr f, int d, int grid_n) : f_(std::move(f)), d_(d) {
        auto grid = default_grid(grid_n);
        auto inner = [&](double s) { return f_->jet(s).v * std::pow(s, d_ - 1); };
        std::vector<double> phi = cumulative_integral(inner, 0.0, grid);
        phi_ = CubicSpline(grid, phi);
        auto outer = [&](double t) { return phi_(t) * std::pow(t, 1 - d_); };
        std::vector<double> psi = cumulative_integral(outer, grid.front(), grid);
        // T(r) = int_r^1 ... = psi(1) - psi(r)
        const double total = psi.back();
        for (auto& v : psi) v = total - v;
        td_ = CubicSpline(grid, psi);
    }
    Jet jet(double r) const override {
        // first and second derivatives come from the defining integrals,
        // not from the spline, so -Delta(T_d f) = f holds to quadrature
        // accuracy on the whole grid
        const double phi = phi_(r);
        Jet out;
        out.v = td_(r);
        out.d1 = -std::pow(r, 1 - d_) * phi;
        out.d2 = (d_ - 1) * std::pow(r, -d_) * phi - f_->jet(r).v;
        return out;
    }

private:
    FnPtr f_;
    int d_;
    CubicSpline phi_, td_;
};

} // namespace detail

/// Volume-potential operator
///   T_d f(x) = int_{|x|}^1 t^{1-d} int_0^t f_0(s) s^{d-1} ds dt ,
/// which solves -Delta(T_d f) = f with T_d f = 0 on the boundary.
inline RadialProfile apply_Td(const RadialProfile& f, int grid_n = 2048) {
    const int d = f.dimension();
    std::vector<PowerTerm> terms;
    for (const auto& t : f.terms()) {
        if (t.coeff == 0.0) continue;
        for (auto& o : detail::td_term(t, d)) terms.push_back(o);
    }
    FnPtr smooth;
    if (f.smooth()) smooth = std::make_shared<detail::TdFn>(f.smooth(), d, grid_n);
    return RadialProfile(d, std::move(terms), std::move(smooth));
}

/// Weighted norm ||f||_{d,alpha} = int_{B^d} |f| |x|^{2-d} (1-log|x|)^alpha dx.
inline double norm_dalpha(const RadialProfile& f, double alpha, double tol = 1e-10) {
    if (alpha < 0) throw NumericError("norm_dalpha: alpha must be >= 0");
    for (const auto& t : f.terms())
        if (t.coeff != 0.0 && t.exponent <= -2.0)
            throw DivergenceError("norm_dalpha: power term of exponent <= -2 is not integrable");
    auto integrand = [&](double r) {
        return std::abs(f.jet(r).v) * r * std::pow(1.0 - std::log(r), alpha);
    };
    double total = 0.0;
    const double splits[] = {0.0, 1e-6, 1e-3, 0.1, 1.0};
    for (int i = 0; i + 1 < 5; ++i)
        total += integrate(integrand, splits[i], splits[i + 1], tol, tol).value;
    return sphere_measure(f.dimension()) * total;
}

/// L^p norm over the ball (or the annulus r in [r_lo, r_hi]) of the
/// profile itself (order 0), its gradient (order 1), or its Hessian
/// magnitude sqrt(u''^2 + (d-1)(u'/r)^2) (order 2). p = infinity is
/// approximated by a grid supremum.
inline double norm_sobolev(const RadialProfile& u, int order, double p, double r_lo = 0.0,
                           double r_hi = 1.0, double tol = 1e-10) {
    if (order < 0 || order > 2) throw NumericError("norm_sobolev: order must be 0, 1 or 2");
    const int d = u.dimension();
    auto piece = [&](double r) {
        Jet j = u.jet(r);
        if (order == 0) return std::abs(j.v);
        if (order == 1) return std::abs(j.d1);
        const double tang = (d - 1) * (j.d1 / r) * (j.d1 / r);
        return std::sqrt(j.d2 * j.d2 + tang);
    };
    if (std::isinf(p)) {
        double sup = 0.0;
        for (double r : uniform_grid(std::max(r_lo, 1e-6), r_hi, 512)) sup = std::max(sup, piece(r));
        return sup;
    }
    auto integrand = [&](double r) { return std::pow(piece(r), p) * std::pow(r, d - 1); };
    const double lo = std::max(r_lo, 0.0);
    double total = 0.0;
    const double splits[] = {lo, std::max(lo, 1e-4), std::max(lo, 0.05), r_hi};
    for (int i = 0; i + 1 < 4; ++i)
        if (splits[i + 1] > splits[i])
            total += integrate(integrand, splits[i], splits[i + 1], tol, tol).value;
    return std::pow(sphere_measure(d) * total, 1.0 / p);
}

/// W^{2,1} norm (sum of the L^1 norms of orders 0,1,2).
inline double norm_w21(const RadialProfile& u, double r_lo = 0.0, double r_hi = 1.0,
                       double tol = 1e-9) {
    return norm_sobolev(u, 0, 1.0, r_lo, r_hi, tol) + norm_sobolev(u, 1, 1.0, r_lo, r_hi, tol) +
           norm_sobolev(u, 2, 1.0, r_lo, r_hi, tol);
}

} // namespace rb

#endif
