// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_FORWARD_HPP
#define RADIALBORN_FORWARD_HPP

#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "radialborn/calculus.hpp"
#include "radialborn/conductivity.hpp"
#include "radialborn/halfline.hpp"
#include "radialborn/ode.hpp"
#include "radialborn/weyl.hpp"

namespace rb {

enum class Route { conductivity_ode, schrodinger_halfline, closed_form };

inline std::string route_name(Route r) {
    switch (r) {
        case Route::conductivity_ode: return "conductivity-ode";
        case Route::schrodinger_halfline: return "schrodinger-halfline";
        default: return "closed-form";
    }
}

/// DtN spectrum lambda_0..lambda_K with per-mode error estimates.
struct DtnSpectrum {
    int d = 3;
    std::vector<double> lambda;
    std::vector<double> error_estimate;
    Route route = Route::conductivity_ode;

    int k_max() const { return static_cast<int>(lambda.size()) - 1; }
};

namespace detail {

/// Log-log derivative H(x) = r f'(r)/f(r) of the regular radial mode
/// solution, in x = log r:
///   H' = k(k+d-2) + (2-d-w) H - H^2,   w = r gamma'/gamma.
/// Regular at the origin with H -> k (Frobenius exponent), so the
/// integration starts at x0 = log(eps) from the near-stationary value.
inline double conductivity_mode_H(const RadialProfile& gamma, int d, int k, double eps,
                                  double rel_tol) {
    auto w_of = [&](double r) {
        Jet g = gamma.jet(r);
        return r * g.d1 / g.v;
    };
    const double kk = static_cast<double>(k) * (k + d - 2.0);
    auto rhs = [&](double x, const std::array<double, 1>& y, std::array<double, 1>& dy) {
        const double r = std::exp(x);
        dy[0] = kk + (2.0 - d - w_of(r)) * y[0] - y[0] * y[0];
    };
    const double w0 = w_of(eps);
    const double H0 = k - w0 * k / (2.0 * k + d - 2.0 + w0);
    auto y = integrate_ode<1>(rhs, {H0}, std::log(eps), 0.0, rel_tol, 1e-13);
    return y[0];
}

} // namespace detail

/// lambda_k[gamma] by direct integration of the conductivity mode ODE;
/// lambda_0 = 0 exactly.
inline double dtn_eigenvalue_conductivity(const ConductivitySpec& spec, int k,
                                          double rel_tol = 1e-12, double* err_est = nullptr) {
    if (k < 0) throw NumericError("dtn_eigenvalue_conductivity: k >= 0 required");
    if (k == 0) {
        if (err_est) *err_est = 0.0;
        return 0.0;
    }
    const double eps = 1e-6; // regular singular point: start on the Frobenius branch
    const double H1 = detail::conductivity_mode_H(spec.gamma, spec.d, k, eps, rel_tol);
    const double lambda = spec.gamma.jet(1.0).v * H1;
    if (err_est) *err_est = 100.0 * rel_tol;
    return lambda;
}

/// lambda_k[V] = -m_{Q_V}(-(k+nu_d)^2) - nu_d via the half-line Weyl
/// function; equals k - u'(0)/u(0) in the renormalized Jost variables.
inline double dtn_eigenvalue_schrodinger(const HalflinePotential& Q, int d, int k,
                                         double rel_tol = 1e-12, double* err_est = nullptr) {
    if (k < 0) throw NumericError("dtn_eigenvalue_schrodinger: k >= 0 required");
    const double z = k + nu_d(d);
    auto m = weyl_m(Q, z, rel_tol);
    if (err_est) *err_est = m.truncation_estimate;
    return -m.m - nu_d(d);
}

inline double dtn_eigenvalue_schrodinger(const RadialProfile& V, int k, double rel_tol = 1e-12,
                                         double* err_est = nullptr) {
    auto Q = potential_to_halfline(V);
    return dtn_eigenvalue_schrodinger(Q, V.dimension(), k, rel_tol, err_est);
}

/// Exact algebraic map lambda_k[gamma] = a * lambda_k[V] - b.
inline double dtn_from_schrodinger(double lambda_v, double a, double b, int /*k*/) {
    if (!(a > 0.0)) throw NumericError("dtn_from_schrodinger: boundary trace a must be positive");
    return a * lambda_v - b;
}

/// Frechet derivative of the DtN map at gamma = 1 on degree-k harmonics:
/// dPsi_1(h)|_{H_k} = k (2k+d-2) sigma_{k-1}[h]; zero for k = 0.
inline double linearized_dtn(const RadialProfile& h, int k) {
    if (k < 0) throw NumericError("linearized_dtn: k >= 0 required");
    if (k == 0) return 0.0;
    const int d = h.dimension();
    return k * (2.0 * k + d - 2.0) * moment_sigma(h, k - 1);
}

inline int worker_count() {
    if (const char* env = std::getenv("RADIAL_BORN_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Batch spectrum driver. Modes are independent and distributed over
/// `threads` workers (0 = RADIAL_BORN_THREADS or hardware concurrency).
inline DtnSpectrum spectrum(const ConductivitySpec& spec, int k_max,
                            Route route = Route::conductivity_ode, double rel_tol = 1e-12,
                            int threads = 0) {
    if (k_max < 1) throw NumericError("spectrum: k_max >= 1 required");
    if (route == Route::closed_form)
        throw NumericError("spectrum: closed-form is a provenance tag, not a solver route");
    validate(spec);
    DtnSpectrum out;
    out.d = spec.d;
    out.route = route;
    out.lambda.assign(k_max + 1, 0.0);
    out.error_estimate.assign(k_max + 1, 0.0);

    HalflinePotential Q;
    double a = 1.0, b = 0.0;
    if (route == Route::schrodinger_halfline) {
        Q = halfline_from_conductivity(spec);
        a = spec.trace_a();
        b = spec.trace_b();
    }

    auto run_mode = [&](int k) {
        double err = 0.0, lam = 0.0;
        if (route == Route::schrodinger_halfline) {
            if (k == 0) {
                lam = 0.0; // lambda_0[gamma] = 0 for every conductivity
            } else {
                const double lv = dtn_eigenvalue_schrodinger(Q, spec.d, k, rel_tol, &err);
                lam = dtn_from_schrodinger(lv, a, b, k);
                err *= a;
            }
        } else {
            lam = dtn_eigenvalue_conductivity(spec, k, rel_tol, &err);
        }
        out.lambda[k] = lam;
        out.error_estimate[k] = err;
    };

    int nw = threads > 0 ? threads : worker_count();
    nw = std::min(nw, k_max + 1);
    if (nw <= 1) {
        for (int k = 0; k <= k_max; ++k) run_mode(k);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(nw);
        for (int t = 0; t < nw; ++t)
            pool.emplace_back([&, t] {
                try {
                    for (int k = next.fetch_add(1); k <= k_max; k = next.fetch_add(1)) run_mode(k);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return out;
}

/// Radial mode solution f (with f(1)=1) of the conductivity equation,
/// tabulated on [r_lo, 1]: returns log f and H = r f'/f at the requested
/// radii. Used by the exact spectral-difference quadrature.
struct ModeSolution {
    std::vector<double> r;
    std::vector<double> log_f; // normalized so that f(1) = 1
    std::vector<double> H;
};

inline ModeSolution conductivity_mode_solution(const ConductivitySpec& spec, int k,
                                               const std::vector<double>& radii,
                                               double rel_tol = 1e-12) {
    if (k < 1) throw NumericError("mode solution requires k >= 1");
    const int d = spec.d;
    const RadialProfile& gamma = spec.gamma;
    auto w_of = [&](double r) {
        Jet g = gamma.jet(r);
        return r * g.d1 / g.v;
    };
    const double kk = static_cast<double>(k) * (k + d - 2.0);
    // y = (H, log f); d(log f)/dx = H
    auto rhs = [&](double x, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        const double r = std::exp(x);
        dy[0] = kk + (2.0 - d - w_of(r)) * y[0] - y[0] * y[0];
        dy[1] = y[0];
    };
    const double eps = std::min(1e-8, 0.5 * radii.front());
    const double w0 = w_of(eps);
    std::array<double, 2> y0{k - w0 * k / (2.0 * k + d - 2.0 + w0), 0.0};
    std::vector<double> xs;
    xs.reserve(radii.size() + 1);
    for (double r : radii) xs.push_back(std::log(r));
    xs.push_back(0.0);
    auto states = integrate_ode_at<2>(rhs, y0, std::log(eps), xs, rel_tol, 1e-13);
    ModeSolution out;
    out.r = radii;
    const double logf1 = states.back()[1];
    for (std::size_t i = 0; i < radii.size(); ++i) {
        out.log_f.push_back(states[i][1] - logf1);
        out.H.push_back(states[i][0]);
    }
    return out;
}

/// Exact DtN spectral difference
///   lambda_k[g2] - lambda_k[g1] = int_B (g2-g1) grad(u1).grad(u2) dx
/// evaluated by radial quadrature of the two mode solutions. The
/// integrand is one-signed products of small terms, so differences far
/// below eigenvalue solver noise (e.g. ~ s^{2k}) remain fully resolved.
inline double dtn_difference(const ConductivitySpec& g1, const ConductivitySpec& g2, int k,
                             double support_lo, double support_hi, double rel_tol = 1e-11) {
    if (k < 1) return 0.0; // lambda_0 = 0 for both
    const int d = g1.d;
    const double kk = static_cast<double>(k) * (k + d - 2.0);
    // quadrature nodes: composite panels on [support_lo, support_hi]
    const int panels = 48, order = 16;
    std::vector<double> gl_x, gl_w;
    gauss_legendre_16(gl_x, gl_w);
    std::vector<double> radii;
    radii.reserve(panels * order);
    const double lo = std::max(support_lo, 1e-6), hi = support_hi;
    for (int p = 0; p < panels; ++p) {
        const double a = lo + (hi - lo) * p / panels, b = lo + (hi - lo) * (p + 1) / panels;
        for (int i = 0; i < order; ++i) radii.push_back(0.5 * (a + b) + 0.5 * (b - a) * gl_x[i]);
    }
    auto m1 = conductivity_mode_solution(g1, k, radii, rel_tol);
    auto m2 = conductivity_mode_solution(g2, k, radii, rel_tol);
    double total = 0.0;
    std::size_t idx = 0;
    for (int p = 0; p < panels; ++p) {
        const double a = lo + (hi - lo) * p / panels, b = lo + (hi - lo) * (p + 1) / panels;
        for (int i = 0; i < order; ++i, ++idx) {
            const double r = radii[idx];
            const double dg = g2.gamma.jet(r).v - g1.gamma.jet(r).v;
            if (dg == 0.0) continue;
            const double f1f2 = std::exp(m1.log_f[idx] + m2.log_f[idx]);
            // grad(u1).grad(u2) integrated over the sphere:
            // f1' f2' + k(k+d-2) f1 f2 / r^2
            const double val = dg * f1f2 * (m1.H[idx] * m2.H[idx] + kk) / (r * r);
            total += 0.5 * (b - a) * gl_w[i] * val * std::pow(r, d - 1);
        }
    }
    return total;
}

} // namespace rb

#endif
