// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_SPECTRAL_HPP
#define RADIALBORN_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "radialborn/grid.hpp"
#include "radialborn/linalg.hpp"
#include "radialborn/profile.hpp"
#include "radialborn/weyl.hpp"

namespace rb {

/// Spectral summary of the half-line operator H_Q: Jost function at zero,
/// negative-eigenvalue parameters kappa_j (descending), and the
/// zero-resonance flag.
struct SpectralReport {
    double jost_at_zero = 1.0;
    std::vector<double> kappas; // descending, -kappa_j^2 eigenvalues
    bool resonance = false;
    std::vector<double> z_grid;
    std::vector<double> jost_values;
};

/// Dirichlet eigenvalues of H_Q via zeros of the Jost function on (0, z_max]:
/// sign-change scan on a 400-point grid (adaptively refined where |F| is
/// small) followed by bisection to tol.
inline std::vector<double> discrete_spectrum(const HalflinePotential& Q, double z_max,
                                             double tol = 1e-10, int grid_points = 400,
                                             std::vector<double>* zs_out = nullptr,
                                             std::vector<double>* fs_out = nullptr) {
    if (!(z_max > 0)) throw NumericError("discrete_spectrum: z_max must be positive");
    const double z_lo = 1e-4 * z_max;
    std::vector<double> zs, fs;
    for (int i = 0; i < grid_points; ++i) zs.push_back(z_lo + (z_max - z_lo) * i / (grid_points - 1.0));
    fs.resize(zs.size());
    const double scan_tol = 1e-9;
    for (std::size_t i = 0; i < zs.size(); ++i) fs[i] = jost_function(Q, zs[i], scan_tol);
    // refine where |F| is small relative to its scale
    double scale = 0.0;
    for (double f : fs) scale = std::max(scale, std::abs(f));
    std::vector<double> zr, fr;
    for (std::size_t i = 0; i + 1 < zs.size(); ++i) {
        zr.push_back(zs[i]);
        fr.push_back(fs[i]);
        if (std::min(std::abs(fs[i]), std::abs(fs[i + 1])) < 0.1 * scale) {
            const double zm = 0.5 * (zs[i] + zs[i + 1]);
            zr.push_back(zm);
            fr.push_back(jost_function(Q, zm, scan_tol));
        }
    }
    zr.push_back(zs.back());
    fr.push_back(fs.back());

    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < zr.size(); ++i) {
        if (fr[i] == 0.0) {
            roots.push_back(zr[i]);
            continue;
        }
        if (fr[i] * fr[i + 1] < 0.0) {
            double a = zr[i], b = zr[i + 1], fa = fr[i];
            while (b - a > tol) {
                const double m = 0.5 * (a + b);
                const double fm = jost_function(Q, m, 1e-11);
                if (fa * fm <= 0.0) {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
    }
    std::sort(roots.rbegin(), roots.rend()); // descending kappa_1 > ... > kappa_J
    if (zs_out) *zs_out = zr;
    if (fs_out) *fs_out = fr;
    return roots;
}

struct ResonanceResult {
    bool resonance = false;
    double jost_at_zero = 0.0;
    double scale = 1.0;
};

/// Zero-resonance test: |F(0)| < threshold * max(1, sup_{[0,1]} |F|).
inline ResonanceResult detect_zero_resonance(const HalflinePotential& Q,
                                             double threshold = 1e-6) {
    ResonanceResult out;
    out.jost_at_zero = jost_function(Q, 0.0);
    double sup = 1.0;
    for (int i = 0; i <= 16; ++i)
        sup = std::max(sup, std::abs(jost_function(Q, i / 16.0, 1e-9)));
    out.scale = sup;
    out.resonance = std::abs(out.jost_at_zero) < threshold * sup;
    return out;
}

/// Full spectral report for a half-line potential; z_max defaults to
/// nu_d + 1/2 (conductivity-derived spectra live in (0, nu_d)).
inline SpectralReport spectral_report(const HalflinePotential& Q, int d, double z_max = 0.0) {
    SpectralReport rep;
    if (z_max <= 0.0) z_max = nu_d(d) + 0.5;
    if (d == 2) z_max = std::max(z_max, 0.5);
    rep.kappas = discrete_spectrum(Q, z_max, 1e-10, 400, &rep.z_grid, &rep.jost_values);
    auto res = detect_zero_resonance(Q);
    rep.jost_at_zero = res.jost_at_zero;
    rep.resonance = res.resonance;
    return rep;
}

/// Least-squares fit of the near-origin structure
///   gamma^B = -c0 log r + sum_j c_j r^{-2 kappa_j} + (smooth),
/// sampled on [r_min, r_cut]. The log channel is included only when the
/// spectral report flags a zero resonance; kappas closer than 1e-3 are
/// merged. Returns coefficients and the residual regular profile.
inline SingularDecomposition fit_singular_decomposition(const RadialProfile& born,
                                                        const SpectralReport& report,
                                                        double r_min = 1e-3,
                                                        double r_cut = 0.3) {
    const int d = born.dimension();
    std::vector<double> kappas;
    for (double k : report.kappas) {
        if (k <= 0.0 || k >= nu_d(d)) continue;
        if (!kappas.empty() && std::abs(kappas.back() - k) < 1e-3) continue; // merge near-coincident
        kappas.push_back(k);
    }
    const int n_samples = 240;
    std::vector<double> rs(n_samples);
    for (int i = 0; i < n_samples; ++i)
        rs[i] = r_min * std::pow(r_cut / r_min, i / (n_samples - 1.0));

    std::vector<std::function<double(double)>> basis;
    if (report.resonance) basis.emplace_back([](double r) { return -std::log(r); });
    for (double k : kappas) basis.emplace_back([k](double r) { return std::pow(r, -2.0 * k); });
    basis.emplace_back([](double) { return 1.0; });
    basis.emplace_back([](double r) { return r; });
    basis.emplace_back([](double r) { return r * r; });

    Matrix A(n_samples, basis.size());
    std::vector<double> rhs(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        for (std::size_t j = 0; j < basis.size(); ++j) A(i, j) = basis[j](rs[i]);
        rhs[i] = born.jet(rs[i]).v;
    }
    // column scaling keeps the conditioning estimate meaningful
    std::vector<double> scale(basis.size(), 0.0);
    for (std::size_t j = 0; j < basis.size(); ++j) {
        double n2 = 0.0;
        for (int i = 0; i < n_samples; ++i) n2 += A(i, j) * A(i, j);
        scale[j] = std::sqrt(n2);
        for (int i = 0; i < n_samples; ++i) A(i, j) /= scale[j];
    }
    auto fit = least_squares(A, rhs);

    SingularDecomposition out;
    out.fit_residual = fit.residual_norm / std::sqrt(static_cast<double>(n_samples));
    out.conditioning_warning = fit.condition > 1e10;
    std::size_t idx = 0;
    if (report.resonance) out.c0 = fit.x[idx] / scale[idx], ++idx;
    for (double k : kappas) {
        double c = fit.x[idx] / scale[idx];
        ++idx;
        // c_j >= 0 up to fit noise; clamp small negatives
        if (c < 0.0 && c > -100.0 * out.fit_residual - 1e-12) c = 0.0;
        out.terms.emplace_back(k, c);
    }
    std::sort(out.terms.begin(), out.terms.end()); // kappa ascending
    // regular remainder on the default grid
    std::vector<PowerTerm> sing;
    if (report.resonance) sing.push_back({-out.c0, 0.0, true});
    for (auto& [k, c] : out.terms) sing.push_back({c, -2.0 * k, false});
    RadialProfile singular(d, sing);
    auto grid = default_grid(1024);
    std::vector<double> reg(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        reg[i] = born.jet(grid[i]).v - singular.jet(grid[i]).v;
    out.regular = RadialProfile::sampled(d, grid, reg);
    return out;
}

} // namespace rb

#endif
