// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_OPTIM_HPP
#define RADIALBORN_OPTIM_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "radialborn/linalg.hpp"

namespace rb {

struct OptimResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    int evaluations = 0;
    bool converged = false;
};

struct TrustRegionOptions {
    int budget = 500;
    double initial_radius = 0.25;
    double min_radius = 1e-10;
    std::vector<double> lower, upper; // optional box
};

/// Derivative-free trust-region minimizer for a handful of parameters:
/// interpolates a quadratic model on recently sampled points, minimizes it
/// in a ball via eigenvalue-shifted Newton steps, and adapts the radius by
/// the usual actual/predicted decrease ratio. Box constraints are applied
/// by clipping.
class TrustRegionMinimizer {
public:
    using Options = TrustRegionOptions;

    explicit TrustRegionMinimizer(Options opt = Options()) : opt_(std::move(opt)) {}

    OptimResult minimize(const std::function<double(const std::vector<double>&)>& f,
                         std::vector<double> x0) {
        const std::size_t n = x0.size();
        evals_ = 0;
        auto clip = [&](std::vector<double> x) {
            for (std::size_t i = 0; i < n; ++i) {
                if (i < opt_.lower.size()) x[i] = std::max(x[i], opt_.lower[i]);
                if (i < opt_.upper.size()) x[i] = std::min(x[i], opt_.upper[i]);
            }
            return x;
        };
        auto eval = [&](const std::vector<double>& x) {
            ++evals_;
            const double v = f(x);
            return std::isfinite(v) ? v : 1e30;
        };

        std::vector<std::vector<double>> pts;
        std::vector<double> vals;
        auto push = [&](std::vector<double> x) {
            x = clip(std::move(x));
            vals.push_back(eval(x));
            pts.push_back(std::move(x));
        };
        push(x0);
        double radius = opt_.initial_radius;
        for (std::size_t i = 0; i < n; ++i) {
            auto xp = x0, xm = x0;
            xp[i] += radius;
            xm[i] -= radius;
            push(xp);
            push(xm);
        }

        std::size_t best = best_index(vals);
        while (evals_ < opt_.budget && radius > opt_.min_radius) {
            const auto& xb = pts[best];
            std::vector<double> step = model_step(pts, vals, xb, radius, n);
            std::vector<double> xt(n);
            for (std::size_t i = 0; i < n; ++i) xt[i] = xb[i] + step[i];
            xt = clip(std::move(xt));
            double predicted = vals[best] - model_value_;
            const double vt = eval(xt);
            pts.push_back(xt);
            vals.push_back(vt);
            const double actual = vals[best] - vt;
            if (actual > 0.0 && (predicted <= 0.0 || actual > 0.1 * predicted)) {
                best = vals.size() - 1;
                if (actual > 0.7 * std::max(predicted, 0.0)) radius = std::min(radius * 1.8, 1e3);
            } else {
                radius *= 0.45;
            }
            // keep the sample set local and bounded
            if (pts.size() > 6 * n + 12) prune(pts, vals, best, radius, n);
            best = best_index(vals);
        }
        OptimResult out;
        out.x = pts[best];
        out.value = vals[best];
        out.evaluations = evals_;
        out.converged = radius <= std::max(opt_.min_radius, 1e-9);
        return out;
    }

private:
    static std::size_t best_index(const std::vector<double>& vals) {
        std::size_t b = 0;
        for (std::size_t i = 1; i < vals.size(); ++i)
            if (vals[i] < vals[b]) b = i;
        return b;
    }

    void prune(std::vector<std::vector<double>>& pts, std::vector<double>& vals, std::size_t best,
               double radius, std::size_t n) {
        std::vector<std::pair<double, std::size_t>> order;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double d2 = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                d2 += (pts[i][j] - pts[best][j]) * (pts[i][j] - pts[best][j]);
            order.emplace_back(i == best ? -1.0 : d2 / (radius * radius), i);
        }
        std::sort(order.begin(), order.end());
        std::vector<std::vector<double>> np;
        std::vector<double> nv;
        for (std::size_t i = 0; i < std::min<std::size_t>(4 * n + 8, order.size()); ++i) {
            np.push_back(pts[order[i].second]);
            nv.push_back(vals[order[i].second]);
        }
        pts = std::move(np);
        vals = std::move(nv);
    }

    /// Weighted LSQ quadratic model around xb; returns the trust-region
    /// step and stores the predicted model value.
    std::vector<double> model_step(const std::vector<std::vector<double>>& pts,
                                   const std::vector<double>& vals, const std::vector<double>& xb,
                                   double radius, std::size_t n) {
        const std::size_t full = (n + 1) * (n + 2) / 2;
        const bool use_full = pts.size() >= full + 2;
        const std::size_t cols = use_full ? full : 2 * n + 1;
        Matrix A(pts.size(), cols);
        std::vector<double> rhs(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::vector<double> s(n);
            double d2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                s[j] = (pts[i][j] - xb[j]) / radius;
                d2 += s[j] * s[j];
            }
            const double w = 1.0 / (1.0 + d2);
            std::size_t c = 0;
            A(i, c++) = w;
            for (std::size_t j = 0; j < n; ++j) A(i, c++) = w * s[j];
            for (std::size_t j = 0; j < n; ++j) A(i, c++) = w * 0.5 * s[j] * s[j];
            if (use_full)
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t l = j + 1; l < n; ++l) A(i, c++) = w * s[j] * s[l];
            rhs[i] = w * vals[i];
        }
        std::vector<double> coef;
        try {
            coef = least_squares(A, rhs, 1e-10).x;
        } catch (const NumericError&) {
            coef.assign(cols, 0.0);
        }
        // assemble gradient and Hessian in scaled coordinates
        std::vector<double> g(n);
        Matrix H(n, n);
        std::size_t c = 1;
        for (std::size_t j = 0; j < n; ++j) g[j] = coef[c++];
        for (std::size_t j = 0; j < n; ++j) H(j, j) = coef[c++];
        if (use_full)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t l = j + 1; l < n; ++l) {
                    H(j, l) = coef[c];
                    H(l, j) = coef[c];
                    ++c;
                }
        // shift H until positive definite and the Newton step fits the ball
        Matrix V;
        auto ev = symmetric_eigen(H, &V);
        double ev_min = ev[0];
        for (double e : ev) ev_min = std::min(ev_min, e);
        double shift = ev_min < 1e-8 ? 1e-8 - ev_min : 0.0;
        std::vector<double> step(n);
        for (int iter = 0; iter < 60; ++iter) {
            // s = -V (L + shift)^{-1} V^T g
            std::vector<double> vg(n, 0.0);
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t i = 0; i < n; ++i) vg[j] += V(i, j) * g[i];
            double norm2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                vg[j] /= (ev[j] + shift);
                norm2 += vg[j] * vg[j];
            }
            if (norm2 <= 1.0 || iter == 59) {
                for (std::size_t i = 0; i < n; ++i) {
                    step[i] = 0.0;
                    for (std::size_t j = 0; j < n; ++j) step[i] -= V(i, j) * vg[j];
                }
                break;
            }
            shift = 2.0 * shift + 1e-8;
        }
        // predicted value at the step
        model_value_ = coef[0];
        for (std::size_t j = 0; j < n; ++j) model_value_ += g[j] * step[j];
        for (std::size_t j = 0; j < n; ++j) model_value_ += 0.5 * H(j, j) * step[j] * step[j];
        if (use_full)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t l = j + 1; l < n; ++l)
                    model_value_ += H(j, l) * step[j] * step[l];
        for (auto& s : step) s *= radius; // back to unscaled coordinates
        return step;
    }

    Options opt_;
    int evals_ = 0;
    double model_value_ = 0.0;
};

} // namespace rb

#endif
