// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_BORN_HPP
#define RADIALBORN_BORN_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "radialborn/calculus.hpp"
#include "radialborn/forward.hpp"
#include "radialborn/linalg.hpp"

namespace rb {

/// Moments sigma_k[gamma^B], k = 0..K-1, from the spectrum. Uses the
/// proof-consistent indexing
///   lambda_k = k (2k+d-2) sigma_{k-1}[gamma^B]  (k >= 1),
/// i.e. sigma_k = lambda_{k+1} / (2(k+1)(k+1+nu_d)).
inline std::vector<double> born_moments(const DtnSpectrum& s) {
    if (s.k_max() < 2) throw NumericError("born_moments: need a spectrum with K >= 2");
    const double nd = nu_d(s.d);
    std::vector<double> out(s.k_max());
    for (int k = 0; k + 1 <= s.k_max(); ++k)
        out[k] = s.lambda[k + 1] / (2.0 * (k + 1) * (k + 1 + nd));
    return out;
}

/// The as-published indexing of the same moment problem (kept for
/// side-by-side reporting; inconsistent with the constant conductivity).
inline std::vector<double> born_moments_display_indexing(const DtnSpectrum& s) {
    const double nd = nu_d(s.d);
    std::vector<double> out(s.k_max() + 1);
    for (int k = 0; k <= s.k_max(); ++k)
        out[k] = s.lambda[k] / (2.0 * (k + 1) * (k + 1 + nd));
    return out;
}

/// Moments of the potential-side Born approximation: sigma_k[v^B] =
/// lambda_k[V] - k.
inline std::vector<double> vb_moments(const std::vector<double>& lambda_v) {
    std::vector<double> out(lambda_v.size());
    for (std::size_t k = 0; k < lambda_v.size(); ++k) out[k] = lambda_v[k] - static_cast<double>(k);
    return out;
}

struct FourierValue {
    double value = 0.0;
    double tail_estimate = 0.0;
    double cancellation_noise = 0.0;
};

/// Fourier transform of gamma^B at radial frequency rho, directly from
/// the spectrum:
///   g(rho) = pi^{d/2} sum_{k>=1} (-1)^{k-1}/(k! Gamma(k+d/2))
///            (rho/2)^{2k-2} lambda_k.
/// Accumulated in extended precision; throws TruncationError when the
/// series tail past K is above tail_tol.
inline FourierValue born_fourier(const DtnSpectrum& s, double rho, double tail_tol = 1e-6) {
    if (rho < 0.0) throw NumericError("born_fourier: rho >= 0 required");
    const int K = s.k_max();
    const double halfd = 0.5 * s.d;
    const long double w2 = 0.25L * rho * rho;
    long double coeff = 1.0L / std::tgamma(1.0 + halfd); // 1/(1! Gamma(1+d/2))
    long double sum = 0.0L, max_term = 0.0L;
    for (int k = 1; k <= K; ++k) {
        const long double term = coeff * static_cast<long double>(s.lambda[k]);
        sum += (k % 2 == 1) ? term : -term;
        max_term = std::max(max_term, std::abs(term));
        coeff *= w2 / ((k + 1.0L) * (k + halfd));
    }
    // coeff now corresponds to k = K+1; extrapolate lambda linearly
    const long double growth = s.lambda[K] > 0 ? s.lambda[K] * (K + 1.0L) / K : 1.0L;
    long double tail = coeff * std::abs(growth);
    const long double ratio = w2 / ((K + 2.0L) * (K + 1.0L + halfd));
    if (ratio < 1.0L) tail /= (1.0L - ratio);
    FourierValue out;
    const double front = std::pow(pi, halfd);
    out.value = front * static_cast<double>(sum);
    out.tail_estimate = front * static_cast<double>(tail);
    out.cancellation_noise = front * static_cast<double>(max_term) * 1.1e-19;
    if (out.tail_estimate > tail_tol)
        throw TruncationError("born_fourier: series tail above tolerance at rho=" +
                              std::to_string(rho));
    return out;
}

/// A-amplitude from the potential-side Born approximation:
/// A(t) = e^{-2t} v^B(e^{-t})  (the |x|^2 weight of v^B = |x|^{-2} A).
inline std::function<double(double)> amplitude_from_born(const RadialProfile& vb) {
    return [vb](double t) {
        // beyond t ~ 300 the r^{+-2} factors leave double range
        if (t > 300.0) t = 300.0;
        const double r = std::exp(-t);
        return r * r * vb.jet(r).v;
    };
}

struct TraceEstimate {
    double a = 1.0;
    double b = 0.0;
};

/// Boundary traces from the spectrum asymptotics lambda_k ~ a k - b + o(1),
/// fitted with 1/k corrections over the top half of the modes.
inline TraceEstimate estimate_traces(const DtnSpectrum& s) {
    const int K = s.k_max();
    if (K < 4) throw NumericError("estimate_traces: need K >= 4");
    const int k_lo = std::max(2, K / 2);
    const int rows = K - k_lo + 1;
    const int n_extra = rows >= 8 ? 3 : (rows >= 5 ? 1 : 0);
    const int cols = 2 + n_extra;
    Matrix A(rows, cols);
    std::vector<double> rhs(rows), scale(cols, 0.0);
    for (int i = 0; i < rows; ++i) {
        const double k = k_lo + i;
        A(i, 0) = k;
        A(i, 1) = 1.0;
        for (int j = 0; j < n_extra; ++j) A(i, 2 + j) = std::pow(k, -1.0 - j);
        rhs[i] = s.lambda[k_lo + i];
    }
    for (int j = 0; j < cols; ++j) {
        double n2 = 0.0;
        for (int i = 0; i < rows; ++i) n2 += A(i, j) * A(i, j);
        scale[j] = std::sqrt(n2);
        for (int i = 0; i < rows; ++i) A(i, j) /= scale[j];
    }
    auto fit = least_squares(A, rhs);
    return {fit.x[0] / scale[0], -fit.x[1] / scale[1]};
}

/// Reconstruction options for born_profile.
struct BornOptions {
    std::string method = "fourier"; // "fourier" | "moments"
    double P = 30.0;                // inverse-transform frequency cutoff
    int grid_n = 2048;
    std::optional<TraceEstimate> traces; // ground-truth a,b when available
    std::vector<double> kappas;          // known Jost zeros (singular exponents)
    std::optional<bool> resonance;       // known zero-resonance flag
    double moment_noise = 0.0;           // per-moment noise for the discrepancy rule
};

/// Reconstructed Born approximation with its companion potential profile.
struct BornApproximation {
    int d = 3;
    RadialProfile gammaB = RadialProfile::constant(3, 1.0);
    RadialProfile vB = RadialProfile::constant(3, 0.0);
    int K = 0;
    std::string method = "fourier";
    double a = 1.0, b = 0.0;
    double moment_fit_residual = 0.0;
    double cutoff_P = 0.0;
    bool accuracy_warning = false;

    /// Reconstruction confidence column for CSV output; the region
    /// r < 0.02 is flagged low-confidence.
    double confidence(double r) const { return r < 0.02 ? 0.2 : 1.0; }
};

namespace detail {

struct MomentBasis {
    std::vector<double> exponents; // v-side power exponents q (v = r^q)
    std::vector<bool> singular;

    /// sigma_k of r^q in dimension d.
    static double moment(double q, int k, int d) { return 1.0 / (2.0 * k + q + d); }
};

inline MomentBasis make_basis(int d, const BornOptions& opt) {
    MomentBasis b;
    const bool auto_detect = !opt.resonance.has_value();
    if (d >= 3 && (auto_detect || *opt.resonance)) {
        b.exponents.push_back(-2.0); // zero-resonance / log-term channel
        b.singular.push_back(true);
    }
    for (double kappa : opt.kappas) {
        if (kappa <= 0.0 || kappa >= nu_d(d)) continue;
        b.exponents.push_back(-2.0 * kappa - 2.0);
        b.singular.push_back(true);
    }
    for (double beta : {1.0, 1.5, 2.0, 2.5, 3.0, 4.0}) {
        b.exponents.push_back(2.0 * beta - 2.0);
        b.singular.push_back(false);
    }
    return b;
}

/// Least-squares fit of the moment sequence on the power basis; singular
/// columns are dropped when insignificant against the fit residual.
struct MomentFit {
    std::vector<double> exponents;
    std::vector<double> coeffs;
    std::vector<double> residual; // tau_k
    double residual_norm = 0.0;
    double trace_a_correction = 0.0;
    double trace_b_correction = 0.0;
};

/// One augmented solve: model columns plus the moment-space signatures of
/// boundary-trace perturbations,
///   d sigma_k / da = -(k + sigma_k)/a ,  d sigma_k / db = 1/a ,
/// so errors in the estimated (a, b) are absorbed into trace corrections
/// instead of leaking into the ill-conditioned power coefficients.
inline MomentFit fit_moments(const std::vector<double>& sigma, int d, MomentBasis basis,
                             double reg, double a_trace, bool correct_traces) {
    const int K = static_cast<int>(sigma.size()) - 1;
    const std::size_t extra = correct_traces ? 2 : 0;
    auto solve = [&](const MomentBasis& bs) {
        const std::size_t n = bs.exponents.size();
        Matrix A(K + 1, n + extra);
        std::vector<double> rhs(sigma);
        std::vector<double> scale(n + extra, 1.0);
        for (int k = 0; k <= K; ++k) {
            for (std::size_t j = 0; j < n; ++j) A(k, j) = MomentBasis::moment(bs.exponents[j], k, d);
            if (correct_traces) {
                A(k, n) = -(k + sigma[k]) / a_trace;
                A(k, n + 1) = 1.0 / a_trace;
            }
        }
        for (std::size_t j = 0; j < n + extra; ++j) {
            double n2 = 0.0;
            for (int k = 0; k <= K; ++k) n2 += A(k, j) * A(k, j);
            scale[j] = std::sqrt(n2);
            for (int k = 0; k <= K; ++k) A(k, j) /= scale[j];
        }
        auto fit = least_squares(A, rhs, reg);
        for (std::size_t j = 0; j < n + extra; ++j) fit.x[j] /= scale[j];
        return fit;
    };
    auto fit = solve(basis);
    // significance prune on singular channels (their columns peak at k=0)
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t j = 0; j < basis.exponents.size(); ++j) {
            if (!basis.singular[j]) continue;
            const double col0 = MomentBasis::moment(basis.exponents[j], 0, d);
            const double contribution = std::abs(fit.x[j]) * col0;
            if (contribution < std::max(1e-8, 3.0 * fit.residual_norm / std::sqrt(K + 1.0))) {
                basis.exponents.erase(basis.exponents.begin() + j);
                basis.singular.erase(basis.singular.begin() + j);
                fit = solve(basis);
                changed = true;
                break;
            }
        }
    }
    MomentFit out;
    out.exponents = basis.exponents;
    out.coeffs.assign(fit.x.begin(), fit.x.begin() + basis.exponents.size());
    if (correct_traces) {
        out.trace_a_correction = fit.x[basis.exponents.size()];
        out.trace_b_correction = fit.x[basis.exponents.size() + 1];
    }
    out.residual.assign(K + 1, 0.0);
    for (int k = 0; k <= K; ++k) {
        double model = 0.0;
        for (std::size_t j = 0; j < basis.exponents.size(); ++j)
            model += out.coeffs[j] * MomentBasis::moment(basis.exponents[j], k, d);
        if (correct_traces) {
            model += out.trace_a_correction * (-(k + sigma[k]) / a_trace);
            model += out.trace_b_correction / a_trace;
        }
        out.residual[k] = sigma[k] - model;
    }
    out.residual_norm = fit.residual_norm;
    return out;
}

/// Fourier series of a moment-residual sequence (transform of the
/// function whose sigma-moments are tau), evaluated in long double:
///   F(rho) = 2 pi^{d/2} sum_k (-1)^k (rho/2)^{2k} tau_k / (k! Gamma(k+d/2)).
/// The noise output is max_k |c_k(rho)| * noise_per_tau: the alternating
/// coefficients blow up like e^rho, so per-moment data noise (double
/// roundoff of the lambda pipeline, solver error estimates) is what limits
/// the usable frequency range, not the extended-precision accumulation.
inline double residual_transform(const std::vector<double>& tau, int d, double rho,
                                 double noise_per_tau = 0.0, double* noise = nullptr) {
    const double halfd = 0.5 * d;
    const long double w2 = 0.25L * rho * rho;
    long double coeff = 1.0L / std::tgamma(halfd);
    long double sum = 0.0L, max_coeff = 0.0L;
    for (std::size_t k = 0; k < tau.size(); ++k) {
        const long double term = coeff * static_cast<long double>(tau[k]);
        sum += (k % 2 == 0) ? term : -term;
        max_coeff = std::max(max_coeff, coeff);
        coeff *= w2 / ((k + 1.0L) * (k + halfd));
    }
    if (noise)
        *noise = static_cast<double>(max_coeff) * noise_per_tau * 2.0 * std::pow(pi, halfd);
    return 2.0 * std::pow(pi, halfd) * static_cast<double>(sum);
}

/// Inverse radial Fourier transform of F over [0,P] at radius r:
///   (2pi)^{-d/2} r^{1-d/2} int_0^P F(rho) J_{d/2-1}(r rho) rho^{d/2} drho,
/// with F pre-tabulated on composite Gauss-Legendre panels.
class InverseRadialTransform {
public:
    InverseRadialTransform(int d, double P, const std::function<double(double)>& F)
        : d_(d), nu_(0.5 * d - 1.0) {
        std::vector<double> gx, gw;
        gauss_legendre_16(gx, gw);
        const int panels = std::max(8, static_cast<int>(std::ceil(P / 1.5)));
        // cos^2 taper over the top 40% of the band turns the hard cutoff
        // into local smoothing instead of ringing at small r
        auto window = [&](double rho) {
            const double edge = 0.6 * P;
            if (rho <= edge) return 1.0;
            const double u = (rho - edge) / (P - edge);
            const double c = std::cos(0.5 * pi * u);
            return c * c;
        };
        for (int p = 0; p < panels; ++p) {
            const double a = P * p / panels, bnd = P * (p + 1) / panels;
            for (int i = 0; i < 16; ++i) {
                const double rho = 0.5 * (a + bnd) + 0.5 * (bnd - a) * gx[i];
                nodes_.push_back(rho);
                weights_.push_back(0.5 * (bnd - a) * gw[i] * F(rho) * window(rho));
            }
        }
    }

    double operator()(double r) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const double x = r * nodes_[i];
            const double kernel = (d_ == 3) ? (x > 1e-8 ? std::sin(x) / x : 1.0)
                                            : std::cyl_bessel_j(nu_, x);
            // d=3 kernel written via sin to avoid half-integer Bessel cost;
            // J_{1/2}(x) rho^{3/2} r^{-1/2} == sqrt(2/pi) sin(x) rho / r
            acc += weights_[i] * kernel * kernel_weight(nodes_[i]);
        }
        return std::pow(2.0 * pi, -0.5 * d_) * (d_ == 3 ? std::sqrt(2.0 / pi) : 1.0) *
               std::pow(r, d_ == 3 ? 0.0 : 1.0 - 0.5 * d_) * acc;
    }

private:
    double kernel_weight(double rho) const {
        return d_ == 3 ? rho * rho : std::pow(rho, 0.5 * d_);
    }

    int d_;
    double nu_;
    std::vector<double> nodes_, weights_;
};

} // namespace detail

/// Reconstructs gamma^B (and v^B) from a DtN spectrum.
///
/// Route "fourier": boundary traces from the spectrum asymptotics, a
/// power-basis fit of the v^B moment sequence (the analytic part of the
/// inverse transform: background + boundary jet + declared singular
/// channels), and an oscillatory inverse radial Fourier transform of the
/// moment residual. gamma^B = a (1 - 2 T_d v^B).
///
/// Route "moments": Tikhonov-regularized power/log-basis solve of the
/// Hausdorff moment problem with the regularization weight chosen by the
/// discrepancy principle; no Fourier step.
inline BornApproximation born_profile(const DtnSpectrum& s, BornOptions opt = {}) {
    const int K = s.k_max();
    const int d = s.d;
    if (K < 2) throw NumericError("born_profile: need K >= 2 modes");
    BornApproximation out;
    out.d = d;
    out.K = K;
    out.method = opt.method;
    out.accuracy_warning = K < 20;

    if (opt.method != "fourier" && opt.method != "moments")
        throw NumericError("born_profile: unknown method '" + opt.method + "'");
    TraceEstimate tr;
    if (opt.traces) {
        tr = *opt.traces;
    } else if (K >= 4) {
        tr = estimate_traces(s);
    } else {
        // too short for the asymptotic fit; crude slope/intercept
        tr.a = s.lambda[K] - s.lambda[K - 1];
        tr.b = tr.a * K - s.lambda[K];
    }
    double a = tr.a, b = tr.b;
    if (!(a > 0.0)) throw NumericError("born_profile: estimated boundary trace a <= 0");

    // potential-side moment data: lambda_k = a k - b + a sigma_k[v^B]
    auto compute_sigma = [&](double aa, double bb) {
        std::vector<double> sig(K + 1);
        sig[0] = bb / aa;
        for (int k = 1; k <= K; ++k) sig[k] = (s.lambda[k] - aa * k + bb) / aa;
        return sig;
    };

    detail::MomentBasis basis = detail::make_basis(d, opt);
    if (opt.method == "moments")
        for (double beta : {3.5, 5.0, 6.0}) {
            basis.exponents.push_back(2.0 * beta - 2.0);
            basis.singular.push_back(false);
        }
    // short spectra cannot support the full basis (plus two trace columns)
    while (basis.exponents.size() + 2 > static_cast<std::size_t>(K) + 1 &&
           basis.exponents.size() > 1) {
        basis.exponents.pop_back();
        basis.singular.pop_back();
    }

    // refine the trace estimates jointly with the model unless ground
    // truth was supplied
    const bool refine = !opt.traces.has_value();
    std::vector<double> sigma;
    if (refine) {
        for (int it = 0; it < 4; ++it) {
            sigma = compute_sigma(a, b);
            auto joint = detail::fit_moments(sigma, d, basis, 0.0, a, true);
            a -= joint.trace_a_correction;
            b -= joint.trace_b_correction;
            if (std::abs(joint.trace_a_correction) + std::abs(joint.trace_b_correction) <
                1e-13 * (std::abs(a) + std::abs(b) + 1.0))
                break;
        }
    }
    out.a = a;
    out.b = b;
    sigma = compute_sigma(a, b);

    detail::MomentFit fit;
    if (opt.method == "moments") {
        // Tikhonov weight by the discrepancy principle
        const double noise = opt.moment_noise > 0 ? opt.moment_noise : 1e-10;
        double reg = 1e-14;
        fit = detail::fit_moments(sigma, d, basis, reg, a, false);
        while (fit.residual_norm < noise * std::sqrt(K + 1.0) && reg < 1e-2) {
            reg *= 10.0;
            auto next = detail::fit_moments(sigma, d, basis, reg, a, false);
            if (next.residual_norm > 10.0 * noise * std::sqrt(K + 1.0)) break;
            fit = next;
        }
    } else {
        fit = detail::fit_moments(sigma, d, basis, 0.0, a, false);
    }
    out.moment_fit_residual = fit.residual_norm;

    // v^B = model powers + (fourier route only) inverse transform of the
    // moment residual
    std::vector<PowerTerm> vterms;
    for (std::size_t j = 0; j < fit.exponents.size(); ++j)
        vterms.push_back({fit.coeffs[j], fit.exponents[j], false});
    FnPtr vres;
    double max_tau = 0.0, sigma_scale = 0.0;
    for (double t : fit.residual) max_tau = std::max(max_tau, std::abs(t));
    for (double t : sigma) sigma_scale = std::max(sigma_scale, std::abs(t));
    // per-moment noise floor: double roundoff of lambda_k - a k, plus the
    // solver's own per-mode error estimates
    double err_mean = 0.0;
    for (int k = 1; k <= K; ++k) err_mean += std::abs(s.error_estimate[k]);
    err_mean /= K;
    const double noise_per_tau =
        std::max({2.2e-16 * a * K, 2.2e-16 * sigma_scale, err_mean / a});
    const bool residual_significant =
        max_tau > std::max(1e-11 * std::max(1.0, sigma_scale), 30.0 * noise_per_tau);
    if (opt.method == "fourier" && residual_significant) {
        // noise-limited cutoff: stop where amplified data noise reaches
        // the scale of the transform
        double P = opt.P;
        double vmax = 0.0;
        for (double rho = 2.0; rho <= opt.P; rho += 1.0) {
            double noise = 0.0;
            const double v =
                detail::residual_transform(fit.residual, d, rho, noise_per_tau, &noise);
            vmax = std::max(vmax, std::abs(v));
            if (noise > 1e-5 * std::max(1.0, vmax)) {
                P = rho;
                break;
            }
        }
        auto F = [&](double rho) { return detail::residual_transform(fit.residual, d, rho); };
        detail::InverseRadialTransform inv(d, P, F);
        auto grid = default_grid(opt.grid_n);
        std::vector<double> vals(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = inv(grid[i]);
        vres = std::make_shared<fn::Sampled>(CubicSpline(grid, vals));
        out.cutoff_P = P;
    }
    RadialProfile vB(d, vterms, vres);

    // gamma^B = a - 2a T_d(v^B); traces are then a and a*sigma_0 = b by
    // construction
    RadialProfile td = apply_Td(vB, opt.grid_n);
    RadialProfile gammaB = add_profiles(RadialProfile::constant(d, a),
                                        scale_profile(td, -2.0 * a));
    out.gammaB = gammaB;
    out.vB = vB;
    return out;
}

/// Residual report for the structural identity
///   lambda_k = a(gamma) k - b(gamma) + (1/2) sigma_k[Delta gamma^B]
///            = a(gamma) k - b(gamma) + a(gamma) sigma_k[v^B]
/// and the shared boundary traces. (The 1/2 is forced by the moment
/// recursion applied to gamma^B together with Delta gamma^B = 2 a v^B;
/// the constant-conductivity and explicit-family values pin it.)
struct IdentityReport {
    double max_identity_residual = 0.0;
    double trace_a_residual = 0.0;
    double trace_b_residual = 0.0;
    std::vector<double> per_k;
};

inline IdentityReport verify_identity(const ConductivitySpec& spec, const BornApproximation& born,
                                      const DtnSpectrum& s) {
    if (spec.d != born.d || spec.d != s.d)
        throw NumericError("verify_identity: dimension mismatch");
    IdentityReport rep;
    const double a = spec.trace_a(), b = spec.trace_b();
    const int k_hi = s.k_max() / 2;
    for (int k = 1; k <= k_hi; ++k) {
        const double sk = born.a * moment_sigma(born.vB, k, 1e-13);
        const double resid = std::abs(s.lambda[k] - (a * k - b + sk));
        rep.per_k.push_back(resid);
        rep.max_identity_residual = std::max(rep.max_identity_residual, resid);
    }
    rep.trace_a_residual = std::abs(born.gammaB.trace_a() - a);
    rep.trace_b_residual = std::abs(born.gammaB.trace_b() - b);
    return rep;
}

} // namespace rb

#endif
