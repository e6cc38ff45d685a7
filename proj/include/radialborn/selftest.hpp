// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_SELFTEST_HPP
#define RADIALBORN_SELFTEST_HPP

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "radialborn/inverse.hpp"
#include "radialborn/spectral.hpp"

namespace rb::selftest {

struct CriterionResult {
    std::string id;
    std::string description;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

namespace detail {

inline double family_lambda_closed(int d, double mu, double nu, int k) {
    if (k == 0) return 0.0;
    const double nd = nu_d(d);
    if (nu > 0.0) return k + k * (mu * mu - nu * nu) / ((nu + nd) * (k + nu + nd));
    return k + k * mu * mu / (nd * (k + nd));
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

} // namespace detail

/// The acceptance suite: every tolerance below is pinned from the
/// criteria this artifact ships against. Runs in a few tens of seconds
/// on one core.
inline std::vector<CriterionResult> run_acceptance(int threads = 0) {
    using detail::fmt;
    std::vector<CriterionResult> results;
    const std::vector<std::tuple<int, double, double>> family_cases = {
        {2, 1.0, 3.0}, {3, 1.0, 3.0}, {2, 3.0, 1.0}, {3, 3.0, 1.0}, {3, 1.0, 0.0}};

    // C1: constant conductivity, both routes, k <= 100, |err| < 1e-9, < 5 s
    {
        detail::Timer timer;
        ConductivitySpec one{3, RadialProfile::constant(3, 1.0), 2.0, 10.0,
                             std::numeric_limits<double>::infinity(), {}};
        double max_err = 0.0;
        auto sc = spectrum(one, 100, Route::conductivity_ode, 1e-12, threads);
        auto ss = spectrum(one, 100, Route::schrodinger_halfline, 1e-12, threads);
        for (int k = 0; k <= 100; ++k) {
            max_err = std::max(max_err, std::abs(sc.lambda[k] - k));
            max_err = std::max(max_err, std::abs(ss.lambda[k] - k));
        }
        const double secs = timer.elapsed();
        CriterionResult r{"C01", "constant conductivity lambda_k = k, k <= 100, both routes", false,
                          "", secs};
        r.pass = max_err < 1e-9 && secs < 5.0;
        r.detail = "max|lambda_k - k| = " + fmt(max_err) + ", " + fmt(secs) + " s";
        results.push_back(r);
    }

    // C2: route equivalence within 1e-7 and closed-form match within 1e-6
    // relative for the five family cases, k <= 50
    {
        detail::Timer timer;
        double max_gap = 0.0, max_rel = 0.0;
        for (auto [d, mu, nu] : family_cases) {
            auto fam = example_family(d, mu, nu);
            auto sc = spectrum(fam.spec, 50, Route::conductivity_ode, 1e-12, threads);
            auto ss = spectrum(fam.spec, 50, Route::schrodinger_halfline, 1e-12, threads);
            for (int k = 0; k <= 50; ++k) {
                max_gap = std::max(max_gap, std::abs(sc.lambda[k] - ss.lambda[k]));
                if (nu > 0.0 && k >= 1) {
                    const double exact = detail::family_lambda_closed(d, mu, nu, k);
                    max_rel = std::max({max_rel, std::abs(sc.lambda[k] - exact) / std::abs(exact),
                                        std::abs(ss.lambda[k] - exact) / std::abs(exact)});
                }
            }
        }
        CriterionResult r{"C02", "route equivalence and derived closed-form spectrum", false, "",
                          timer.elapsed()};
        r.pass = max_gap < 1e-7 && max_rel < 1e-6;
        r.detail = "max route gap = " + fmt(max_gap) + ", max rel vs closed form = " + fmt(max_rel);
        results.push_back(r);
    }

    // C3 + C5: Born reconstruction from K = 200 modes (< 1e-3 relative on
    // [0.05, 1], < 60 s per case) and the trace identities
    std::vector<BornApproximation> reconstructions;
    {
        detail::Timer timer;
        double max_rel = 0.0, worst_case_secs = 0.0;
        double rec_trace_a = 0.0, rec_trace_b = 0.0;
        for (auto [d, mu, nu] : family_cases) {
            if (nu <= 0.0) continue;
            detail::Timer case_timer;
            auto fam = example_family(d, mu, nu);
            auto sp = spectrum(fam.spec, 200, Route::conductivity_ode, 1e-12, threads);
            auto born = born_profile(sp);
            for (double r = 0.05; r <= 1.0; r += 1.0 / 256.0) {
                const double expected = fam.born.eval(r);
                max_rel = std::max(max_rel,
                                   std::abs(born.gammaB.eval(r) - expected) / std::abs(expected));
            }
            rec_trace_a = std::max(rec_trace_a,
                                   std::abs(born.gammaB.trace_a() - fam.spec.trace_a()));
            rec_trace_b = std::max(rec_trace_b,
                                   std::abs(born.gammaB.trace_b() - fam.spec.trace_b()));
            worst_case_secs = std::max(worst_case_secs, case_timer.elapsed());
            reconstructions.push_back(std::move(born));
        }
        CriterionResult r{"C03", "Born reconstruction from K=200 modes, nu > 0 cases", false, "",
                          timer.elapsed()};
        r.pass = max_rel < 1e-3 && worst_case_secs < 60.0;
        r.detail = "max rel err = " + fmt(max_rel) + ", worst case " + fmt(worst_case_secs) + " s";
        results.push_back(r);

        // C5 closed-form part
        double cf_a = 0.0, cf_b = 0.0;
        for (auto [d, mu, nu] : family_cases) {
            auto fam = example_family(d, mu, nu);
            cf_a = std::max(cf_a, std::abs(fam.born.trace_a() - fam.spec.trace_a()));
            cf_b = std::max(cf_b, std::abs(fam.born.trace_b() - fam.spec.trace_b()));
        }
        CriterionResult r5{"C05", "trace identities on closed forms (1e-8) and reconstructions (1e-3)",
                           false, "", 0.0};
        r5.pass = cf_a < 1e-8 && cf_b < 1e-8 && rec_trace_a < 1e-3 && rec_trace_b < 1e-3;
        r5.detail = "closed form " + fmt(std::max(cf_a, cf_b)) + ", reconstructed " +
                    fmt(std::max(rec_trace_a, rec_trace_b));
        results.push_back(r5);
    }

    // C4: zero resonance of (3,1,0) and the fitted log coefficient
    {
        detail::Timer timer;
        auto fam = example_family(3, 1.0, 0.0);
        auto Q = halfline_from_conductivity(fam.spec);
        auto rep = spectral_report(Q, 3);
        auto sp = spectrum(fam.spec, 200, Route::conductivity_ode, 1e-12, threads);
        BornOptions opt;
        opt.resonance = rep.resonance;
        opt.kappas = rep.kappas;
        auto born = born_profile(sp, opt);
        auto dec = fit_singular_decomposition(born.gammaB, rep);
        CriterionResult r{"C04", "zero resonance detection and c0 = 2 mu^2/nu_d within 2%", false,
                          "", timer.elapsed()};
        r.pass = rep.resonance && std::abs(dec.c0 - 4.0) < 0.02 * 4.0;
        r.detail = "resonance = " + std::string(rep.resonance ? "yes" : "no") +
                   ", c0 = " + fmt(dec.c0);
        results.push_back(r);
    }

    // C6: moment identities on polynomial profiles (1e-9, k <= 20) and the
    // corrected moment problem + spectral identity on closed-form pairs
    // (1e-8)
    {
        detail::Timer timer;
        double worst_poly = 0.0;
        std::mt19937 rng(987654321);
        std::uniform_real_distribution<double> coeff(-2.0, 2.0);
        for (int d : {2, 3, 4}) {
            for (int rep = 0; rep < 4; ++rep) {
                std::vector<PowerTerm> terms;
                for (int m = 0; m <= 4; ++m) terms.push_back({coeff(rng), 2.0 * m, false});
                auto u = RadialProfile::power_sum(d, terms);
                auto lap = laplacian_radial(u);
                const double a = u.trace_a(), b = u.trace_b();
                worst_poly = std::max(worst_poly, std::abs(moment_sigma(lap, 0) - 2 * b));
                for (int k = 1; k <= 20; ++k) {
                    const double rhs = 2 * b - 2 * k * a +
                                       2.0 * k * (2 * k + d - 2) * moment_sigma(u, k - 1);
                    worst_poly = std::max(worst_poly, std::abs(moment_sigma(lap, k) - rhs));
                }
            }
        }
        double worst_pair = 0.0;
        for (auto [d, mu, nu] : {std::tuple{3, 1.0, 3.0}, {2, 3.0, 1.0}}) {
            auto fam = example_family(d, mu, nu);
            auto sp = spectrum(fam.spec, 20, Route::conductivity_ode, 1e-12, threads);
            const double a = fam.spec.trace_a(), b = fam.spec.trace_b();
            for (int k = 1; k <= 20; ++k) {
                // corrected moment problem: lambda_k = k(2k+d-2) sigma_{k-1}[gamma^B]
                const double mom = k * (2.0 * k + d - 2.0) * moment_sigma(fam.born, k - 1);
                worst_pair = std::max(worst_pair, std::abs(sp.lambda[k] - mom));
                // spectral identity with the potential-side Born profile
                const double ident = a * k - b + a * moment_sigma(fam.born_potential, k);
                worst_pair = std::max(worst_pair, std::abs(sp.lambda[k] - ident));
            }
        }
        CriterionResult r{"C06", "moment identities (1e-9) and moment-problem/spectral cross-check (1e-8)",
                          false, "", timer.elapsed()};
        r.pass = worst_poly < 1e-9 && worst_pair < 1e-8;
        r.detail = "polynomial residual " + fmt(worst_poly) + ", closed-form pair residual " +
                   fmt(worst_pair);
        results.push_back(r);
    }

    // C7: 50 randomized smooth elliptic conductivities; every Jost zero in
    // (0, nu_d) for d = 3, none (and no resonance) for d = 2
    {
        detail::Timer timer;
        std::mt19937 rng(20260809);
        std::uniform_real_distribution<double> uq(0.55, 1.9), unu(0.3, 3.0), ua(-0.2, 0.2);
        std::uniform_real_distribution<double> uamp(-1.35, -0.6), uc(0.1, 0.6), uw(0.1, 0.35);
        int violations = 0, bound_states_seen = 0;
        for (int rep = 0; rep < 50; ++rep) {
            const int d = rep % 2 == 0 ? 3 : 2;
            const double nd = nu_d(d);
            RadialProfile gamma = RadialProfile::constant(d, 1.0);
            if (rep % 4 < 2) {
                // smoothly perturbed family member, scaled to preserve K <= 4
                const double nu = unu(rng);
                const double mu = std::max(0.3, uq(rng) * (nu + nd) - nd);
                auto fam = example_family(d, mu, nu);
                double gmin = 10.0;
                for (double rr : default_grid(128)) gmin = std::min(gmin, fam.spec.gamma.eval(rr));
                const double s1 = ua(rng) * gmin, s2 = ua(rng) * gmin;
                auto pert = fn::product(fn::poly_bump(1.0, 0.0, 1.0, 2),
                                        fn::sum(fn::constant(s1), fn::power(s2, 2.0)));
                gamma = RadialProfile::closed_form(d, fn::sum(as_fn(fam.spec.gamma), pert));
            } else {
                // sharp dip in log gamma; these carry actual bound states
                auto logg = fn::scaled(uamp(rng), fn::smooth_bump(1.0, uc(rng), uw(rng)));
                gamma = RadialProfile::closed_form(d, std::make_shared<fn::Exp>(logg));
            }
            ConductivitySpec spec{d, gamma, measured_ellipticity(gamma), 10.0,
                                  std::numeric_limits<double>::infinity(), {}};
            auto Q = halfline_from_conductivity(spec);
            auto kappas = discrete_spectrum(Q, std::max(nd, 0.5) + 0.5);
            bound_states_seen += static_cast<int>(kappas.size());
            if (d == 2) {
                if (!kappas.empty()) ++violations;
                if (detect_zero_resonance(Q).resonance) ++violations;
            } else {
                for (double kap : kappas)
                    if (!(kap > 0.0 && kap < nd)) ++violations;
            }
        }
        CriterionResult r{"C07", "spectrum containment over 50 randomized conductivities", false,
                          "", timer.elapsed()};
        // a run with no detected zeros would make the containment claim
        // vacuous, so seeing bound states is part of the pass condition
        r.pass = violations == 0 && bound_states_seen > 0;
        r.detail = std::to_string(violations) + " violations, " +
                   std::to_string(bound_states_seen) + " bound states observed";
        results.push_back(r);
    }

    // C8: locality decay rate within 5% of log(1/2) for an interior bump,
    // failing negative control for a boundary-touching bump
    {
        detail::Timer timer;
        ConductivitySpec one{3, RadialProfile::constant(3, 1.0), 2.0, 10.0,
                             std::numeric_limits<double>::infinity(), {}};
        ConductivitySpec inner{3,
                               RadialProfile::closed_form(3, fn::shifted(1.0, fn::poly_bump(1.0, 0.0, 0.5, 4))),
                               4.0, 10.0, std::numeric_limits<double>::infinity(), {}};
        auto pos = locality_test(one, inner, 0.5, 10, 40, 0.05);
        ConductivitySpec boundary{3,
                                  RadialProfile::closed_form(3, fn::shifted(1.0, fn::poly_bump(0.5, 1.0, 0.35, 4))),
                                  4.0, 10.0, std::numeric_limits<double>::infinity(), {}};
        auto neg = locality_test(one, boundary, 0.5, 10, 40, 0.05);
        CriterionResult r{"C08", "locality decay rate log(0.5) within 5%; negative control fails",
                          false, "", timer.elapsed()};
        r.pass = pos.decay_ok && !pos.inconclusive && !neg.decay_ok;
        r.detail = "rho_hat = " + fmt(pos.rho_hat) + " vs log s = " + fmt(pos.log_s) +
                   " (gap " + fmt(pos.relative_gap * 100) + "%), negative control gap " +
                   fmt(neg.relative_gap * 100) + "%";
        results.push_back(r);
    }

    // C9: noiseless round trip within 1e-3 and stability sweep rank
    // correlation >= 0.95 (empirical exponents reported, never asserted)
    {
        detail::Timer timer;
        bool round_ok = true;
        std::string detail_s;
        {
            auto fam = example_family(3, 1.0, 3.0);
            auto sp = spectrum(fam.spec, 200, Route::conductivity_ode, 1e-12, threads);
            auto born = born_profile(sp);
            FitProblem prob;
            prob.d = 3;
            prob.data = FitData::from_profile(born.gammaB);
            FamilySpace space;
            space.nu_fixed = 3.0;
            space.mu_init = 1.7;
            prob.space = space;
            auto out = fit_conductivity(prob);
            round_ok &= out.params && std::abs(out.params->mu - 1.0) < 1e-3;
            detail_s += "mu_hat(3,1,3) = " + fmt(out.params ? out.params->mu : -1.0);
        }
        {
            auto fam = example_family(2, 3.0, 1.0);
            auto sp = spectrum(fam.spec, 200, Route::conductivity_ode, 1e-12, threads);
            auto born = born_profile(sp);
            FitProblem prob;
            prob.d = 2;
            prob.data = FitData::from_profile(born.gammaB);
            prob.space = FamilySpace{};
            prob.budget = 400;
            auto out = fit_conductivity(prob);
            round_ok &= out.params && std::abs(out.params->mu - 3.0) < 1e-3 &&
                        std::abs(out.params->nu - 1.0) < 1e-3;
            detail_s += ", (mu,nu)_hat(2,3,1) = (" + fmt(out.params ? out.params->mu : -1.0) +
                        ", " + fmt(out.params ? out.params->nu : -1.0) + ")";
        }
        auto fam = example_family(3, 1.0, 3.0);
        std::vector<RadialProfile> perturbations;
        for (double eps : {1e-4, 3.16e-4, 1e-3, 3.16e-3, 1e-2, 3.16e-2, 1e-1})
            perturbations.push_back(RadialProfile::closed_form(3, fn::poly_bump(eps, 0.0, 1.0, 2)));
        auto sweep = stability_sweep(fam.spec, perturbations, 0.0, 48, threads);
        CriterionResult r{"C09", "round-trip inversion within 1e-3; sweep rank correlation >= 0.95",
                          false, "", timer.elapsed()};
        r.pass = round_ok && sweep.rank_correlation >= 0.95;
        r.detail = detail_s + ", rank corr = " + fmt(sweep.rank_correlation) +
                   ", empirical exponent = " + fmt(sweep.fitted_exponent);
        results.push_back(r);
    }

    // C10: Fourier/moment consistency and the analytic ball transform
    {
        detail::Timer timer;
        double worst_consistency = 0.0;
        for (auto [d, mu, nu] : family_cases) {
            auto fam = example_family(d, mu, nu);
            auto sp = spectrum(fam.spec, 60, Route::conductivity_ode, 1e-12, threads);
            auto m = born_moments(sp);
            worst_consistency = std::max(worst_consistency,
                                         std::abs(born_fourier(sp, 0.0).value -
                                                  sphere_measure(d) * m[0]));
        }
        ConductivitySpec one{3, RadialProfile::constant(3, 1.0), 2.0, 10.0,
                             std::numeric_limits<double>::infinity(), {}};
        auto sp1 = spectrum(one, 120, Route::conductivity_ode, 1e-12, threads);
        double worst_ball = 0.0;
        for (double rho = 0.25; rho <= 10.0; rho += 0.25) {
            const double exact =
                4.0 * pi * (std::sin(rho) - rho * std::cos(rho)) / (rho * rho * rho);
            worst_ball = std::max(worst_ball, std::abs(born_fourier(sp1, rho).value - exact));
        }
        CriterionResult r{"C10", "Fourier/moment consistency (1e-8) and analytic ball transform (1e-6)",
                          false, "", timer.elapsed()};
        r.pass = worst_consistency < 1e-8 && worst_ball < 1e-6;
        r.detail = "fourier-vs-moment gap " + fmt(worst_consistency) + ", ball transform gap " +
                   fmt(worst_ball);
        results.push_back(r);
    }

    return results;
}

inline std::string format_table(const std::vector<CriterionResult>& results) {
    std::ostringstream os;
    for (const auto& r : results) {
        os << r.id << " [" << (r.pass ? "PASS" : "FAIL") << "] " << r.description << " -- "
           << r.detail;
        if (r.seconds > 0.05) os << " (" << detail::fmt(r.seconds) << " s)";
        os << "\n";
    }
    return os.str();
}

} // namespace rb::selftest

#endif
