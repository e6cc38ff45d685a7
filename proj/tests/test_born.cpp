// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "radialborn/born.hpp"

#include "oracles.hpp"

using namespace rb;
using Catch::Approx;

namespace {

/// Synthetic spectrum from the derived family closed form (exact data).
DtnSpectrum family_spectrum(int d, double mu, double nu, int K) {
    DtnSpectrum s;
    s.d = d;
    s.route = Route::closed_form;
    s.lambda.resize(K + 1);
    s.error_estimate.assign(K + 1, 0.0);
    for (int k = 0; k <= K; ++k) s.lambda[k] = oracles::family_lambda(d, mu, nu, k);
    return s;
}

DtnSpectrum constant_spectrum(int d, double a, int K) {
    DtnSpectrum s;
    s.d = d;
    s.route = Route::closed_form;
    s.lambda.resize(K + 1);
    s.error_estimate.assign(K + 1, 0.0);
    for (int k = 0; k <= K; ++k) s.lambda[k] = a * k;
    return s;
}

} // namespace

TEST_CASE("born_moments: constant conductivity consistency") {
    for (int d : {2, 3}) {
        auto s = constant_spectrum(d, 1.0, 12);
        auto m = born_moments(s);
        for (int k = 0; k < 12; ++k) CHECK(m[k] == Approx(1.0 / (2 * k + d)).epsilon(1e-14));
    }
}

TEST_CASE("born_moments: scaling gamma = 4") {
    auto m = born_moments(constant_spectrum(3, 4.0, 10));
    for (int k = 0; k < 10; ++k) CHECK(m[k] == Approx(4.0 / (2 * k + 3)).epsilon(1e-14));
}

TEST_CASE("born_moments match direct moments of the closed-form Born profile") {
    auto fam = example_family(3, 1.0, 3.0);
    auto s = family_spectrum(3, 1.0, 3.0, 40);
    auto m = born_moments(s);
    CHECK(m[0] == Approx(0.492063492063 / 3.0).epsilon(1e-10));
    for (int k = 0; k < 20; ++k)
        CHECK(m[k] == Approx(moment_sigma(fam.born, k)).margin(1e-12));
}

TEST_CASE("display-indexed moments differ (published index shift)") {
    auto s = constant_spectrum(3, 1.0, 8);
    auto disp = born_moments_display_indexing(s);
    // with lambda_k in place of lambda_{k+1} the constant case fails; the
    // proof-consistent variant is the one the library uses
    CHECK(disp[0] == 0.0);
    CHECK(disp[1] != Approx(1.0 / 5.0));
}

TEST_CASE("vb_moments") {
    std::vector<double> lv = {0.5, 1.25, 2.1};
    auto m = vb_moments(lv);
    CHECK(m[0] == Approx(0.5));
    CHECK(m[1] == Approx(0.25));
    CHECK(m[2] == Approx(0.1).margin(1e-14));
    // family: sigma_k[v^B] = (nu^2-mu^2)/(k+nu+nu_d), via lambda_k[V]
    const int d = 3;
    const double mu = 1.0, nu = 3.0;
    std::vector<double> lamV;
    for (int k = 0; k <= 10; ++k) lamV.push_back(oracles::family_lambda_V(d, mu, nu, k));
    auto mv = vb_moments(lamV);
    for (int k = 0; k <= 10; ++k)
        CHECK(mv[k] == Approx((nu * nu - mu * mu) / (k + nu + nu_d(d))).epsilon(1e-12));
}

TEST_CASE("born_fourier at rho = 0") {
    auto s = family_spectrum(3, 1.0, 3.0, 60);
    const double l1 = s.lambda[1];
    CHECK(born_fourier(s, 0.0).value == Approx(4.0 * pi / 3.0 * l1).epsilon(1e-13));
    // and equals |S^{d-1}| sigma_0[gamma^B]
    auto m = born_moments(s);
    CHECK(born_fourier(s, 0.0).value == Approx(sphere_measure(3) * m[0]).epsilon(1e-13));
}

TEST_CASE("born_fourier of the constant conductivity is the ball transform") {
    auto s = constant_spectrum(3, 1.0, 120);
    for (double rho : {0.5, 2.0, 5.0, 8.0, 10.0})
        CHECK(born_fourier(s, rho).value == Approx(oracles::ball_transform_3d(rho)).margin(1e-9));
}

TEST_CASE("born_fourier truncation guard") {
    auto s = constant_spectrum(3, 1.0, 12); // short spectrum
    CHECK_THROWS_AS(born_fourier(s, 30.0, 1e-8), TruncationError);
}

TEST_CASE("amplitude from the Born potential profile") {
    auto fam = example_family(3, 1.0, 3.0);
    auto A = amplitude_from_born(fam.born_potential);
    for (double t : {0.0, 0.5, 2.0})
        CHECK(A(t) == Approx(2.0 * (9.0 - 1.0) * std::exp(-2.0 * 3.0 * t)).epsilon(1e-12));
    // v^B = a0 r^{-2} gives a constant amplitude
    auto vb = RadialProfile::power_sum(3, {PowerTerm{-2.0, -2.0, false}});
    auto A2 = amplitude_from_born(vb);
    for (double t : {0.0, 3.0, 20.0}) CHECK(A2(t) == Approx(-2.0).epsilon(1e-12));
    auto zero = amplitude_from_born(RadialProfile::constant(3, 0.0));
    CHECK(zero(1.0) == 0.0);
}

TEST_CASE("trace estimation from spectrum asymptotics") {
    for (auto [d, mu, nu] : {std::tuple{3, 1.0, 3.0}, {2, 3.0, 1.0}, {3, 1.0, 0.0}}) {
        auto s = family_spectrum(d, mu, nu, 200);
        auto tr = estimate_traces(s);
        const double b_true = nu > 0 ? (nu * nu - mu * mu) / (nu + nu_d(d))
                                     : -mu * mu / nu_d(d);
        CHECK(tr.a == Approx(1.0).margin(2e-8));
        CHECK(tr.b == Approx(b_true).margin(2e-6));
    }
}

TEST_CASE("born_profile reconstructs the family closed forms (fourier route)") {
    for (auto [d, mu, nu] : {std::tuple{2, 1.0, 3.0}, {3, 1.0, 3.0}, {2, 3.0, 1.0}, {3, 3.0, 1.0}}) {
        auto fam = example_family(d, mu, nu);
        auto s = family_spectrum(d, mu, nu, 200);
        auto born = born_profile(s);
        double max_rel = 0.0;
        for (double r = 0.05; r <= 1.0; r += 0.016) {
            const double expected = fam.born.eval(r);
            max_rel = std::max(max_rel,
                               std::abs(born.gammaB.eval(r) - expected) / std::abs(expected));
        }
        INFO("d=" << d << " mu=" << mu << " nu=" << nu);
        CHECK(max_rel < 1e-3);
        CHECK(std::abs(born.gammaB.trace_a() - 1.0) < 1e-6);
    }
}

TEST_CASE("born_profile captures the log singularity of the nu=0 member") {
    auto fam = example_family(3, 1.0, 0.0);
    auto s = family_spectrum(3, 1.0, 0.0, 200);
    auto born = born_profile(s);
    for (double r : {0.01, 0.05, 0.3, 0.8})
        CHECK(born.gammaB.eval(r) == Approx(1.0 - 4.0 * std::log(r)).epsilon(2e-4));
    // v^B should be dominated by the r^{-2} channel with coefficient -2 mu^2
    CHECK(born.vB.jet(0.01).v * 1e-4 == Approx(-2.0).epsilon(0.01));
}

TEST_CASE("born_profile off the model basis exercises the inverse transform") {
    // v^B = smooth interior bump: its moment sequence decays like
    // (0.85)^{2k}, which no finite power combination reproduces, so the
    // oscillatory inverse-transform path must carry the reconstruction.
    const int d = 3, K = 200;
    auto vfun = [](double r) {
        const double u = (r - 0.55) / 0.3;
        const double g = 1.0 - u * u;
        return g > 1e-12 ? 0.8 * std::exp(1.0 - 1.0 / g) : 0.0;
    };
    // exact-by-oracle spectrum: lambda_k = k - b + sigma_k[v], b = sigma_0[v]
    auto sigma_oracle = [&](int k) {
        auto f = [&](double r) { return vfun(r) * std::pow(r, 2.0 * k + d - 1); };
        return oracles::simpson(f, 0.25, 0.85, 4096);
    };
    const double b = sigma_oracle(0);
    DtnSpectrum s;
    s.d = d;
    s.route = Route::closed_form;
    s.lambda.resize(K + 1);
    s.error_estimate.assign(K + 1, 0.0);
    s.lambda[0] = 0.0;
    for (int k = 1; k <= K; ++k) s.lambda[k] = k - b + sigma_oracle(k);
    auto born = born_profile(s);
    // expected gamma^B = 1 - 2 T_d(v) by nested quadrature
    auto Td = [&](double r) {
        auto outer = [&](double t) {
            auto inner = [&](double x) { return vfun(x) * x * x; };
            return oracles::simpson(inner, 0.0, t, 512) / (t * t);
        };
        return oracles::simpson(outer, r, 1.0, 1024);
    };
    // the usable frequency band is limited by the double-precision moment
    // data (the series coefficients grow like e^rho); away from the
    // low-confidence core the reconstruction is at the 1e-3 level, nearer
    // the origin it degrades
    double max_err = 0.0;
    for (double r = 0.1; r <= 0.999; r += 0.037) {
        const double expected = 1.0 - 2.0 * Td(r);
        max_err = std::max(max_err, std::abs(born.gammaB.eval(r) - expected));
    }
    CHECK(max_err < 2e-3);
    CHECK(std::abs(born.gammaB.eval(0.05) - (1.0 - 2.0 * Td(0.05))) < 2e-2);
    // the residual path must have been engaged
    CHECK(born.cutoff_P > 0.0);
    for (double r : {0.4, 0.55, 0.7})
        CHECK(born.vB.jet(r).v == Approx(vfun(r)).margin(8e-2));
}

TEST_CASE("born_profile moments route on family data") {
    auto fam = example_family(3, 3.0, 1.0);
    auto s = family_spectrum(3, 3.0, 1.0, 120);
    BornOptions opt;
    opt.method = "moments";
    auto born = born_profile(s, opt);
    // the regularized route trades a small bias for stability
    for (double r : {0.1, 0.4, 0.8})
        CHECK(born.gammaB.eval(r) == Approx(fam.born.eval(r)).epsilon(1e-4));
}

TEST_CASE("reconstruction is reproducible: moments of gamma^B round trip") {
    auto s = family_spectrum(3, 1.0, 3.0, 120);
    auto born = born_profile(s);
    auto m = born_moments(s);
    for (int k = 0; k <= 30; ++k)
        CHECK(moment_sigma(born.gammaB, k, 1e-12) == Approx(m[k]).margin(1e-6));
}

TEST_CASE("verify_identity on the closed-form pair") {
    auto fam = example_family(3, 1.0, 3.0);
    auto s = family_spectrum(3, 1.0, 3.0, 60);
    BornApproximation closed;
    closed.d = 3;
    closed.gammaB = fam.born;
    closed.vB = fam.born_potential;
    closed.K = 60;
    closed.method = "closed-form";
    closed.a = 1.0;
    closed.b = fam.spec.trace_b();
    auto rep = verify_identity(fam.spec, closed, s);
    CHECK(rep.max_identity_residual < 1e-8);
    CHECK(rep.trace_a_residual < 1e-9);
    CHECK(rep.trace_b_residual < 1e-9);
}

TEST_CASE("verify_identity on a reconstructed profile") {
    auto fam = example_family(3, 1.0, 3.0);
    auto s = family_spectrum(3, 1.0, 3.0, 200);
    auto born = born_profile(s);
    auto rep = verify_identity(fam.spec, born, s);
    CHECK(rep.max_identity_residual < 1e-4);
    CHECK(rep.trace_a_residual < 1e-3);
    CHECK(rep.trace_b_residual < 1e-3);
}

TEST_CASE("born_profile input validation") {
    DtnSpectrum tiny;
    tiny.d = 3;
    tiny.lambda = {0.0, 1.0};
    tiny.error_estimate = {0.0, 0.0};
    CHECK_THROWS_AS(born_profile(tiny), NumericError);
    auto s = constant_spectrum(3, 1.0, 25);
    BornOptions opt;
    opt.method = "nonsense";
    CHECK_THROWS_AS(born_profile(s, opt), NumericError);
}

TEST_CASE("short spectra flag an accuracy warning") {
    auto s = constant_spectrum(3, 1.0, 12);
    auto born = born_profile(s);
    CHECK(born.accuracy_warning);
    CHECK(born.confidence(0.01) < born.confidence(0.5));
}

TEST_CASE("d=2 reconstructions stay bounded at the origin (regularity split)") {
    // regularity in d = 2: no singular channels can appear
    for (auto [mu, nu] : {std::pair{1.0, 3.0}, {3.0, 1.0}}) {
        auto s = family_spectrum(2, mu, nu, 160);
        auto born = born_profile(s);
        for (const auto& t : born.vB.terms()) CHECK(t.exponent >= 0.0);
        CHECK(born.gammaB.finite_at_zero());
        CHECK(std::isfinite(born.gammaB.eval(0.0)));
        CHECK(std::abs(born.gammaB.eval(1e-5)) < 20.0);
    }
}

TEST_CASE("very short spectra still reconstruct (with a warning)") {
    auto s = constant_spectrum(3, 2.0, 3);
    auto born = born_profile(s);
    CHECK(born.accuracy_warning);
    CHECK(born.a == Approx(2.0).margin(1e-9));
    for (double r : {0.3, 0.8}) CHECK(born.gammaB.eval(r) == Approx(2.0).margin(1e-6));
}
