// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "radialborn/forward.hpp"
#include "radialborn/spectral.hpp"

#include "oracles.hpp"

using namespace rb;
using Catch::Approx;

TEST_CASE("free Jost function is identically one") {
    HalflinePotential Q([](double) { return 0.0; }, 14.0);
    for (double z : {0.0, 0.3, 1.0, 4.0})
        CHECK(jost_function(Q, z) == Approx(1.0).margin(1e-11));
    CHECK(discrete_spectrum(Q, 2.0).empty());
    CHECK_FALSE(detect_zero_resonance(Q).resonance);
}

TEST_CASE("square-well bound states against the shooting oracle") {
    // Q = -4 on [0,1]: one bound state
    HalflinePotential Q4([](double t) { return t < 1.0 ? -4.0 : 0.0; }, 14.0, 16384);
    auto got4 = discrete_spectrum(Q4, 2.5);
    auto exp4 = oracles::square_well_levels(4.0, 1.0);
    REQUIRE(got4.size() == exp4.size());
    CHECK(got4[0] == Approx(exp4[0]).margin(2e-5));

    // deeper well: more states
    HalflinePotential Q30([](double t) { return t < 1.0 ? -30.0 : 0.0; }, 14.0, 16384);
    auto got30 = discrete_spectrum(Q30, 6.0);
    auto exp30 = oracles::square_well_levels(30.0, 1.0);
    REQUIRE(got30.size() == exp30.size());
    for (std::size_t i = 0; i < got30.size(); ++i)
        CHECK(got30[i] == Approx(exp30[i]).margin(2e-4));
}

TEST_CASE("root count is stable under grid refinement") {
    HalflinePotential Q([](double t) { return t < 1.0 ? -30.0 : 0.0; }, 14.0, 16384);
    auto coarse = discrete_spectrum(Q, 6.0, 1e-10, 400);
    auto fine = discrete_spectrum(Q, 6.0, 1e-10, 800);
    CHECK(coarse.size() == fine.size());
}

TEST_CASE("conductivity-derived spectra stay in (0, nu_d) and d=2 is clean") {
    for (auto [d, mu, nu] : {std::tuple{3, 1.0, 3.0}, {3, 3.0, 1.0}, {3, 2.0, 0.5}}) {
        auto fam = example_family(d, mu, nu);
        auto Q = halfline_from_conductivity(fam.spec);
        auto kappas = discrete_spectrum(Q, nu_d(d) + 0.5);
        for (double k : kappas) {
            CHECK(k > 0.0);
            CHECK(k < nu_d(d));
        }
    }
    for (auto [mu, nu] : {std::pair{1.0, 3.0}, {3.0, 1.0}, {0.9, 0.4}}) {
        auto fam = example_family(2, mu, nu);
        auto Q = halfline_from_conductivity(fam.spec);
        CHECK(discrete_spectrum(Q, 1.0).empty());
        CHECK_FALSE(detect_zero_resonance(Q).resonance);
    }
}

TEST_CASE("zero resonance of the nu=0 family member") {
    auto fam = example_family(3, 1.0, 0.0);
    auto Q = halfline_from_conductivity(fam.spec);
    auto res = detect_zero_resonance(Q);
    CHECK(res.resonance);
    CHECK(std::abs(res.jost_at_zero) < 1e-6);
    auto fam2 = example_family(3, 1.0, 3.0);
    auto Q2 = halfline_from_conductivity(fam2.spec);
    CHECK_FALSE(detect_zero_resonance(Q2).resonance);
}

TEST_CASE("d=2 Jost function at zero is positive (no resonance)") {
    // the z=0 Jost solution is phi(t) = sqrt(gamma(e^{-t})) normalized by
    // its limit, so F(0) = sqrt(gamma(1)/gamma(0)) > 0
    auto fam = example_family(2, 3.0, 1.0);
    auto Q = halfline_from_conductivity(fam.spec);
    const double f0 = jost_function(Q, 0.0);
    CHECK(f0 > 0.0);
    CHECK(f0 == Approx(std::sqrt(fam.spec.gamma.eval(1.0) / fam.spec.gamma.eval(0.0)))
                    .margin(1e-8));
}

TEST_CASE("randomized smooth elliptic conductivities: spectrum containment") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> umu(0.8, 3.0), unu(0.3, 3.0), ua(-0.25, 0.25);
    for (int rep = 0; rep < 10; ++rep) {
        const int d = rep % 2 == 0 ? 3 : 2;
        auto fam = example_family(d, umu(rng), unu(rng));
        auto pert = fn::product(fn::poly_bump(1.0, 0.0, 1.0, 2),
                                fn::sum(fn::constant(ua(rng)), fn::power(ua(rng), 2.0)));
        auto gamma = RadialProfile::closed_form(d, fn::sum(as_fn(fam.spec.gamma), pert));
        ConductivitySpec spec{d, gamma, measured_ellipticity(gamma), 10.0,
                              std::numeric_limits<double>::infinity(), {}};
        auto Q = halfline_from_conductivity(spec);
        auto kappas = discrete_spectrum(Q, nu_d(d) + 0.5);
        if (d == 2) {
            CHECK(kappas.empty());
            CHECK_FALSE(detect_zero_resonance(Q).resonance);
        } else {
            for (double k : kappas) {
                CHECK(k > 0.0);
                CHECK(k < nu_d(d) + 1e-10);
            }
        }
    }
}

TEST_CASE("synthetic singular decomposition recovery") {
    const double c0 = 4.0, c1 = 0.35, k1 = 0.31;
    auto born = RadialProfile::power_sum(
        3, {PowerTerm{-c0, 0.0, true}, PowerTerm{c1, -2.0 * k1, false},
            PowerTerm{1.0, 0.0, false}, PowerTerm{-0.4, 2.0, false}});
    SpectralReport rep;
    rep.resonance = true;
    rep.kappas = {k1};
    auto dec = fit_singular_decomposition(born, rep);
    CHECK(dec.c0 == Approx(c0).margin(1e-6));
    REQUIRE(dec.terms.size() == 1);
    CHECK(dec.terms[0].first == Approx(k1));
    CHECK(dec.terms[0].second == Approx(c1).margin(1e-6));
    REQUIRE(dec.regular.has_value());
    for (double r : {0.05, 0.2, 0.6})
        CHECK(dec.regular->eval(r) == Approx(1.0 - 0.4 * r * r).margin(1e-5));
}

TEST_CASE("decomposition of the closed-form family Born profiles") {
    // (3,1,0): pure log with c0 = 2 mu^2/nu_d = 4
    auto fam0 = example_family(3, 1.0, 0.0);
    SpectralReport rep0;
    rep0.resonance = true;
    auto dec0 = fit_singular_decomposition(fam0.born, rep0);
    CHECK(dec0.c0 == Approx(4.0).epsilon(1e-8));
    CHECK(dec0.terms.empty());

    // (3,1,3): regular, all singular coefficients absent
    auto fam1 = example_family(3, 1.0, 3.0);
    SpectralReport rep1;
    auto dec1 = fit_singular_decomposition(fam1.born, rep1);
    CHECK(dec1.c0 == 0.0);
    CHECK(dec1.terms.empty());
    // the smooth remainder beyond the {1, r, r^2} columns (here ~ r^6) is
    // absorbed by the regular part, not the singular channels
    CHECK(dec1.fit_residual < 1e-3);
    REQUIRE(dec1.regular.has_value());
    for (double r : {0.05, 0.2})
        CHECK(dec1.regular->eval(r) == Approx(fam1.born.eval(r)).margin(1e-10));

    SpectralReport rep2;
    auto dec2 = fit_singular_decomposition(RadialProfile::constant(3, 1.0), rep2);
    CHECK(dec2.c0 == 0.0);
    CHECK(dec2.regular->eval(0.1) == Approx(1.0).margin(1e-10));
}

TEST_CASE("near-coincident kappas are merged") {
    auto born = RadialProfile::power_sum(3, {PowerTerm{0.5, -0.6, false}, PowerTerm{1.0, 0.0, false}});
    SpectralReport rep;
    rep.kappas = {0.3, 0.2995};
    auto dec = fit_singular_decomposition(born, rep);
    CHECK(dec.terms.size() == 1);
}

TEST_CASE("spectral report bundles the pieces") {
    auto fam = example_family(3, 1.0, 0.0);
    auto Q = halfline_from_conductivity(fam.spec);
    auto rep = spectral_report(Q, 3);
    CHECK(rep.resonance);
    CHECK(rep.z_grid.size() >= 400);
    CHECK(rep.jost_values.size() == rep.z_grid.size());
}

TEST_CASE("sharp-dip conductivities carry bound states inside (0, nu_d)") {
    auto logg = fn::scaled(-1.3, fn::smooth_bump(1.0, 0.15, 0.15));
    auto gamma = RadialProfile::closed_form(3, std::make_shared<fn::Exp>(logg));
    ConductivitySpec spec{3, gamma, measured_ellipticity(gamma), 10.0,
                          std::numeric_limits<double>::infinity(), {}};
    auto Q = halfline_from_conductivity(spec);
    auto kappas = discrete_spectrum(Q, 1.0);
    REQUIRE(kappas.size() == 1);
    CHECK(kappas[0] > 0.0);
    CHECK(kappas[0] < nu_d(3));
    // the same dip in d=2 must stay spectrum-free
    auto gamma2 = RadialProfile::closed_form(2, std::make_shared<fn::Exp>(logg));
    ConductivitySpec spec2{2, gamma2, measured_ellipticity(gamma2), 10.0,
                           std::numeric_limits<double>::infinity(), {}};
    auto Q2 = halfline_from_conductivity(spec2);
    CHECK(discrete_spectrum(Q2, 1.0).empty());
    CHECK_FALSE(detect_zero_resonance(Q2).resonance);
}

TEST_CASE("moment validity: sigma_k[v^B] = lambda_k[V] - k when J = 0, no resonance") {
    // moment-validity check on a d=3 family member with empty spectrum
    auto fam = example_family(3, 1.0, 3.0);
    auto Q = halfline_from_conductivity(fam.spec);
    REQUIRE(discrete_spectrum(Q, 1.0).empty());
    REQUIRE_FALSE(detect_zero_resonance(Q).resonance);
    for (int k = 0; k <= 10; ++k) {
        const double lv = dtn_eigenvalue_schrodinger(Q, 3, k);
        CHECK(moment_sigma(fam.born_potential, k) == Approx(lv - k).margin(1e-9));
    }
}
