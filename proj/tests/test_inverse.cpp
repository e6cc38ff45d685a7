// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "radialborn/inverse.hpp"

#include "oracles.hpp"

using namespace rb;
using Catch::Approx;

TEST_CASE("trust-region minimizer on smooth test functions") {
    TrustRegionOptions opt;
    opt.budget = 200;
    auto quad = [](const std::vector<double>& x) {
        const double a = x[0] - 1.3, b = x[1] + 0.4;
        return 3.0 * a * a + 0.5 * b * b + 0.2 * a * b;
    };
    auto res = TrustRegionMinimizer(opt).minimize(quad, {0.0, 0.0});
    CHECK(res.x[0] == Approx(1.3).margin(1e-5));
    CHECK(res.x[1] == Approx(-0.4).margin(1e-5));
    // banana-ish valley
    auto rosen = [](const std::vector<double>& x) {
        const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
        return a * a + 10.0 * b * b;
    };
    opt.budget = 500;
    auto res2 = TrustRegionMinimizer(opt).minimize(rosen, {-0.5, 0.5});
    CHECK(res2.value < 1e-6);
    // box clipping
    TrustRegionOptions boxed;
    boxed.lower = {0.5};
    boxed.upper = {2.0};
    auto res3 = TrustRegionMinimizer(boxed).minimize(
        [](const std::vector<double>& x) { return x[0] * x[0]; }, {1.0});
    CHECK(res3.x[0] == Approx(0.5).margin(1e-9));
}

TEST_CASE("family fit recovers mu from the closed-form Born profile") {
    auto fam = example_family(3, 1.0, 3.0);
    FitProblem prob;
    prob.d = 3;
    prob.data = FitData::from_profile(fam.born);
    FamilySpace space;
    space.nu_fixed = 3.0;
    space.mu_init = 1.8;
    prob.space = space;
    auto out = fit_conductivity(prob);
    REQUIRE(out.params.has_value());
    CHECK(out.params->mu == Approx(1.0).margin(1e-3));
    CHECK(out.report.misfit < 1e-10);
}

TEST_CASE("constant Born data recovers the constant conductivity") {
    FitProblem prob;
    prob.d = 3;
    prob.data = FitData::from_profile(RadialProfile::constant(3, 1.0));
    FamilySpace space;
    space.nu_fixed = 1.0;
    prob.space = space;
    auto out = fit_conductivity(prob);
    REQUIRE(out.params.has_value());
    CHECK(out.params->mu == Approx(1.0).margin(1e-4)); // mu = nu collapses to gamma = 1
    for (double r : {0.2, 0.7}) CHECK(out.spec.gamma.eval(r) == Approx(1.0).margin(1e-4));
}

TEST_CASE("fit tolerates multiplicative noise on the data") {
    auto fam = example_family(3, 3.0, 1.0);
    auto data = FitData::from_profile(fam.born);
    std::mt19937 rng(20260809); // recorded seed
    std::normal_distribution<double> noise(0.0, 0.01);
    for (auto& v : data.value) v *= 1.0 + noise(rng);
    FitProblem prob;
    prob.d = 3;
    prob.data = data;
    FamilySpace space;
    space.nu_fixed = 1.0;
    space.mu_init = 2.0;
    prob.space = space;
    auto out = fit_conductivity(prob);
    REQUIRE(out.params.has_value());
    CHECK(out.params->mu == Approx(3.0).epsilon(0.05));
}

TEST_CASE("two-parameter family fit") {
    auto fam = example_family(2, 3.0, 1.0);
    FitProblem prob;
    prob.d = 2;
    prob.data = FitData::from_profile(fam.born);
    prob.space = FamilySpace{}; // both free
    prob.budget = 400;
    auto out = fit_conductivity(prob);
    REQUIRE(out.params.has_value());
    CHECK(out.params->mu == Approx(3.0).margin(2e-3));
    CHECK(out.params->nu == Approx(1.0).margin(2e-3));
}

TEST_CASE("log-basis fit recovers a generic smooth conductivity") {
    // ground truth gamma = exp(0.3 (1-r^2)^2), not in the example family
    const int d = 3;
    const double c_true = 0.3;
    std::vector<double> poly = {c_true, 0.0, -2.0 * c_true, 0.0, c_true};
    auto logg = std::make_shared<fn::PiecewisePoly>(std::vector<double>{0.0, 1.0},
                                                    std::vector<std::vector<double>>{poly});
    auto gamma = RadialProfile::closed_form(d, std::make_shared<fn::Exp>(logg));
    ConductivitySpec truth{d, gamma, measured_ellipticity(gamma), 10.0,
                           std::numeric_limits<double>::infinity(), {}};
    auto sp = spectrum(truth, 48, Route::conductivity_ode);
    BornOptions bopt;
    bopt.grid_n = 1024;
    auto born = born_profile(sp, bopt);
    FitProblem prob;
    prob.d = d;
    prob.data = FitData::from_profile(born.gammaB);
    LogBasisSpace space;
    space.n_coeffs = 2;
    space.k_fit = 16;
    prob.space = space;
    prob.budget = 160;
    auto out = fit_conductivity(prob);
    for (double r : {0.1, 0.45, 0.8})
        CHECK(out.spec.gamma.eval(r) == Approx(gamma.eval(r)).margin(2e-3));
}

TEST_CASE("stability sweep: monotone norms and rank correlation") {
    auto fam = example_family(3, 1.0, 3.0);
    std::vector<RadialProfile> perturbations;
    for (double eps : {1e-4, 3.16e-4, 1e-3, 3.16e-3, 1e-2, 3.16e-2, 1e-1})
        perturbations.push_back(
            RadialProfile::closed_form(3, fn::poly_bump(eps, 0.0, 1.0, 2)));
    auto rec = stability_sweep(fam.spec, perturbations, 0.0, 48);
    REQUIRE(rec.born_diff.size() == 7);
    CHECK(rec.rank_correlation >= 0.95);
    for (std::size_t i = 1; i < rec.born_diff.size(); ++i) {
        CHECK(rec.gamma_diff[i] > rec.gamma_diff[i - 1]);
        CHECK(rec.born_diff[i] > rec.born_diff[i - 1]);
    }
    CHECK(std::isfinite(rec.fitted_exponent));
    CHECK(rec.fitted_exponent > 0.0);
}

TEST_CASE("identical pair contributes nothing to the sweep fit") {
    auto fam = example_family(3, 1.0, 3.0);
    std::vector<RadialProfile> perturbations = {
        RadialProfile::constant(3, 0.0),
        RadialProfile::closed_form(3, fn::poly_bump(1e-2, 0.0, 1.0, 2))};
    auto rec = stability_sweep(fam.spec, perturbations, 0.0, 32);
    CHECK(rec.gamma_diff[0] == 0.0);
    CHECK(std::isfinite(rec.fitted_exponent));
}

TEST_CASE("locality: interior bump decays like s^{2k}") {
    ConductivitySpec one{3, RadialProfile::constant(3, 1.0), 2.0, 10.0,
                         std::numeric_limits<double>::infinity(), {}};
    auto bump = fn::poly_bump(1.0, 0.0, 0.5, 4); // support |x| < 0.5
    ConductivitySpec two{3, RadialProfile::closed_form(3, fn::shifted(1.0, bump)), 4.0, 10.0,
                         std::numeric_limits<double>::infinity(), {}};
    auto rep = locality_test(one, two, 0.5);
    CHECK_FALSE(rep.inconclusive);
    CHECK(rep.decay_ok);
    CHECK(rep.rho_hat == Approx(std::log(0.5)).epsilon(0.05));
    // the uncorrected fit carries the known subexponential bias
    CHECK(std::abs(rep.rho_hat_plain - rep.log_s) >= std::abs(rep.rho_hat - rep.log_s));
}

TEST_CASE("locality negative control: boundary-touching bump fails the fit") {
    ConductivitySpec one{3, RadialProfile::constant(3, 1.0), 2.0, 10.0,
                         std::numeric_limits<double>::infinity(), {}};
    auto bump = fn::poly_bump(0.5, 1.0, 0.35, 4); // support (0.65, 1]
    ConductivitySpec two{3, RadialProfile::closed_form(3, fn::shifted(1.0, bump)), 4.0, 10.0,
                         std::numeric_limits<double>::infinity(), {}};
    auto rep = locality_test(one, two, 0.5);
    CHECK_FALSE(rep.inconclusive);
    CHECK_FALSE(rep.decay_ok);
}

TEST_CASE("locality: identical conductivities are inconclusive") {
    ConductivitySpec one{2, RadialProfile::constant(2, 1.0), 2.0, 10.0,
                         std::numeric_limits<double>::infinity(), {}};
    auto rep = locality_test(one, one, 0.5);
    CHECK(rep.inconclusive);
}

TEST_CASE("rank correlation helper") {
    CHECK(rank_correlation({1, 2, 3, 4}, {2, 4, 6, 8}) == Approx(1.0));
    CHECK(rank_correlation({1, 2, 3, 4}, {8, 6, 4, 2}) == Approx(-1.0));
}

TEST_CASE("Born differences localize exactly like conductivity differences") {
    ConductivitySpec one{3, RadialProfile::constant(3, 1.0), 2.0, 10.0,
                         std::numeric_limits<double>::infinity(), {}};
    // equal on U_{0.5}: Born profiles agree there and differ inside
    auto inner = fn::poly_bump(0.6, 0.0, 0.5, 4);
    ConductivitySpec g_in{3, RadialProfile::closed_form(3, fn::shifted(1.0, inner)), 4.0, 10.0,
                          std::numeric_limits<double>::infinity(), {}};
    auto rep = locality_test(one, g_in, 0.5, 10, 30, 0.05, /*with_born=*/true);
    CHECK(rep.born_diff_inside > 20.0 * std::max(rep.born_diff_annulus, 1e-12));
    CHECK(rep.born_diff_annulus < 5e-3); // reconstruction tolerance at K = 64
    // differing on U_{0.5}: Born profiles must differ there too
    auto outer = fn::poly_bump(0.4, 1.0, 0.35, 4);
    ConductivitySpec g_out{3, RadialProfile::closed_form(3, fn::shifted(1.0, outer)), 4.0, 10.0,
                           std::numeric_limits<double>::infinity(), {}};
    auto rep2 = locality_test(one, g_out, 0.5, 10, 30, 0.05, /*with_born=*/true);
    CHECK(rep2.born_diff_annulus > 0.01);
}
