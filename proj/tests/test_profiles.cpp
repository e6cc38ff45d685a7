// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "radialborn/conductivity.hpp"
#include "radialborn/profile.hpp"

#include "oracles.hpp"

using namespace rb;
using Catch::Approx;

TEST_CASE("constant profile evaluates everywhere") {
    auto one = RadialProfile::constant(3, 1.0);
    CHECK(one.eval(0.5) == Approx(1.0));
    CHECK(one.eval(0.0) == Approx(1.0));
    CHECK(one.eval(1.0) == Approx(1.0));
    CHECK(one.finite_at_zero());
}

TEST_CASE("family conductivities equal 1 on the boundary") {
    for (auto [d, mu, nu] : {std::tuple{2, 3.0, 1.0}, {3, 1.0, 3.0}, {3, 1.0, 0.0}, {2, 1.0, 3.0}}) {
        auto fam = example_family(d, mu, nu);
        CHECK(fam.spec.gamma.eval(1.0) == Approx(1.0).margin(1e-14));
        CHECK(fam.spec.trace_a() == Approx(1.0).margin(1e-14));
        CHECK(fam.born.trace_a() == Approx(1.0).margin(1e-14));
    }
}

TEST_CASE("log-singular Born value at r = 1/e") {
    // gamma^B_{3,1,0} = 1 - 4 log r, so at r = e^{-1} it equals 5
    auto fam = example_family(3, 1.0, 0.0);
    CHECK(fam.born.eval(std::exp(-1.0)) == Approx(5.0).epsilon(1e-13));
    CHECK(fam.born.has_log_singularity());
    CHECK_FALSE(fam.born.finite_at_zero());
    CHECK_THROWS_AS(fam.born.eval(0.0), DomainError);
}

TEST_CASE("traces of r^2") {
    auto u = RadialProfile::power_sum(3, {PowerTerm{1.0, 2.0, false}});
    CHECK(u.trace_a() == Approx(1.0));
    CHECK(u.trace_b() == Approx(1.0)); // (1/2) * 2r at r=1
}

TEST_CASE("trace_b of the (3,1,3) Born approximation is 16/7") {
    auto fam = example_family(3, 1.0, 3.0);
    CHECK(fam.born.trace_b() == Approx(16.0 / 7.0).epsilon(1e-13));
    // and it matches the conductivity's own trace (shared traces)
    CHECK(fam.spec.trace_b() == Approx(16.0 / 7.0).epsilon(1e-10));
}

TEST_CASE("shared boundary traces across the family") {
    for (auto [d, mu, nu] :
         {std::tuple{2, 1.0, 3.0}, {3, 1.0, 3.0}, {2, 3.0, 1.0}, {3, 3.0, 1.0}, {3, 1.0, 0.0}}) {
        auto fam = example_family(d, mu, nu);
        CHECK(fam.born.trace_a() == Approx(fam.spec.trace_a()).margin(1e-8));
        CHECK(fam.born.trace_b() == Approx(fam.spec.trace_b()).margin(1e-8));
    }
}

TEST_CASE("mu = nu collapses to the constant conductivity") {
    auto fam = example_family(2, 1.0, 1.0);
    for (double r : {0.1, 0.4, 0.9, 1.0}) {
        CHECK(fam.spec.gamma.eval(r) == Approx(1.0).margin(1e-14));
        CHECK(fam.born.eval(r) == Approx(1.0).margin(1e-14));
    }
}

TEST_CASE("degenerate family member is rejected") {
    CHECK_THROWS_AS(example_family(2, 1.0, 0.0), DegenerateFamilyError);
}

TEST_CASE("family profile values match their closed forms") {
    // gamma^B_{3,1,3} = 1 + (8/10.5)(r^6 - 1)
    auto fam = example_family(3, 1.0, 3.0);
    for (double r : {0.05, 0.3, 0.7, 1.0}) {
        const double expected = 1.0 + (8.0 / 10.5) * (std::pow(r, 6) - 1.0);
        CHECK(fam.born.eval(r) == Approx(expected).epsilon(1e-14));
    }
    // V(x) = -8 mu^2 alpha r^{2(mu-1)}/(1+alpha r^{2mu})^2; (3,1,3) at r=1/2
    CHECK(fam.potential.eval(0.5) == Approx(256.0 / 49.0).epsilon(1e-13));
}

TEST_CASE("sampled profiles interpolate and expose traces") {
    auto grid = default_grid(256);
    std::vector<double> vals;
    for (double r : grid) vals.push_back(1.0 + (1.0 - r * r) * (1.0 - r * r));
    auto p = RadialProfile::sampled(3, grid, vals);
    CHECK(p.eval(0.3) == Approx(1.0 + 0.91 * 0.91).epsilon(1e-8));
    CHECK(p.trace_a() == Approx(1.0).margin(1e-10));
    CHECK(p.trace_b() == Approx(0.0).margin(1e-6)); // C^1-matched at the boundary
    CHECK(p.interpolation_order() == 3);
}

TEST_CASE("sampled profile node validation") {
    CHECK_THROWS_AS(RadialProfile::sampled(3, {0.1, 0.5, 0.9}, {1, 1, 1}), SchemaError);
    CHECK_THROWS_AS(RadialProfile::sampled(3, {0.0, 0.5, 1.0}, {1, 1, 1}), SchemaError);
    CHECK_THROWS_AS(RadialProfile::sampled(3, {0.1, 0.5, 1.0}, {1, 1, 1}, 2), SchemaError);
}

TEST_CASE("trace_b of a short sampled profile raises insufficient data") {
    auto p = RadialProfile::sampled(3, {0.5, 1.0}, {1.0, 2.0});
    CHECK_THROWS_AS(p.trace_b(), InsufficientDataError);
}

TEST_CASE("jets of closed-form nodes agree with Richardson derivatives") {
    auto fam = example_family(3, 1.4, 0.7);
    auto f = [&](double r) { return fam.spec.gamma.eval(r); };
    for (double r : {0.2, 0.55, 0.85}) {
        Jet j = fam.spec.gamma.jet(r);
        CHECK(j.d1 == Approx(oracles::deriv1(f, r)).epsilon(1e-7));
        CHECK(j.d2 == Approx(oracles::deriv2(f, r)).epsilon(1e-5));
    }
}

TEST_CASE("profile arithmetic helpers") {
    auto fam = example_family(3, 1.0, 3.0);
    auto diff = profile_difference(fam.born, fam.born);
    for (double r : {0.1, 0.6, 1.0}) CHECK(diff.eval(r) == Approx(0.0).margin(1e-15));
    auto scaled = scale_profile(fam.born, 4.0);
    CHECK(scaled.eval(0.5) == Approx(4.0 * fam.born.eval(0.5)).epsilon(1e-14));
}

TEST_CASE("bump profiles vanish outside their support") {
    auto bump = fn::smooth_bump(0.5, 0.25, 0.25);
    CHECK(bump->jet(0.55).v == 0.0);
    CHECK(bump->jet(0.25).v == Approx(0.5));
    auto pbump = fn::poly_bump(1.0, 0.25, 0.25, 4);
    CHECK(pbump->jet(0.51).v == 0.0);
    CHECK(pbump->jet(0.25).v == Approx(1.0));
    // C^1 smoothness of the polynomial bump at the edge
    auto f = [&](double r) { return pbump->jet(r).v; };
    CHECK(oracles::deriv1(f, 0.25) == Approx(pbump->jet(0.25).d1).margin(1e-7));
}

TEST_CASE("default grid shape") {
    auto g = default_grid(2048);
    REQUIRE(g.size() == 2048);
    CHECK(g.front() > 0.0);
    CHECK(g.back() == 1.0);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("ellipticity validation") {
    auto fam = example_family(3, 3.0, 1.0);
    CHECK_NOTHROW(validate(fam.spec));
    auto bad = fam.spec;
    bad.K = 1.0001; // far tighter than the actual range of gamma
    CHECK_THROWS_AS(validate(bad), EllipticityError);
}
