// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_CONDUCTIVITY_HPP
#define RADIALBORN_CONDUCTIVITY_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "radialborn/calculus.hpp"
#include "radialborn/constants.hpp"
#include "radialborn/grid.hpp"
#include "radialborn/profile.hpp"

namespace rb {

/// Parameters of the explicit conductivity family gamma_{d,mu,nu}.
struct FamilyParams {
    double mu = 1.0;
    double nu = 1.0;
};

/// Declarative description of a radial conductivity: the profile plus the
/// ellipticity bound K, a Sobolev budget N and integrability exponent p.
struct ConductivitySpec {
    int d = 3;
    RadialProfile gamma;
    double K = 2.0;              // K^{-1} <= gamma <= K
    double N = 10.0;             // declared bound on ||gamma||_{W^{2,p}}
    double p = std::numeric_limits<double>::infinity(); // p > d/2
    std::optional<FamilyParams> family;

    double trace_a() const { return gamma.trace_a(); }
    double trace_b() const { return gamma.trace_b(); }
};

/// Checks K^{-1} <= gamma <= K on a verification grid and p > d/2.
inline void validate(const ConductivitySpec& spec, int grid_n = 512) {
    require_dimension(spec.d);
    if (!(spec.K > 1.0)) throw SchemaError("conductivity: ellipticity bound K must be > 1");
    if (!(spec.p > 0.5 * spec.d)) throw SchemaError("conductivity: need p > d/2");
    for (double r : default_grid(grid_n)) {
        const double g = spec.gamma.eval(r);
        if (!(g >= 1.0 / spec.K - 1e-12 && g <= spec.K + 1e-12))
            throw EllipticityError("conductivity violates its ellipticity bounds at r=" +
                                   std::to_string(r));
    }
}

/// Smallest K (with a small margin) bounding the profile on the grid.
inline double measured_ellipticity(const RadialProfile& gamma, int grid_n = 512) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double r : default_grid(grid_n)) {
        const double g = gamma.eval(r);
        lo = std::min(lo, g);
        hi = std::max(hi, g);
    }
    if (!(lo > 0.0)) throw EllipticityError("profile is not a conductivity: min <= 0");
    return 1.0001 * std::max({hi, 1.0 / lo, 1.0 + 1e-9});
}

struct ExampleFamily {
    ConductivitySpec spec;
    RadialProfile born;      // closed-form gamma^B
    RadialProfile potential; // closed-form V = Delta sqrt(gamma) / sqrt(gamma)
    RadialProfile born_potential; // closed-form v^B = 2(nu^2-mu^2) r^{2(nu-1)}
};

/// The explicit family gamma_{d,mu,nu} = rho^2 with
///   rho = ( 2 mu / (1 + alpha r^{2 mu}) + nu_d - mu ) / (nu + nu_d),
///   alpha = (mu - nu)/(mu + nu),
/// together with its closed-form Born approximation. (d,nu)=(2,0) is the
/// degenerate member and is rejected.
inline ExampleFamily example_family(int d, double mu, double nu) {
    require_dimension(d);
    if (!(mu > 0.0) || nu < 0.0) throw DegenerateFamilyError("example family needs mu > 0, nu >= 0");
    if (d == 2 && nu == 0.0)
        throw DegenerateFamilyError("gamma_{2,mu,0} is a degenerate conductivity");
    const double nd = nu_d(d);
    const double alpha = (mu - nu) / (mu + nu);
    // rho = s / (1 + alpha r^{2mu}) + t
    const double s = 2.0 * mu / (nu + nd);
    const double t = (nd - mu) / (nu + nd);
    FnPtr denom = fn::shifted(1.0, fn::power(alpha, 2.0 * mu));
    FnPtr rho = fn::shifted(t, fn::quotient(fn::constant(s), denom));
    FnPtr gamma_fn = fn::product(rho, rho);
    RadialProfile gamma = RadialProfile::closed_form(d, gamma_fn);

    // V = -8 mu^2 alpha r^{2(mu-1)} / (1 + alpha r^{2mu})^2
    FnPtr vfn = fn::quotient(fn::power(-8.0 * mu * mu * alpha, 2.0 * (mu - 1.0)),
                             fn::product(denom, denom));
    RadialProfile potential = RadialProfile::closed_form(d, vfn);

    // v^B = 2 (nu^2 - mu^2) r^{2(nu-1)}
    RadialProfile vb = RadialProfile::power_sum(
        d, {PowerTerm{2.0 * (nu * nu - mu * mu), 2.0 * (nu - 1.0), false}});

    RadialProfile born = RadialProfile::constant(d, 1.0);
    if (nu > 0.0) {
        const double c = (nu * nu - mu * mu) / (nu * (nu + nd));
        born = RadialProfile::power_sum(d, {PowerTerm{1.0 - c, 0.0, false},
                                            PowerTerm{c, 2.0 * nu, false}});
    } else {
        // nu = 0, d >= 3: logarithmic singularity at the origin
        born = RadialProfile::power_sum(d, {PowerTerm{1.0, 0.0, false},
                                            PowerTerm{-2.0 * mu * mu / nd, 0.0, true}});
    }

    ExampleFamily out{ConductivitySpec{d, gamma, 2.0, 10.0,
                                       std::numeric_limits<double>::infinity(), {}},
                      born, potential, vb};
    out.spec.family = FamilyParams{mu, nu};
    out.spec.K = measured_ellipticity(gamma);
    out.spec.p = mu >= 1.0 ? std::numeric_limits<double>::infinity() : d;
    out.spec.N = norm_sobolev(gamma, 0, 1.0) + norm_sobolev(gamma, 1, 1.0) +
                 norm_sobolev(gamma, 2, 1.0) + 1.0;
    return out;
}

/// Schroedinger potential V = Delta(sqrt(gamma)) / sqrt(gamma) of a
/// conductivity. Families use their closed form; generic profiles
/// differentiate through jets.
inline RadialProfile conductivity_to_potential(const ConductivitySpec& spec) {
    if (spec.family) return example_family(spec.d, spec.family->mu, spec.family->nu).potential;
    class PotentialFn final : public RadialFn {
    public:
        PotentialFn(RadialProfile g, int d) : g_(std::move(g)), d_(d) {}
        Jet jet(double r) const override {
            auto v = [&](double x) {
                Jet gj = g_.jet(x);
                if (!(gj.v > 0.0)) throw EllipticityError("conductivity touches zero");
                Jet s = sqrt(gj);
                return (s.d2 + (d_ - 1) * s.d1 / x) / s.v;
            };
            const double h = std::min(std::max(1e-5 * r, 1e-7), 0.5 * r);
            const double vm = v(r - h), v0 = v(r), vp = v(r + h);
            return {v0, (vp - vm) / (2 * h), (vp - 2 * v0 + vm) / (h * h)};
        }
        bool finite_at_zero() const override { return false; }

    private:
        RadialProfile g_;
        int d_;
    };
    return RadialProfile::closed_form(spec.d,
                                      std::make_shared<PotentialFn>(spec.gamma, spec.d));
}

} // namespace rb

#endif
