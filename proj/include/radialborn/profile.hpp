// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_PROFILE_HPP
#define RADIALBORN_PROFILE_HPP

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "radialborn/errors.hpp"
#include "radialborn/jet.hpp"
#include "radialborn/spline.hpp"

namespace rb {

/// One analytic term c * r^p * (log r)^q with q in {0,1}. Singular terms
/// of a profile are kept in this form so that moments, Laplacians and the
/// volume-potential operator can treat them exactly.
struct PowerTerm {
    double coeff = 0.0;
    double exponent = 0.0;
    bool log_factor = false;
};

/// Smooth radial function node, evaluated together with its first two
/// radial derivatives.
class RadialFn {
public:
    virtual ~RadialFn() = default;
    virtual Jet jet(double r) const = 0;
    virtual bool finite_at_zero() const { return true; }
    double operator()(double r) const { return jet(r).v; }
};

using FnPtr = std::shared_ptr<const RadialFn>;

namespace fn {

class Constant final : public RadialFn {
public:
    explicit Constant(double c) : c_(c) {}
    Jet jet(double) const override { return Jet::constant(c_); }

private:
    double c_;
};

class Power final : public RadialFn {
public:
    Power(double coeff, double exponent) : c_(coeff), p_(exponent) {}
    Jet jet(double r) const override { return c_ * pow_r(r, p_); }
    bool finite_at_zero() const override { return p_ >= 0.0; }

private:
    double c_, p_;
};

class Sum final : public RadialFn {
public:
    Sum(FnPtr a, FnPtr b) : a_(std::move(a)), b_(std::move(b)) {}
    Jet jet(double r) const override { return a_->jet(r) + b_->jet(r); }
    bool finite_at_zero() const override { return a_->finite_at_zero() && b_->finite_at_zero(); }

private:
    FnPtr a_, b_;
};

class Scaled final : public RadialFn {
public:
    Scaled(double c, FnPtr a) : c_(c), a_(std::move(a)) {}
    Jet jet(double r) const override { return c_ * a_->jet(r); }
    bool finite_at_zero() const override { return a_->finite_at_zero(); }

private:
    double c_;
    FnPtr a_;
};

class Shifted final : public RadialFn {
public:
    Shifted(double c, FnPtr a) : c_(c), a_(std::move(a)) {}
    Jet jet(double r) const override { return a_->jet(r) + c_; }
    bool finite_at_zero() const override { return a_->finite_at_zero(); }

private:
    double c_;
    FnPtr a_;
};

class Product final : public RadialFn {
public:
    Product(FnPtr a, FnPtr b) : a_(std::move(a)), b_(std::move(b)) {}
    Jet jet(double r) const override { return a_->jet(r) * b_->jet(r); }
    bool finite_at_zero() const override { return a_->finite_at_zero() && b_->finite_at_zero(); }

private:
    FnPtr a_, b_;
};

class Quotient final : public RadialFn {
public:
    Quotient(FnPtr a, FnPtr b) : a_(std::move(a)), b_(std::move(b)) {}
    Jet jet(double r) const override { return a_->jet(r) / b_->jet(r); }
    // assumes the denominator does not vanish at 0 (elliptic use cases)
    bool finite_at_zero() const override { return a_->finite_at_zero() && b_->finite_at_zero(); }

private:
    FnPtr a_, b_;
};

class Sqrt final : public RadialFn {
public:
    explicit Sqrt(FnPtr a) : a_(std::move(a)) {}
    Jet jet(double r) const override { return sqrt(a_->jet(r)); }
    bool finite_at_zero() const override { return a_->finite_at_zero(); }

private:
    FnPtr a_;
};

class Exp final : public RadialFn {
public:
    explicit Exp(FnPtr a) : a_(std::move(a)) {}
    Jet jet(double r) const override { return exp(a_->jet(r)); }
    bool finite_at_zero() const override { return a_->finite_at_zero(); }

private:
    FnPtr a_;
};

/// Compactly supported C^{p-1} bump A*(1-u^2)^p on |u|<1, u=(r-center)/width.
class PolyBump final : public RadialFn {
public:
    PolyBump(double amplitude, double center, double width, int contact)
        : a_(amplitude), c_(center), w_(width), p_(contact) {
        if (p_ < 1 || w_ <= 0) throw NumericError("PolyBump: invalid shape parameters");
    }
    Jet jet(double r) const override {
        const double u = (r - c_) / w_;
        const double g = 1.0 - u * u;
        if (g <= 0.0) return Jet::constant(0.0);
        const double gp = std::pow(g, p_);
        const double dg = -2.0 * u / w_, d2g = -2.0 / (w_ * w_);
        Jet out;
        out.v = a_ * gp;
        out.d1 = a_ * p_ * gp / g * dg;
        out.d2 = a_ * p_ * (gp / g * d2g + (p_ - 1) * gp / (g * g) * dg * dg);
        return out;
    }

private:
    double a_, c_, w_;
    int p_;
};

/// C-infinity bump A*exp(1 - 1/(1-u^2)) on |u|<1, flat to all orders at the
/// support edge.
class SmoothBump final : public RadialFn {
public:
    SmoothBump(double amplitude, double center, double width)
        : a_(amplitude), c_(center), w_(width) {}
    Jet jet(double r) const override {
        const double u = (r - c_) / w_;
        const double g = 1.0 - u * u;
        if (g <= 1e-12) return Jet::constant(0.0);
        Jet uj{u, 1.0 / w_, 0.0};
        Jet gj = 1.0 - uj * uj;
        return a_ * exp(1.0 - inv(gj));
    }

private:
    double a_, c_, w_;
};

class Sampled final : public RadialFn {
public:
    explicit Sampled(CubicSpline s) : s_(std::move(s)) {}
    Jet jet(double r) const override { return s_.jet(r); }
    const CubicSpline& spline() const { return s_; }

private:
    CubicSpline s_;
};

/// Piecewise polynomial in r (pieces on [breaks[i], breaks[i+1]]).
class PiecewisePoly final : public RadialFn {
public:
    PiecewisePoly(std::vector<double> breaks, std::vector<std::vector<double>> coeffs)
        : breaks_(std::move(breaks)), coeffs_(std::move(coeffs)) {
        if (breaks_.size() != coeffs_.size() + 1 || coeffs_.empty())
            throw SchemaError("piecewise: breaks/coefficient count mismatch");
        for (std::size_t i = 1; i < breaks_.size(); ++i)
            if (!(breaks_[i] > breaks_[i - 1])) throw SchemaError("piecewise: breaks must increase");
    }
    Jet jet(double r) const override {
        std::size_t i = 0;
        while (i + 1 < coeffs_.size() && r > breaks_[i + 1]) ++i;
        const auto& c = coeffs_[i];
        Jet out = Jet::constant(0.0);
        for (std::size_t j = c.size(); j-- > 0;) {
            // Horner in jet arithmetic
            Jet rj = Jet::variable(r);
            out = out * rj + c[j];
        }
        return out;
    }

private:
    std::vector<double> breaks_;
    std::vector<std::vector<double>> coeffs_;
};

inline FnPtr constant(double c) { return std::make_shared<Constant>(c); }
inline FnPtr power(double coeff, double exponent) { return std::make_shared<Power>(coeff, exponent); }
inline FnPtr sum(FnPtr a, FnPtr b) { return std::make_shared<Sum>(std::move(a), std::move(b)); }
inline FnPtr scaled(double c, FnPtr a) { return std::make_shared<Scaled>(c, std::move(a)); }
inline FnPtr shifted(double c, FnPtr a) { return std::make_shared<Shifted>(c, std::move(a)); }
inline FnPtr product(FnPtr a, FnPtr b) { return std::make_shared<Product>(std::move(a), std::move(b)); }
inline FnPtr quotient(FnPtr a, FnPtr b) { return std::make_shared<Quotient>(std::move(a), std::move(b)); }
inline FnPtr sqrt_of(FnPtr a) { return std::make_shared<Sqrt>(std::move(a)); }
inline FnPtr poly_bump(double amplitude, double center, double width, int contact) {
    return std::make_shared<PolyBump>(amplitude, center, width, contact);
}
inline FnPtr smooth_bump(double amplitude, double center, double width) {
    return std::make_shared<SmoothBump>(amplitude, center, width);
}

} // namespace fn

/// A radial function on the closed unit ball: a list of exact power/log
/// terms plus an optional smooth part (closed-form node tree or sampled
/// spline). Carries the ambient dimension d.
class RadialProfile {
public:
    RadialProfile(int d, std::vector<PowerTerm> terms, FnPtr smooth = nullptr,
                  int interp_order = 0)
        : d_(d), terms_(std::move(terms)), smooth_(std::move(smooth)), order_(interp_order) {
        if (d_ < 2) throw SchemaError("RadialProfile: dimension must be >= 2");
    }

    static RadialProfile constant(int d, double c) {
        return RadialProfile(d, {PowerTerm{c, 0.0, false}});
    }
    static RadialProfile power_sum(int d, std::vector<PowerTerm> terms) {
        return RadialProfile(d, std::move(terms));
    }
    static RadialProfile closed_form(int d, FnPtr f) {
        return RadialProfile(d, {}, std::move(f));
    }
    /// Sampled profile; nodes must be strictly increasing in (0,1] with the
    /// last node equal to 1. Only cubic interpolation (order 3) is offered.
    static RadialProfile sampled(int d, std::vector<double> nodes, std::vector<double> values,
                                 int order = 3) {
        if (nodes.empty() || nodes.front() <= 0.0 || std::abs(nodes.back() - 1.0) > 1e-12)
            throw SchemaError("sampled profile: nodes must lie in (0,1] and end at 1");
        if (order != 3) throw SchemaError("sampled profile: only cubic interpolation is supported");
        CubicSpline s(std::move(nodes), std::move(values));
        return RadialProfile(d, {}, std::make_shared<fn::Sampled>(std::move(s)), order);
    }

    int dimension() const { return d_; }
    const std::vector<PowerTerm>& terms() const { return terms_; }
    const FnPtr& smooth() const { return smooth_; }
    int interpolation_order() const { return order_; }
    bool is_sampled() const {
        return smooth_ && dynamic_cast<const fn::Sampled*>(smooth_.get()) != nullptr;
    }

    bool finite_at_zero() const {
        for (const auto& t : terms_)
            if (t.coeff != 0.0 && (t.exponent < 0.0 || t.log_factor)) return false;
        return !smooth_ || smooth_->finite_at_zero();
    }
    bool has_log_singularity() const {
        for (const auto& t : terms_)
            if (t.coeff != 0.0 && t.log_factor && t.exponent <= 0.0) return true;
        return false;
    }

    /// Value and first two radial derivatives at r in (0,1].
    Jet jet(double r) const {
        if (!(r > 0.0)) throw DomainError("RadialProfile::jet requires r > 0");
        Jet out = Jet::constant(0.0);
        for (const auto& t : terms_) {
            if (t.coeff == 0.0) continue;
            Jet p = t.coeff * pow_r(r, t.exponent);
            if (t.log_factor) {
                Jet lg{std::log(r), 1.0 / r, -1.0 / (r * r)};
                p = p * lg;
            }
            out = out + p;
        }
        if (smooth_) out = out + smooth_->jet(r);
        return out;
    }

    /// Evaluation on [0,1]; r=0 is allowed only for profiles with no
    /// origin singularity.
    double eval(double r) const {
        if (r < 0.0 || r > 1.0) throw DomainError("RadialProfile::eval requires r in [0,1]");
        if (r == 0.0) {
            if (!finite_at_zero())
                throw DomainError("evaluation at r=0 of a profile singular at the origin");
            double v = 0.0;
            for (const auto& t : terms_)
                if (t.exponent == 0.0 && !t.log_factor) v += t.coeff;
            if (smooth_) v += smooth_zero_value();
            return v;
        }
        return jet(r).v;
    }
    double operator()(double r) const { return eval(r); }

    /// Boundary trace a(u) = u(1).
    double trace_a() const { return jet(1.0).v; }

    /// Boundary trace b(u) = (1/2) u'(1). Sampled profiles use a one-sided
    /// 4-point finite difference on the outermost nodes.
    double trace_b() const {
        if (const auto* s = sampled_node()) {
            const auto& x = s->spline().nodes();
            const auto& y = s->spline().values();
            if (x.size() < 4)
                throw InsufficientDataError("trace_b: sampled profile needs >= 4 nodes near r=1");
            std::vector<double> xs(x.end() - 4, x.end());
            std::vector<double> ys(y.end() - 4, y.end());
            auto w = fd_weights(1.0, xs, 1);
            double der = 0.0;
            for (int i = 0; i < 4; ++i) der += w[i] * ys[i];
            // singular terms (if any) still contribute analytically
            double terms_d1 = terms_derivative_at_one();
            return 0.5 * (der + terms_d1);
        }
        return 0.5 * jet(1.0).d1;
    }

private:
    const fn::Sampled* sampled_node() const {
        return smooth_ ? dynamic_cast<const fn::Sampled*>(smooth_.get()) : nullptr;
    }
    double terms_derivative_at_one() const {
        double d1 = 0.0;
        for (const auto& t : terms_) d1 += t.log_factor ? t.coeff : t.coeff * t.exponent;
        return d1;
    }
    double smooth_zero_value() const {
        // closed-form nodes are finite at 0 by construction here; evaluate
        // just off the origin to avoid 0*log(0) style indeterminacy
        return smooth_->jet(1e-14).v;
    }

    int d_;
    std::vector<PowerTerm> terms_;
    FnPtr smooth_;
    int order_;
};

/// Wraps a whole profile as a smooth node so profiles can be combined
/// (differences, perturbations) without flattening their structure.
class ProfileFn final : public RadialFn {
public:
    explicit ProfileFn(RadialProfile p) : p_(std::move(p)) {}
    Jet jet(double r) const override { return p_.jet(r); }
    bool finite_at_zero() const override { return p_.finite_at_zero(); }

private:
    RadialProfile p_;
};

inline FnPtr as_fn(const RadialProfile& p) { return std::make_shared<ProfileFn>(p); }

/// a - b as a profile (dimension taken from a).
inline RadialProfile profile_difference(const RadialProfile& a, const RadialProfile& b) {
    return RadialProfile::closed_form(a.dimension(),
                                      fn::sum(as_fn(a), fn::scaled(-1.0, as_fn(b))));
}

/// c * p, keeping the power/log term structure intact.
inline RadialProfile scale_profile(const RadialProfile& p, double c) {
    std::vector<PowerTerm> terms = p.terms();
    for (auto& t : terms) t.coeff *= c;
    FnPtr smooth = p.smooth() ? fn::scaled(c, p.smooth()) : nullptr;
    return RadialProfile(p.dimension(), std::move(terms), std::move(smooth),
                         p.interpolation_order());
}

/// a + b, merging term lists and summing the smooth parts.
inline RadialProfile add_profiles(const RadialProfile& a, const RadialProfile& b) {
    std::vector<PowerTerm> terms = a.terms();
    for (const auto& t : b.terms()) terms.push_back(t);
    FnPtr smooth;
    if (a.smooth() && b.smooth()) smooth = fn::sum(a.smooth(), b.smooth());
    else if (a.smooth()) smooth = a.smooth();
    else if (b.smooth()) smooth = b.smooth();
    return RadialProfile(a.dimension(), std::move(terms), std::move(smooth));
}

/// Singularity structure of the Born approximation at the origin:
/// -c0 log|x| + sum_j c_j |x|^{-2 kappa_j} + regular part.
struct SingularDecomposition {
    double c0 = 0.0;
    std::vector<std::pair<double, double>> terms; // (kappa_j, c_j), kappa increasing
    std::optional<RadialProfile> regular;
    double fit_residual = 0.0;
    bool conditioning_warning = false;
};

} // namespace rb

#endif
