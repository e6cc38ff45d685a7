// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_JET_HPP
#define RADIALBORN_JET_HPP

#include <cmath>

namespace rb {

/// Second-order jet (value, first and second derivative) propagated
/// through arithmetic, so closed-form profiles expose exact radial
/// derivatives without symbolic machinery.
struct Jet {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;

    static Jet constant(double c) { return {c, 0.0, 0.0}; }
    /// Jet of the identity coordinate r.
    static Jet variable(double r) { return {r, 1.0, 0.0}; }
};

inline Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
inline Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
inline Jet operator-(const Jet& a) { return {-a.v, -a.d1, -a.d2}; }
inline Jet operator*(double c, const Jet& a) { return {c * a.v, c * a.d1, c * a.d2}; }
inline Jet operator*(const Jet& a, double c) { return c * a; }
inline Jet operator+(const Jet& a, double c) { return {a.v + c, a.d1, a.d2}; }
inline Jet operator+(double c, const Jet& a) { return a + c; }
inline Jet operator-(const Jet& a, double c) { return {a.v - c, a.d1, a.d2}; }
inline Jet operator-(double c, const Jet& a) { return {c - a.v, -a.d1, -a.d2}; }

inline Jet operator*(const Jet& a, const Jet& b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

inline Jet inv(const Jet& a) {
    const double iv = 1.0 / a.v;
    const double d1 = -a.d1 * iv * iv;
    return {iv, d1, (2.0 * a.d1 * a.d1 * iv - a.d2) * iv * iv};
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * inv(b); }
inline Jet operator/(const Jet& a, double c) { return (1.0 / c) * a; }
inline Jet operator/(double c, const Jet& a) { return c * inv(a); }

inline Jet sqrt(const Jet& a) {
    const double s = std::sqrt(a.v);
    return {s, 0.5 * a.d1 / s, 0.5 * a.d2 / s - 0.25 * a.d1 * a.d1 / (s * s * s)};
}

inline Jet exp(const Jet& a) {
    const double e = std::exp(a.v);
    return {e, e * a.d1, e * (a.d2 + a.d1 * a.d1)};
}

inline Jet log(const Jet& a) {
    const double iv = 1.0 / a.v;
    return {std::log(a.v), a.d1 * iv, a.d2 * iv - a.d1 * a.d1 * iv * iv};
}

/// Jet of r^p at r > 0 (p arbitrary real).
inline Jet pow_r(double r, double p) {
    if (p == 0.0) return Jet::constant(1.0);
    const double v = std::pow(r, p);
    return {v, p * v / r, p * (p - 1.0) * v / (r * r)};
}

} // namespace rb

#endif
