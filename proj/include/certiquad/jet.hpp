#pragma once

#include <cmath>

namespace certiquad {

/// Second-order forward-mode AD value: carries (f, f', f'') through
/// arithmetic. Seed the independent variable with Jet2::variable(t),
/// constants with Jet2::constant(c).
///
/// The value component is computed by exactly the same floating-point
/// operations a plain evaluation would use, so `.v` is bit-identical to
/// evaluating without derivatives.
struct Jet2 {
    double v  = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;

    static constexpr Jet2 variable(double t) { return {t, 1.0, 0.0}; }
    static constexpr Jet2 constant(double c) { return {c, 0.0, 0.0}; }

    friend constexpr bool operator==(const Jet2&, const Jet2&) = default;
};

constexpr Jet2 operator+(const Jet2& a, const Jet2& b) {
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}

constexpr Jet2 operator-(const Jet2& a, const Jet2& b) {
    return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}

constexpr Jet2 operator-(const Jet2& a) { return {-a.v, -a.d1, -a.d2}; }

// (fg)'' = f''g + 2f'g' + fg''
constexpr Jet2 operator*(const Jet2& a, const Jet2& b) {
    return {a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

// Solve f = q*g for the derivatives of q; avoids cancellation-heavy
// closed forms with g^3 denominators.
constexpr Jet2 operator/(const Jet2& a, const Jet2& b) {
    const double q  = a.v / b.v;
    const double q1 = (a.d1 - q * b.d1) / b.v;
    const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
    return {q, q1, q2};
}

/// Applies a scalar map h with derivatives (h, h', h'') at u.v to the jet u.
constexpr Jet2 chain(const Jet2& u, double h, double dh, double d2h) {
    return {h, dh * u.d1, d2h * u.d1 * u.d1 + dh * u.d2};
}

inline Jet2 sin(const Jet2& u) {
    const double s = std::sin(u.v), c = std::cos(u.v);
    return chain(u, s, c, -s);
}

inline Jet2 cos(const Jet2& u) {
    const double s = std::sin(u.v), c = std::cos(u.v);
    return chain(u, c, -s, -c);
}

inline Jet2 exp(const Jet2& u) {
    const double e = std::exp(u.v);
    return chain(u, e, e, e);
}

inline Jet2 log(const Jet2& u) {
    return chain(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v));
}

inline Jet2 sqrt(const Jet2& u) {
    const double s = std::sqrt(u.v);
    return chain(u, s, 0.5 / s, -0.25 / (s * s * s));
}

// Subgradient convention: at the kink the slope is taken from the
// non-negative side.
constexpr Jet2 abs(const Jet2& u) {
    const double sign = u.v >= 0.0 ? 1.0 : -1.0;
    return {sign * u.v, sign * u.d1, sign * u.d2};
}

/// u^k for integer k by square-and-multiply; valid for any base, including
/// negative and zero (k >= 1). Mirrored bit-for-bit by powi(double, k).
template <typename T>
constexpr T powi_positive(const T& u, long k) {
    T base = u;
    bool have = false;
    T acc{};
    for (long e = k; e > 0; e >>= 1) {
        if (e & 1) {
            acc = have ? acc * base : base;
            have = true;
        }
        if (e > 1) base = base * base;
    }
    return acc;
}

/// Constant real exponent: c * u^(c-1) chain rule. Requires u.v > 0 when c
/// is not an integer (checked by the caller).
inline Jet2 pow_const(const Jet2& u, double c) {
    const double h = std::pow(u.v, c);
    const double dh = c * std::pow(u.v, c - 1.0);
    const double d2h = c * (c - 1.0) * std::pow(u.v, c - 2.0);
    return chain(u, h, dh, d2h);
}

}  // namespace certiquad
