#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace certiquad {

/// The triple (a, b, x) every pointwise bound is stated on. The evaluation
/// point x lives in the left half [a, (a+b)/2]; the partner point a+b-x is
/// derived, not stored.
struct IntervalCtx {
    double a;
    double b;
    double x;

    double midpoint() const { return 0.5 * (a + b); }
    double width() const { return b - a; }
    // Minimizer of every x-dependent bound factor.
    double quarter_point() const { return 0.25 * (3.0 * a + b); }
    double reflected() const { return a + b - x; }
};

inline bool ctx_valid(const IntervalCtx& c) {
    return c.a < c.b && c.a <= c.x && c.x <= c.midpoint();
}

/// Checked constructor; throws std::invalid_argument when a >= b or x is
/// outside [a, (a+b)/2].
inline IntervalCtx make_ctx(double a, double b, double x) {
    IntervalCtx c{a, b, x};
    if (!(a < b)) throw std::invalid_argument("interval requires a < b");
    if (!(a <= x && x <= c.midpoint()))
        throw std::invalid_argument("x must lie in [a, (a+b)/2]");
    return c;
}

// ---------------------------------------------------------------------------
// Peano-type kernel
//
//   K(x,t) = t - a         on [a, x]
//            t - (a+b)/2   on (x, a+b-x]
//            t - b         on (a+b-x, b]
//
// Its inner product with f' reproduces the two-point companion error, and
// all closed-form functionals below feed the bound evaluations.
// ---------------------------------------------------------------------------

inline double kernel_eval(const IntervalCtx& c, double t) {
    if (t < c.a || t > c.b) throw std::domain_error("kernel argument outside [a, b]");
    if (t <= c.x) return t - c.a;
    if (t <= c.reflected()) return t - c.midpoint();
    return t - c.b;
}

/// (1/(b-a)) * integral of K over [a, b]. The three pieces integrate to
/// (x-a)^2/2, 0 and -(x-a)^2/2, so the closed form is exactly zero.
inline double kernel_mean(const IntervalCtx& c) {
    const double u = c.x - c.a;
    const double first = 0.5 * u * u;
    const double middle = 0.0;  // symmetric about the interval midpoint
    const double last = -0.5 * u * u;
    return (first + middle + last) / c.width();
}

/// max over t of |K(x,t)| = max{x-a, (a+b)/2-x}, in the fused form
/// (b-a)/4 + |x-(3a+b)/4| that is exact at the quarter point.
inline double kernel_max_abs(const IntervalCtx& c) {
    return 0.25 * c.width() + std::abs(c.x - c.quarter_point());
}

/// integral of K(x,t)^2 over [a, b] = [(b-a)^2/48 + (x-(3a+b)/4)^2] * (b-a).
inline double kernel_l2_sq(const IntervalCtx& c) {
    const double w = c.width();
    const double d = c.x - c.quarter_point();
    return (w * w / 48.0 + d * d) * w;
}

/// |(f(x)+f(a+b-x))/2 - mean| where mean = (1/(b-a)) * integral of f.
/// This is the left-hand side of every pointwise inequality.
inline double companion_lhs(const std::function<double(double)>& f, const IntervalCtx& c,
                            double mean) {
    return std::abs(0.5 * (f(c.x) + f(c.reflected())) - mean);
}

}  // namespace certiquad
