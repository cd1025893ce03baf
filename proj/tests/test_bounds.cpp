#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "certiquad/bounds.hpp"
#include "certiquad/corpus.hpp"
#include "certiquad/integrate.hpp"
#include "certiquad/kernel.hpp"
#include "certiquad/stats.hpp"

using namespace certiquad;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Hand-derived stats for f = t^2 on [0, 1]: f' = 2t, f'' = 2.
DerivativeStats square_stats() {
    DerivativeStats st;
    st.a = 0.0;
    st.b = 1.0;
    st.S = 1.0;
    st.gamma = 0.0;
    st.Gamma = 2.0;
    st.l2_fprime = std::sqrt(4.0 / 3.0);
    st.l2_fsecond = 2.0;
    st.l1_fprime = 1.0;
    st.has_fprime = true;
    st.has_fsecond = true;
    // ||2t||_p on [0,1] = 2/(p+1)^{1/p}
    st.lp_fprime = [](double p) { return 2.0 / std::pow(p + 1.0, 1.0 / p); };
    return st;
}

DerivativeStats linear_stats() {
    DerivativeStats st;
    st.a = 0.0;
    st.b = 1.0;
    st.S = 1.0;
    st.gamma = 1.0;
    st.Gamma = 1.0;
    st.l2_fprime = 1.0;
    st.l2_fsecond = 0.0;
    st.l1_fprime = 1.0;
    st.has_fprime = true;
    st.has_fsecond = true;
    st.lp_fprime = [](double) { return 1.0; };
    return st;
}

// Antiderivative of the kernel: its derivative is K(x, .) itself, which is
// the Cauchy-Schwarz equality case of the derivative-variance bound.
Integrand kernel_antiderivative(const IntervalCtx& c) {
    Integrand g;
    g.f = [c](double t) {
        const double m = c.midpoint();
        if (t <= c.x) return 0.5 * (t - c.a) * (t - c.a);
        if (t <= c.reflected())
            return 0.5 * (c.x - c.a) * (c.x - c.a) +
                   0.5 * ((t - m) * (t - m) - (c.x - m) * (c.x - m));
        return 0.5 * (t - c.b) * (t - c.b);
    };
    g.df = [c](double t) { return kernel_eval(c, t); };
    g.kinks = {c.x, c.reflected()};
    return g;
}

}  // namespace

TEST_CASE("slope bounds at the quarter point") {
    const DerivativeStats st = square_stats();
    const Th21Bounds at_quarter = bound_th21({0.0, 1.0, 0.25}, st);
    CHECK(at_quarter.rhs_gamma == 0.25);
    CHECK(at_quarter.rhs_Gamma == 0.25);

    const Th21Bounds at_mid = bound_th21({0.0, 1.0, 0.5}, st);
    CHECK(at_mid.rhs_gamma == 0.5);
    CHECK(at_mid.rhs_Gamma == 0.5);
    CHECK(1.0 / 12.0 <= at_mid.rhs_gamma);  // companion residual of t^2 at x = 1/2

    const Th21Bounds linear = bound_th21({0.0, 1.0, 0.25}, linear_stats());
    CHECK(linear.rhs_gamma == 0.0);
    CHECK(linear.rhs_Gamma == 0.0);
}

TEST_CASE("slope bounds reject gamma > S or S > Gamma") {
    DerivativeStats st = square_stats();
    st.gamma = 1.5;
    CHECK_THROWS_AS(bound_th21({0.0, 1.0, 0.25}, st), std::domain_error);
    st = square_stats();
    st.Gamma = 0.5;
    CHECK_THROWS_AS(bound_th21({0.0, 1.0, 0.25}, st), std::domain_error);
}

TEST_CASE("curvature bound closed forms") {
    const DerivativeStats st = square_stats();
    CHECK_THAT(bound_th22({0.0, 1.0, 0.25}, st),
               WithinRel(1.0 / (2.0 * std::sqrt(3.0) * std::numbers::pi), 1e-14));
    CHECK_THAT(bound_th22({0.0, 1.0, 0.25}, st), WithinAbs(0.0918881, 1e-7));
    CHECK(bound_th22({0.0, 1.0, 0.25}, linear_stats()) == 0.0);
    CHECK_THAT(bound_th22({0.0, 1.0, 0.0}, st),
               WithinRel(2.0 / std::numbers::pi * std::sqrt(1.0 / 12.0), 1e-14));
    CHECK_THAT(bound_th22({0.0, 1.0, 0.0}, st), WithinAbs(0.18377, 1e-5));
}

TEST_CASE("derivative-variance bound closed forms") {
    const DerivativeStats st = square_stats();
    CHECK_THAT(sigma_fprime(st), WithinRel(1.0 / 3.0, 1e-15));
    CHECK_THAT(bound_th23({0.0, 1.0, 0.25}, st), WithinRel(1.0 / 12.0, 1e-14));
    CHECK(1.0 / 48.0 <= 1.0 / 12.0);
    CHECK_THAT(bound_th23({0.0, 1.0, 0.5}, st), WithinRel(1.0 / 6.0, 1e-14));
    CHECK_THAT(bound_th23({0.0, 1.0, 0.25}, linear_stats()), WithinAbs(0.0, 1e-9));
}

TEST_CASE("sigma clamps noise and rejects genuine inconsistency") {
    DerivativeStats st = linear_stats();
    st.l2_fprime = std::sqrt(1.0 - 1e-14);  // tiny negative sigma: noise
    CHECK(sigma_fprime(st) == 0.0);
    st.l2_fprime = 0.5;  // sigma = -0.75: inconsistent
    CHECK_THROWS_AS(sigma_fprime(st), std::domain_error);
}

TEST_CASE("baseline bounds") {
    const DerivativeStats st = square_stats();
    const IntervalCtx c{0.0, 1.0, 0.25};
    const DragomirBounds dr = bound_dragomir(c, st, 2.0);
    CHECK(dr.rhs_inf == 0.25);
    CHECK(dr.rhs_1 == 0.25);
    CHECK_THAT(dr.rhs_p, WithinRel(1.0 / 6.0, 1e-14));
    CHECK_THROWS_AS(bound_dragomir(c, st, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bound_dragomir(c, st, 0.5), std::invalid_argument);

    const DragomirBounds lin = bound_dragomir(c, linear_stats(), 2.0);
    CHECK(lin.rhs_inf == 0.125);

    CHECK(bound_alomari(c, st) == 0.125);
    CHECK(bound_alomari(c, linear_stats()) == 0.0);
    CHECK(bound_alomari({0.0, 1.0, 0.5}, st) == 0.25);
}

TEST_CASE("tightest-bound selection for t^2") {
    const Integrand g = make_polynomial_integrand({0.0, 0.0, 1.0});
    const IntervalCtx c{0.0, 1.0, 0.25};
    const BoundReport rep = best_bound(g, c, square_stats(), 1.0 / 3.0);
    CHECK_THAT(rep.lhs, WithinAbs(1.0 / 48.0, 1e-15));
    CHECK(rep.tightest == BoundId::th23);
    CHECK(bound_name(rep.tightest) == "th23");
    for (const BoundEntry& e : rep.entries) {
        REQUIRE(e.applicable);
        REQUIRE(rep.lhs <= e.rhs + 1e-12);
    }
    // th23 (1/12) < th22 (0.0919) < alomari (1/8) < dragomir_p (1/6) < 1/4
    CHECK(rep.entries[0].rhs < rep.entries[1].rhs);
    CHECK(rep.entries[1].rhs < rep.entries[4].rhs);
}

TEST_CASE("linear f ties at zero and resolves by id order") {
    const Integrand g = make_polynomial_integrand({0.0, 1.0});
    const BoundReport rep = best_bound(g, {0.0, 1.0, 0.3}, linear_stats(), 0.5);
    CHECK(rep.lhs == 0.0);
    CHECK(rep.entries[static_cast<int>(BoundId::th23)].rhs == 0.0);
    CHECK(rep.entries[static_cast<int>(BoundId::th22)].rhs == 0.0);
    CHECK(rep.tightest == BoundId::th23);
}

TEST_CASE("bounds hold for sin through the full estimation pipeline") {
    const Integrand g = make_expr_integrand(parse("sin(t)"));
    const IntervalCtx c{0.0, 1.0, 0.25};
    const double mean = integrate(g, 0.0, 1.0, 1e-12).value;
    const DerivativeStats st = estimate_stats(g, 0.0, 1.0);
    const BoundReport rep = best_bound(g, c, st, mean);
    for (const BoundEntry& e : rep.entries) {
        REQUIRE(e.applicable);
        REQUIRE(rep.lhs <= e.rhs + 1e-7 * (1.0 + e.rhs));
    }
}

TEST_CASE("missing second derivative degrades th22 to not-applicable") {
    const Integrand g = make_native_integrand([](double t) { return t * t; },
                                              [](double t) { return 2.0 * t; });
    const DerivativeStats st = estimate_stats(g, 0.0, 1.0);
    const BoundReport rep = best_bound(g, {0.0, 1.0, 0.25}, st, 1.0 / 3.0);
    CHECK_FALSE(rep.entries[static_cast<int>(BoundId::th22)].applicable);
    CHECK(rep.entries[static_cast<int>(BoundId::th23)].applicable);
    CHECK(rep.tightest == BoundId::th23);
}

TEST_CASE("every bound factor is minimized at the quarter point") {
    const DerivativeStats st = square_stats();
    Rng rng(21);
    for (int trial = 0; trial < 5; ++trial) {
        const double a = rng.uniform(-2.0, 2.0);
        const double b = a + rng.uniform(0.5, 4.0);
        DerivativeStats stab = st;
        stab.a = a;
        stab.b = b;
        const double mid = 0.5 * (a + b);
        const double quarter = IntervalCtx{a, b, a}.quarter_point();

        double best21 = 1e300, arg21 = a;
        double best22 = 1e300, arg22 = a;
        double best23 = 1e300, arg23 = a;
        for (int k = 0; k <= 1000; ++k) {
            const double x = a + (mid - a) * k / 1000.0;
            const IntervalCtx c{a, b, x};
            const double v21 = bound_th21(c, stab).rhs_Gamma;
            const double v22 = bound_th22(c, stab);
            const double v23 = bound_th23(c, stab);
            if (v21 < best21) { best21 = v21; arg21 = x; }
            if (v22 < best22) { best22 = v22; arg22 = x; }
            if (v23 < best23) { best23 = v23; arg23 = x; }
        }
        const double grid = (mid - a) / 1000.0;
        CHECK_THAT(arg21, WithinAbs(quarter, grid + 1e-12));
        CHECK_THAT(arg22, WithinAbs(quarter, grid + 1e-12));
        CHECK_THAT(arg23, WithinAbs(quarter, grid + 1e-12));
    }
}

TEST_CASE("quarter-point bounds are exactly half their endpoint forms") {
    Rng rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = rng.uniform(-2.0, 2.0);
        const double b = a + rng.uniform(0.5, 4.0);
        // closed-form stats for f = t^2 on [a, b]
        DerivativeStats st;
        st.a = a;
        st.b = b;
        st.S = a + b;
        st.gamma = 2.0 * a;
        st.Gamma = 2.0 * b;
        st.l2_fprime = std::sqrt(4.0 / 3.0 * (b * b * b - a * a * a));
        st.l2_fsecond = 2.0 * std::sqrt(b - a);
        st.l1_fprime = a < 0.0 && b > 0.0 ? a * a + b * b : std::abs(b * b - a * a);
        st.has_fprime = true;
        st.has_fsecond = true;
        const IntervalCtx quarter{a, b, IntervalCtx{a, b, a}.quarter_point()};
        const IntervalCtx endpoint{a, b, a};
        const double w = b - a;

        // slope form: bracket w/4 vs w/2
        CHECK_THAT(2.0 * kernel_max_abs(quarter), WithinRel(kernel_max_abs(endpoint), 1e-14));

        // curvature form: w^{3/2}/(4 sqrt(3) pi) vs w^{3/2}/(2 sqrt(3) pi)
        const double t22q = bound_th22(quarter, st);
        CHECK_THAT(t22q, WithinRel(std::pow(w, 1.5) / (4.0 * std::sqrt(3.0) * std::numbers::pi) *
                                       st.l2_fsecond,
                                   1e-14));
        CHECK_THAT(2.0 * t22q, WithinRel(bound_th22(endpoint, st), 1e-14));

        // variance form: w^{1/2}/(4 sqrt(3)) vs w^{1/2}/(2 sqrt(3))
        const double t23q = bound_th23(quarter, st);
        CHECK_THAT(t23q, WithinRel(std::sqrt(w) / (4.0 * std::sqrt(3.0)) *
                                       std::sqrt(sigma_fprime(st)),
                                   1e-14));
        CHECK_THAT(2.0 * t23q, WithinRel(bound_th23(endpoint, st), 1e-14));
    }
}

TEST_CASE("symmetric f: the companion residual collapses to the one-point form") {
    // f = (t - (a+b)/2)^2 is symmetric about the interval midpoint
    const double a = -0.5, b = 1.5;
    const double m = 0.5 * (a + b);
    const Integrand g = make_native_integrand(
        [m](double t) { return (t - m) * (t - m); }, [m](double t) { return 2.0 * (t - m); },
        [](double) { return 2.0; });
    const double mean = integrate(g, a, b, 1e-12).value / (b - a);
    Rng rng(23);
    for (int k = 0; k < 20; ++k) {
        const double x = rng.uniform(a, m);
        const IntervalCtx c{a, b, x};
        // f(a+b-x) = f(x) up to the rounding of the reflected point
        CHECK_THAT(companion_lhs(g.f, c, mean),
                   WithinRel(std::abs(g.f(x) - mean), 1e-14));
        // the symmetric variant reuses the same right-hand sides
        const DerivativeStats st = estimate_stats(g, a, b);
        REQUIRE(std::abs(g.f(x) - mean) <= bound_th23(c, st) + 1e-9);
        REQUIRE(std::abs(g.f(x) - mean) <= bound_th22(c, st) + 1e-9);
        REQUIRE(std::abs(g.f(x) - mean) <= bound_th21(c, st).rhs_Gamma + 1e-9);
    }
}

TEST_CASE("kernel antiderivative attains the derivative-variance bound") {
    Rng rng(24);
    for (int trial = 0; trial < 10; ++trial) {
        const double a = rng.uniform(-2.0, 2.0);
        const double b = a + rng.uniform(0.5, 3.0);
        const double x = rng.uniform(a, 0.5 * (a + b));
        const IntervalCtx c{a, b, x};
        const Integrand g = kernel_antiderivative(c);
        const double mean = integrate(g, a, b, 1e-13).value / c.width();
        const DerivativeStats st = estimate_stats(g, a, b);
        const double lhs = companion_lhs(g.f, c, mean);
        const double rhs = bound_th23(c, st);
        REQUIRE(lhs <= rhs + 1e-7 * (1.0 + rhs));
        REQUIRE(lhs / rhs > 1.0 - 1e-6);  // equality case: f' proportional to K
    }
}
