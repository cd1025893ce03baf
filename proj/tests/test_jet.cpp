#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "certiquad/corpus.hpp"
#include "certiquad/jet.hpp"

using namespace certiquad;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Central differences as the independent check on the jet algebra.
template <typename F>
double fd1(F&& f, double t, double h) {
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

template <typename F>
double fd2(F&& f, double t, double h) {
    return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
}

}  // namespace

TEST_CASE("seeding") {
    const Jet2 t = Jet2::variable(3.0);
    CHECK(t.v == 3.0);
    CHECK(t.d1 == 1.0);
    CHECK(t.d2 == 0.0);
    const Jet2 c = Jet2::constant(7.5);
    CHECK(c.d1 == 0.0);
    CHECK(c.d2 == 0.0);
}

TEST_CASE("product rule against finite differences") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const double t = rng.uniform(-2.0, 2.0);
        const double c1 = rng.uniform(-3.0, 3.0), c2 = rng.uniform(-3.0, 3.0);
        auto f = [&](double s) { return (s * s + c1) * std::sin(c2 * s); };
        const Jet2 x = Jet2::variable(t);
        const Jet2 j = (x * x + Jet2::constant(c1)) * sin(Jet2::constant(c2) * x);
        CHECK(j.v == f(t));
        CHECK_THAT(j.d1, WithinAbs(fd1(f, t, 1e-5), 1e-6 * (1.0 + std::abs(j.d1))));
        CHECK_THAT(j.d2, WithinAbs(fd2(f, t, 1e-5), 1e-4 * (1.0 + std::abs(j.d2))));
    }
}

TEST_CASE("quotient rule") {
    const double t = 0.7;
    const Jet2 x = Jet2::variable(t);
    const Jet2 q = (x * x) / (Jet2::constant(1.0) + x);
    // f = t^2/(1+t): f' = (t^2+2t)/(1+t)^2, f'' = 2/(1+t)^3
    CHECK_THAT(q.v, WithinRel(t * t / (1.0 + t), 1e-15));
    CHECK_THAT(q.d1, WithinRel((t * t + 2.0 * t) / ((1.0 + t) * (1.0 + t)), 1e-14));
    CHECK_THAT(q.d2, WithinRel(2.0 / std::pow(1.0 + t, 3.0), 1e-14));
}

TEST_CASE("chain rules for the function library") {
    const double t = 0.83;
    const Jet2 x = Jet2::variable(t);

    const Jet2 s = sin(x * x);
    CHECK_THAT(s.d1, WithinRel(2.0 * t * std::cos(t * t), 1e-14));
    CHECK_THAT(s.d2, WithinRel(2.0 * std::cos(t * t) - 4.0 * t * t * std::sin(t * t), 1e-13));

    const Jet2 l = log(x);
    CHECK_THAT(l.d1, WithinRel(1.0 / t, 1e-15));
    CHECK_THAT(l.d2, WithinRel(-1.0 / (t * t), 1e-15));

    const Jet2 r = sqrt(x);
    CHECK_THAT(r.d1, WithinRel(0.5 / std::sqrt(t), 1e-15));
    CHECK_THAT(r.d2, WithinRel(-0.25 / std::pow(t, 1.5), 1e-14));

    const Jet2 e = exp(x);
    CHECK(e.v == e.d1);
    CHECK(e.v == e.d2);
}

TEST_CASE("abs takes the slope from the non-negative side at the kink") {
    const Jet2 at_zero = abs(Jet2::variable(0.0));
    CHECK(at_zero.v == 0.0);
    CHECK(at_zero.d1 == 1.0);
    CHECK(at_zero.d2 == 0.0);
    CHECK(abs(Jet2::variable(-2.0)).d1 == -1.0);
    CHECK(abs(Jet2::variable(3.0)).d1 == 1.0);
}

TEST_CASE("integer powers by repeated multiplication accept negative bases") {
    const Jet2 p = powi_positive(Jet2::variable(-1.5), 3L);
    CHECK_THAT(p.v, WithinRel(-3.375, 1e-15));
    CHECK_THAT(p.d1, WithinRel(3.0 * 2.25, 1e-15));
    CHECK_THAT(p.d2, WithinRel(6.0 * -1.5, 1e-15));
    // value path identical to the scalar computation
    CHECK(p.v == powi_positive(-1.5, 3L));
}
