#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "certiquad/corpus.hpp"
#include "certiquad/expr.hpp"

using namespace certiquad;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Random expression built from total operations only (no poles or log/sqrt
// domain edges), so it can be evaluated anywhere.
ExprPtr random_total_expr(Rng& rng, int depth) {
    if (depth == 0) {
        switch (rng.uniform_int(0, 3)) {
            case 0: return parse("t");
            case 1: return parse(detail::format_double(rng.uniform(-3.0, 3.0)));
            case 2: return parse("pi");
            default: return parse("e");
        }
    }
    const ExprPtr a = random_total_expr(rng, depth - 1);
    const ExprPtr b = random_total_expr(rng, depth - 1);
    switch (rng.uniform_int(0, 7)) {
        case 0: return parse(unparse(a) + "+" + unparse(b));
        case 1: return parse(unparse(a) + "-(" + unparse(b) + ")");
        case 2: return parse("(" + unparse(a) + ")*(" + unparse(b) + ")");
        case 3: return parse("(" + unparse(a) + ")/(2+abs(" + unparse(b) + "))");
        case 4: return parse("sin(" + unparse(a) + ")");
        case 5: return parse("cos(" + unparse(a) + ")");
        case 6: return parse("sqrt(abs(" + unparse(a) + "))");
        default: return parse("log(1+abs(" + unparse(a) + "))");
    }
}

// Degree <= 6 polynomial as an expression tree, Horner form.
ExprPtr random_poly_expr(Rng& rng, std::vector<double>& coeffs_out) {
    const int degree = rng.uniform_int(0, 6);
    coeffs_out.resize(degree + 1);
    for (double& c : coeffs_out) c = rng.uniform(-3.0, 3.0);
    std::string src = detail::format_double(coeffs_out[degree]);
    for (int k = degree - 1; k >= 0; --k)
        src = "(" + src + ")*t+" + detail::format_double(coeffs_out[k]);
    return parse(src);
}

}  // namespace

TEST_CASE("variable parses to a variable node") {
    const ExprPtr e = parse("t");
    CHECK(e->kind == ExprKind::var);
    CHECK(e->has_var);
}

TEST_CASE("precedence binds ^ over / over -") {
    CHECK(equal(parse("t^2 - t/3"), parse("(t^2) - (t/3)")));
    CHECK(equal(parse("-t^2"), parse("-(t^2)")));
    CHECK_FALSE(equal(parse("-t^2"), parse("(-t)^2")));
    CHECK(equal(parse("2^3^2"), parse("2^(3^2)")));
    CHECK(eval(parse("2^3^2"), 0.0) == 512.0);
    CHECK(eval(parse("2*t^-2"), 4.0) == 0.125);
    CHECK(equal(parse("t-t-t"), parse("(t-t)-t")));
}

TEST_CASE("syntax errors carry byte offsets") {
    try {
        parse("sin(");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
    }
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("1 + "), ParseError);
    CHECK_THROWS_AS(parse("(t"), ParseError);
    CHECK_THROWS_AS(parse("t @ 2"), ParseError);

    try {
        parse("2*foo(t)");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
        CHECK(std::string(e.what()).find("foo") != std::string::npos);
    }
}

TEST_CASE("jet evaluation matches closed forms") {
    const Jet2 sq = eval_jet(parse("t^2"), 0.5);
    CHECK(sq.v == 0.25);
    CHECK(sq.d1 == 1.0);
    CHECK(sq.d2 == 2.0);

    const Jet2 s = eval_jet(parse("sin(t)"), 0.0);
    CHECK(s.v == 0.0);
    CHECK(s.d1 == 1.0);
    CHECK(s.d2 == 0.0);

    // d/dt exp(2t) = 2 exp(2t), second derivative 4 exp(2t)
    const Jet2 ex = eval_jet(parse("exp(2*t)"), 0.3);
    const double want = std::exp(0.6);
    CHECK_THAT(ex.v, WithinRel(want, 1e-14));
    CHECK_THAT(ex.d1, WithinRel(2.0 * want, 1e-14));
    CHECK_THAT(ex.d2, WithinRel(4.0 * want, 1e-14));
}

TEST_CASE("derivatives of random polynomials agree with central differences") {
    Rng rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> coeffs;
        const ExprPtr e = random_poly_expr(rng, coeffs);
        const double t = rng.uniform(-2.0, 2.0);
        const Jet2 j = eval_jet(e, t);
        const double h = 1e-5;
        const double fd1 = (eval(e, t + h) - eval(e, t - h)) / (2.0 * h);
        const double fd2 = (eval(e, t + h) - 2.0 * eval(e, t) + eval(e, t - h)) / (h * h);
        REQUIRE_THAT(j.d1, WithinAbs(fd1, 1e-6 * (1.0 + std::abs(j.d1))));
        REQUIRE_THAT(j.d2, WithinAbs(fd2, 1e-4 * (1.0 + std::abs(j.d2))));
    }
}

TEST_CASE("jet values are bit-identical to plain evaluation") {
    Rng rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const ExprPtr e = random_total_expr(rng, 3);
        const double t = rng.uniform(-4.0, 4.0);
        REQUIRE(eval(e, t) == eval_jet(e, t).v);
    }
    // power paths: integer, negative-integer, fractional, t-dependent
    for (const char* src : {"t^4", "t^-3", "(1+t*t)^2.5", "(2+t*t)^t", "abs(t)^3"}) {
        const ExprPtr e = parse(src);
        Rng ry(5);
        for (int i = 0; i < 50; ++i) {
            const double t = ry.uniform(0.1, 3.0);
            REQUIRE(eval(e, t) == eval_jet(e, t).v);
        }
    }
}

TEST_CASE("round trip: unparse then parse gives the identical tree") {
    for (const char* src :
         {"t", "t^2 - t/3", "-t^2", "t^-2", "2^3^2", "t-(t-1)", "t/(t*t+1)", "(t+1)*(t-2)",
          "sin(cos(exp(t)))", "sqrt(abs(t))", "log(1+abs(t))", "pi*t+e", "-(t+1)^2", "--t",
          "1.5e-3*t", "t*-2", "3/4/5"}) {
        const ExprPtr e = parse(src);
        const ExprPtr back = parse(unparse(e));
        INFO(src << " -> " << unparse(e));
        REQUIRE(equal(e, back));
        REQUIRE(unparse(back) == unparse(e));
    }
    Rng rng(123);
    for (int trial = 0; trial < 500; ++trial) {
        const ExprPtr e = random_total_expr(rng, 3);
        REQUIRE(equal(e, parse(unparse(e))));
    }
}

TEST_CASE("integer exponent detection keeps t^2 total, fractional powers guarded") {
    CHECK(eval(parse("t^2"), -1.5) == 2.25);
    CHECK(eval(parse("t^3"), -2.0) == -8.0);
    CHECK_THROWS_AS(eval(parse("t^2.5"), -1.0), EvalError);
    CHECK_THAT(eval(parse("t^2.5"), 2.0), WithinRel(std::pow(2.0, 2.5), 1e-15));
    CHECK_THROWS_AS(eval(parse("t^t"), -1.0), EvalError);
}

TEST_CASE("domain errors identify the offending subexpression") {
    try {
        eval_jet(parse("1+log(t-2)"), 1.0);
        FAIL("expected EvalError");
    } catch (const EvalError& e) {
        CHECK(e.subexpr() == "log(t-2)");
        CHECK(e.offset() == 2);
    }
    CHECK_THROWS_AS(eval(parse("sqrt(0-t)"), 4.0), EvalError);
    CHECK_THROWS_AS(eval(parse("1/t"), 0.0), EvalError);
    CHECK_THROWS_AS(eval_jet(parse("t^-1"), 0.0), EvalError);
}

TEST_CASE("named constants") {
    CHECK(eval(parse("pi"), 0.0) == std::numbers::pi);
    CHECK(eval(parse("e"), 0.0) == std::numbers::e);
    CHECK_THAT(eval(parse("sin(pi)"), 0.0), WithinAbs(0.0, 1e-15));
    CHECK(eval_jet(parse("pi*t"), 1.0).d1 == std::numbers::pi);
}
