#include <cmath>
#include <numbers>

#include "certify/expr.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace certify;
using certify::testing::close_rel;
using certify::testing::Poly;
using certify::testing::RandomExprGen;

namespace {
const char* kLeftPiece = "-8*(x+1)^2*(6*x^2+4*x+1)";

double left_piece(double x) { return -8.0 * (x + 1) * (x + 1) * (6 * x * x + 4 * x + 1); }
}  // namespace

TEST_CASE("parse matches the closed-form minimizer piece") {
    const Expr e = parse_expr(kLeftPiece, VarSpace::line);
    for (double x : {-1.0, -0.9, -0.75, -0.5, 0.3}) {
        CHECK(e.evaluate(Coords::line(x)) == doctest::Approx(left_piece(x)).epsilon(1e-15));
    }
}

TEST_CASE("zero and constants") {
    const Expr z = parse_expr("0", VarSpace::line);
    CHECK(z.is_constant(0.0));
    CHECK(parse_expr("  -1 ", VarSpace::line).evaluate({}) == -1.0);
    CHECK(parse_expr("pi", VarSpace::polar).evaluate({}) == std::numbers::pi);
    CHECK(parse_expr("2.5e-1", VarSpace::line).evaluate({}) == 0.25);
}

TEST_CASE("ln(r)*r^2 vanishes at r = 1") {
    const Expr e = parse_expr("ln(r)*r^2", VarSpace::polar);
    CHECK(e.evaluate(Coords::polar(1.0, 0.3)) == 0.0);
}

TEST_CASE("unary minus binds looser than power") {
    const Expr e = parse_expr("-x^2", VarSpace::line);
    CHECK(e.evaluate(Coords::line(3.0)) == -9.0);
    CHECK(parse_expr("2*-x", VarSpace::line).evaluate(Coords::line(3.0)) == -6.0);
    CHECK(parse_expr("(-x)^2", VarSpace::line).evaluate(Coords::line(3.0)) == 9.0);
}

TEST_CASE("derivatives of the minimizer piece") {
    const Expr e = parse_expr(kLeftPiece, VarSpace::line);
    CHECK(e.differentiate(Var::x).evaluate(Coords::line(-1.0)) == doctest::Approx(0.0));

    // Oracle: expand -8 (x+1)^2 (6x^2+4x+1) as coefficient vectors.
    const Poly lin{{1.0, 1.0}};
    const Poly quad{{1.0, 4.0, 6.0}};
    const Poly u = Poly{{-8.0}} * lin * lin * quad;
    const Poly d3 = u.derivative().derivative().derivative();
    const Poly d4 = d3.derivative();
    REQUIRE(d4.c.size() == 1);
    CHECK(d4.c[0] == -1152.0);

    const Expr e4 = e.differentiate(Var::x, 4);
    for (double x : {-0.9, -0.7, -0.55}) CHECK(e4.evaluate(Coords::line(x)) == doctest::Approx(-1152.0));
    // The one-sided third derivative at the free boundary.
    CHECK(e.differentiate(Var::x, 3).evaluate(Coords::line(-0.5)) == doctest::Approx(d3(-0.5)));
    CHECK(d3(-0.5) == doctest::Approx(-192.0));
}

TEST_CASE("angular derivative") {
    const Expr e = parse_expr("sin(2*theta)", VarSpace::polar);
    CHECK(e.differentiate(Var::theta).evaluate(Coords::polar(1.0, 0.0)) == doctest::Approx(2.0));
    CHECK(e.differentiate(Var::r).is_constant(0.0));
}

TEST_CASE("evaluation of flux pieces") {
    CHECK(parse_expr("-1", VarSpace::line).evaluate(Coords::line(0.0)) == -1.0);
    const Expr p = parse_expr("-48*(2*x-1)*(6*x-5)", VarSpace::line);
    CHECK(p.evaluate(Coords::line(0.5)) == 0.0);
    CHECK(p.evaluate(Coords::line(1.0)) == -48.0);
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse_expr("", VarSpace::line), ParseError);
    CHECK_THROWS_AS(parse_expr("   ", VarSpace::line), ParseError);
    try {
        parse_expr("x + y", VarSpace::line);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() == 4);
    }
    try {
        parse_expr("2*(x+1", VarSpace::line);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() == 6);
    }
    CHECK_THROWS_AS(parse_expr("theta", VarSpace::line), ParseError);
    CHECK_THROWS_AS(parse_expr("x", VarSpace::polar), ParseError);
    CHECK_THROWS_AS(parse_expr("exp(x)", VarSpace::line), ParseError);
    CHECK_THROWS_AS(parse_expr("x^-1", VarSpace::line), ParseError);
    CHECK_THROWS_AS(parse_expr("x^1.5", VarSpace::line), ParseError);
    CHECK_THROWS_AS(parse_expr("1 2", VarSpace::line), ParseError);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(parse_expr("ln(x)", VarSpace::line).evaluate(Coords::line(-1.0)), DomainError);
    CHECK_THROWS_AS(parse_expr("1/(x-1)", VarSpace::line).evaluate(Coords::line(1.0)), DomainError);
    CHECK_THROWS_AS(CompiledExpr(parse_expr("ln(r)", VarSpace::polar))(Coords::polar(0.0, 0.0)), DomainError);
}

TEST_CASE("linearity of differentiation at random points") {
    RandomExprGen gen(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Expr f = gen.make(4);
        const Expr g = gen.make(4);
        const double a = gen.coef();
        const double b = gen.coef();
        const Expr combo = (Expr(a) * f + Expr(b) * g).differentiate(Var::x);
        const Expr df = f.differentiate(Var::x);
        const Expr dg = g.differentiate(Var::x);
        for (int k = 0; k < 5; ++k) {
            const Coords p = Coords::line(gen.point());
            const double lhs = combo.evaluate(p);
            const double rhs = a * df.evaluate(p) + b * dg.evaluate(p);
            CHECK(close_rel(lhs, rhs, 1e-12, 1e-12));
        }
    }
}

TEST_CASE("symbolic derivative agrees with central differences") {
    RandomExprGen gen(11);
    const double h = 1e-5;
    for (int trial = 0; trial < 30; ++trial) {
        const Expr f = gen.make(4);
        const Expr df = f.differentiate(Var::x);
        for (int k = 0; k < 5; ++k) {
            const double x = gen.point();
            const double fd = (f.evaluate(Coords::line(x + h)) - f.evaluate(Coords::line(x - h))) / (2 * h);
            CHECK(close_rel(df.evaluate(Coords::line(x)), fd, 1e-6, 1e-6));
        }
    }
}

TEST_CASE("pretty-print then parse preserves values") {
    RandomExprGen gen(3);
    for (int trial = 0; trial < 50; ++trial) {
        const Expr f = gen.make(5);
        const Expr g = parse_expr(f.to_string(), VarSpace::line);
        for (int k = 0; k < 4; ++k) {
            const Coords p = Coords::line(gen.point());
            CHECK(close_rel(f.evaluate(p), g.evaluate(p), 1e-13, 1e-13));
        }
    }
}

TEST_CASE("compiled tape matches tree evaluation") {
    RandomExprGen gen(5);
    for (int trial = 0; trial < 30; ++trial) {
        const Expr f = gen.make(5).differentiate(Var::x, 2);
        const CompiledExpr c(f);
        CHECK(c.size() <= f.node_count());
        for (int k = 0; k < 4; ++k) {
            const Coords p = Coords::line(gen.point());
            CHECK(close_rel(c(p), f.evaluate(p), 1e-14, 1e-14));
        }
    }
}

TEST_CASE("constant folding and identities") {
    const Expr x = Expr::variable(Var::x);
    CHECK((x * 0.0).is_constant(0.0));
    CHECK((x * 1.0).structurally_equal(x));
    CHECK((x + 0.0).structurally_equal(x));
    CHECK((Expr(2.0) * Expr(3.0)).is_constant(6.0));
    CHECK(pow(x, 0).is_constant(1.0));
    CHECK(x.differentiate(Var::theta).is_constant(0.0));
    CHECK(!parse_expr("x+1", VarSpace::line).structurally_equal(parse_expr("x+2", VarSpace::line)));
    CHECK(parse_expr("-1", VarSpace::line).structurally_equal(Expr(-1.0)));
}
