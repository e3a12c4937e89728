#include <cmath>
#include <numbers>

#include "certify/quadrature.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace certify;
using certify::testing::close_rel;
using certify::testing::Poly;

TEST_CASE("config validation") {
    QuadratureConfig c;
    CHECK_NOTHROW(c.validate());
    c.angular_points = 7;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.rel_tol = -1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("a single panel integrates polynomials up to degree 13 exactly") {
    QuadratureConfig cfg;
    cfg.max_subdivisions = 1;
    for (int deg = 0; deg <= 13; ++deg) {
        Poly p{std::vector<double>(static_cast<std::size_t>(deg) + 1, 0.0)};
        for (int i = 0; i <= deg; ++i) p.c[static_cast<std::size_t>(i)] = std::cos(1.0 + i);
        // Antiderivative as an independent oracle.
        Poly anti{std::vector<double>(static_cast<std::size_t>(deg) + 2, 0.0)};
        for (int i = 0; i <= deg; ++i) anti.c[static_cast<std::size_t>(i) + 1] = p.c[static_cast<std::size_t>(i)] / (i + 1);
        const auto r = integrate_1d([&](double x) { return p(x); }, -0.7, 1.3, {}, cfg);
        CHECK(r.panels == 1);
        CHECK(close_rel(r.value, anti(1.3) - anti(-0.7), 1e-14, 1e-14));
        CHECK(r.error < 1e-12);
    }
}

TEST_CASE("breaks split the integral additively") {
    QuadratureConfig cfg;
    auto f = [](double x) { return std::abs(x - 0.3) + std::exp(x); };
    const double exact = 0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7 + std::exp(1.0) - std::exp(-1.0);
    const auto whole = integrate_1d(f, -1.0, 1.0, {0.3}, cfg);
    CHECK(close_rel(whole.value, exact, 1e-12));
    const auto left = integrate_1d(f, -1.0, 0.3, {}, cfg);
    const auto right = integrate_1d(f, 0.3, 1.0, {}, cfg);
    CHECK(close_rel(left.value + right.value, whole.value, 1e-13));
    // Breaks outside the range are ignored.
    CHECK(close_rel(integrate_1d(f, -1.0, 0.3, {0.9, -5.0}, cfg).value, left.value, 1e-15));
}

TEST_CASE("adaptivity resolves a kink without a break") {
    QuadratureConfig cfg;
    const auto r = integrate_1d([](double x) { return std::abs(x - 0.3); }, -1.0, 1.0, {}, cfg);
    CHECK(close_rel(r.value, 0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7, 1e-9));
    CHECK(r.panels > 1);
    CHECK(std::abs(r.value - (0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7)) <= r.error + 1e-12);
}

TEST_CASE("non-finite integrands and budgets are reported") {
    QuadratureConfig cfg;
    try {
        integrate_1d([](double x) { return std::log(x); }, -1.0, 1.0, {}, cfg);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(e.kind() == QuadratureError::Kind::non_finite);
    }
    cfg.max_subdivisions = 3;
    cfg.rel_tol = 1e-14;
    cfg.abs_tol = 1e-14;
    try {
        integrate_1d([](double x) { return std::sin(200 * x) * x * x; }, 0.0, 10.0, {}, cfg);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(e.kind() == QuadratureError::Kind::no_convergence);
    }
}

TEST_CASE("disk area and radial moments") {
    QuadratureConfig cfg;
    const Domain d = Domain::disk(3.0);
    CHECK(close_rel(integrate_domain(d, {}, [](const Coords&) { return 1.0; }, cfg).value, 9 * std::numbers::pi, 1e-13));
    const auto m = integrate_domain(d, {1.0}, [](const Coords& p) { return p.r * p.r; }, cfg);
    CHECK(close_rel(m.value, std::numbers::pi * 81.0 / 2.0, 1e-13));
    // Annulus only.
    const auto a = integrate_over(d, {{1.0, 3.0}}, {}, [](const Coords&) { return 1.0; }, cfg);
    CHECK(close_rel(a.value, 8 * std::numbers::pi, 1e-13));
}

TEST_CASE("angular orthogonality") {
    QuadratureConfig cfg;
    const Domain d = Domain::disk(2.0);
    for (int k = 1; k <= 6; ++k) {
        const auto r = integrate_domain(d, {}, [&](const Coords& p) { return std::cos(k * p.theta) * p.r; }, cfg);
        CHECK(std::abs(r.value) < 1e-13);
        const auto s = integrate_domain(d, {}, [&](const Coords& p) { return std::pow(std::cos(k * p.theta), 2); }, cfg);
        CHECK(close_rel(s.value, 0.5 * 4 * std::numbers::pi, 1e-13));
    }
}

TEST_CASE("angular refinement from 64 to 128 points") {
    const Domain d = Domain::disk(3.0);
    auto f = [](const Coords& p) { return std::exp(std::cos(p.theta)) * p.r * p.r + std::pow(std::sin(2 * p.theta), 4); };
    QuadratureConfig c64;
    QuadratureConfig c128;
    c128.angular_points = 128;
    const auto a = integrate_domain(d, {}, f, c64);
    const auto b = integrate_domain(d, {}, f, c128);
    CHECK(close_rel(a.value, b.value, 1e-12));
    // exp(cos t) integrates to 2 pi I0(1).
    const double exact = 2 * std::numbers::pi * std::cyl_bessel_i(0.0, 1.0) * 81.0 / 4.0 + 9 * std::numbers::pi * 3.0 / 8.0;
    CHECK(close_rel(b.value, exact, 1e-12));
}

TEST_CASE("coarse angular rule reports its own error") {
    QuadratureConfig cfg;
    cfg.angular_points = 4;
    const Domain d = Domain::disk(1.0);
    const auto r = integrate_domain(d, {}, [](const Coords& p) { return std::exp(std::cos(p.theta)); }, cfg);
    const double exact = std::numbers::pi * std::cyl_bessel_i(0.0, 1.0);
    CHECK(std::abs(r.value - exact) > 1e-6);
    CHECK(r.error >= std::abs(r.value - exact));
}

TEST_CASE("norms of piecewise fields") {
    QuadratureConfig cfg;
    const Domain line = Domain::interval(-1.0, 1.0);
    const auto v = PiecewiseScalarField::parse(line, {{-1.0, 0.0, "x"}, {0.0, 1.0, "2*x"}});
    CHECK(close_rel(l2_norm_sq(v, cfg).value, 1.0 / 3 + 4.0 / 3, 1e-14));
    const Domain disk = Domain::disk(1.0);
    const auto n = PiecewiseSymMatrixField::parse_polar(disk, {{{0.0, 1.0}, {"1", "r", "0"}}});
    // |n|^2 = 1 + 2 r^2 -> pi + pi
    CHECK(close_rel(l2_norm_sq(n, cfg).value, 2 * std::numbers::pi, 1e-13));
}
