#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "certify/problems.hpp"
#include "test_support.hpp"

using namespace certify;
using certify::testing::close_rel;

namespace {

std::string data_file(const std::string& name) { return std::string(CERTIFY_DATA_DIR) + "/" + name; }

void check_scalar_equal(const PiecewiseScalarField& a, const PiecewiseScalarField& b) {
    const Domain& d = a.domain();
    REQUIRE(d == b.domain());
    for (int i = 0; i <= 200; ++i) {
        const double s = d.lower() + (d.upper() - d.lower()) * (i + 0.37) / 201.0;
        for (double t : {0.0, 0.7, 2.9}) {
            const double x = a.value(s, t), y = b.value(s, t);
            CHECK(std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)));
        }
    }
}

void check_matrix_equal(const PiecewiseSymMatrixField& a, const PiecewiseSymMatrixField& b) {
    const Domain& d = a.domain();
    for (int i = 0; i <= 200; ++i) {
        const double s = d.lower() + (d.upper() - d.lower()) * (i + 0.37) / 201.0;
        for (double t : {0.0, 0.7, 2.9}) {
            const auto x = a(d.at(s, t));
            const auto y = b(d.at(s, t));
            for (int k = 0; k < 3; ++k) CHECK(std::abs(x[k] - y[k]) <= 1e-12 * std::max(1.0, std::abs(x[k])));
        }
    }
}

void check_round_trip(const std::string& id) {
    const auto a = builtin(id);
    const auto b = load_problem(data_file(id + ".problem"));
    CHECK(b.name == a.name);
    CHECK(b.friedrichs == doctest::Approx(a.friedrichs).epsilon(1e-14));
    check_scalar_equal(a.f, b.f);
    check_scalar_equal(a.phi, b.phi);
    REQUIRE(b.exact);
    check_scalar_equal(a.exact->u, b.exact->u);
    check_matrix_equal(a.exact->p_star, b.exact->p_star);
    CHECK(a.exact->coincidence.components() == b.exact->coincidence.components());
    CHECK(a.exact->free_boundary == b.exact->free_boundary);
    REQUIRE(a.approximations.size() == b.approximations.size());
    for (const auto& [name, x] : a.approximations) {
        INFO(name);
        const auto y = b.approximation(name);
        REQUIRE(x.kind == y.kind);
        if (x.kind == ApproxKind::primal) check_scalar_equal(x.primal(), y.primal());
        else check_matrix_equal(x.dual(), y.dual());
    }
}

const char* kGoodHeader = "[problem]\nname = t\ndomain = interval(-1, 1)\n";

}  // namespace

TEST_CASE("registry ids and unknown lookups") {
    CHECK(builtin_ids() == std::vector<std::string>{"model_1d", "circular_plate"});
    CHECK_THROWS_AS(builtin("square_plate"), std::invalid_argument);
    const auto p = builtin("model_1d");
    CHECK_THROWS_AS(p.approximation("v7"), std::invalid_argument);
    CHECK_THROWS_AS(p.approximation("v_eps(0.6)"), std::invalid_argument);
    CHECK_THROWS_AS(p.approximation("n_eps(-0.1)"), std::invalid_argument);
    CHECK_THROWS_AS(model_v_eps(0.51), std::invalid_argument);
    CHECK_THROWS_AS(p.approximation("v1").dual(), std::logic_error);
}

TEST_CASE("model_1d data") {
    const auto p = builtin("model_1d");
    CHECK(p.domain == Domain::interval(-1, 1));
    CHECK(p.f.value(0.3) == -1152.0);
    CHECK(p.phi.value(-0.9) == -1.0);
    CHECK(p.friedrichs == doctest::Approx(4.0 / (std::numbers::pi * std::numbers::pi)));
    REQUIRE(p.exact);
    CHECK(p.exact->coincidence.components() == std::vector<Range>{{-0.5, 0.5}});
    CHECK(p.exact->free_boundary == std::vector<double>{-0.5, 0.5});
    for (double e : {-1.0, 1.0}) {
        const Side side = e < 0 ? Side::right : Side::left;
        CHECK(std::abs(one_sided_limit(p.exact->u, e, side, 0)) < 1e-14);
        CHECK(std::abs(one_sided_limit(p.exact->u, e, side, 1)) < 1e-12);
    }
    CHECK(validate(p).empty());
}

TEST_CASE("model_1d: u'''' = f off the coincidence set and p* = u''") {
    const auto p = builtin("model_1d");
    const auto dd = div_div(hessian(p.exact->u));
    const auto h = hessian(p.exact->u);
    for (int i = 0; i < 100; ++i) {
        const double x = -1.0 + 2.0 * (i + 0.5) / 100.0;
        const auto c = Coords::line(x);
        CHECK(std::abs(h(c)[0] - p.exact->p_star(c)[0]) <= 1e-8 * std::max(1.0, std::abs(h(c)[0])));
        if (p.exact->coincidence.contains(x)) continue;
        CHECK(dd(c) == doctest::Approx(-1152.0).epsilon(1e-12));
    }
}

TEST_CASE("circular plate data") {
    const auto p = builtin("circular_plate");
    CHECK(p.domain == Domain::disk(3));
    REQUIRE(p.exact);
    CHECK(p.exact->coincidence.components() == std::vector<Range>{{0.0, 1.0}});
    const double c1 = 9 * std::log(3.0) - 4;
    const double c2 = 208 - 216 * std::log(3.0) + 9 * std::log(3.0) * std::log(3.0);
    CHECK(p.f.value(2.0, 0.4) == doctest::Approx(16 * c1 / c2).epsilon(1e-14));
    const auto& u = p.exact->u;
    for (int k = 0; k < 64; ++k) {
        const double t = 2 * std::numbers::pi * k / 64;
        CHECK(std::abs(one_sided_limit(u, 3.0, Side::left, 0, t)) <= 1e-10);
        CHECK(std::abs(one_sided_limit(u, 3.0, Side::left, 1, t)) <= 1e-10);
        for (int order : {0, 1})
            CHECK(std::abs(one_sided_limit(u, 1.0, Side::left, order, t) - one_sided_limit(u, 1.0, Side::right, order, t)) <=
                  1e-10);
    }
    // p* as printed against the Hessian of u, and the biharmonic equation on the free set.
    const auto h = hessian(u);
    const auto bl = laplacian(laplacian(u));
    for (int i = 0; i < 40; ++i) {
        const double r = 1.0 + 2.0 * (i + 0.5) / 40.0;
        for (double t : {0.0, 0.3, 1.9, 4.4}) {
            const auto c = Coords::polar(r, t);
            const auto a = h(c);
            const auto b = p.exact->p_star(c);
            for (int k = 0; k < 3; ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-8 * std::max(1.0, std::abs(a[k])));
            CHECK(bl(c) == doctest::Approx(p.f(c)).epsilon(1e-9));
        }
    }
    CHECK(validate(p).empty());
}

TEST_CASE("named approximations") {
    const auto p = builtin("model_1d");
    CHECK(p.approximation_names() == std::vector<std::string>{"nstar", "ntilde", "pstar", "u", "v1", "v_eps(<eps>)", "n_eps(<eps>)"});
    const auto v1 = p.approximation("v1");
    CHECK(v1.kind == ApproxKind::primal);
    CHECK(check_admissible(v1.primal(), p.phi).admissible);
    CHECK(check_h_divdiv(p.approximation("nstar").dual()).ok);
    CHECK(check_h_divdiv(p.approximation("ntilde").dual()).ok);

    const auto plate = builtin("circular_plate");
    const auto& u = plate.exact->u;
    const auto v2_handle = plate.approximation("v2");
    const auto& v2 = v2_handle.primal();
    for (double r : {0.3, 1.0, 1.4, 2.2, 2.999}) {
        for (double t : {0.0, 1.1}) {
            const double bump = r >= 1.0 ? 0.5 * (1 - std::cos(std::numbers::pi * (3 - r))) : 0.0;
            CHECK(v2.value(r, t) == doctest::Approx(u.value(r, t) + bump).epsilon(1e-13));
        }
    }
    CHECK(check_admissible(v2, plate.phi).admissible);
    CHECK(check_h_divdiv(plate.approximation("nhat").dual()).ok);
}

TEST_CASE("v_eps and n_eps families") {
    const auto p = builtin("model_1d");
    for (double eps : {0.0, 0.05, 0.15, 0.25, 0.35, 0.5}) {
        INFO("eps = " << eps);
        const auto v = p.approximation("v_eps(" + std::to_string(eps) + ")");
        CHECK(v.parameters.at("eps") == doctest::Approx(eps));
        CHECK(check_admissible(v.primal(), p.phi).admissible);
        const auto cs = coincidence_set(v.primal(), p.phi);
        if (eps < 0.5) {
            REQUIRE(cs.components().size() == 1);
            CHECK(cs.components()[0].lo == doctest::Approx(eps - 0.5).epsilon(1e-15));
            CHECK(cs.components()[0].hi == doctest::Approx(0.5 - eps).epsilon(1e-15));
        }
        const auto n = model_n_eps(eps);
        CHECK(n.kind == ApproxKind::dual);
        CHECK(check_h_divdiv(n.dual()).ok);
    }
    // v_0 touches phi exactly on the coincidence set but differs from u.
    const auto v0 = model_v_eps(0.0).primal();
    CHECK(coincidence_set(v0, p.phi).components() == std::vector<Range>{{-0.5, 0.5}});
    CHECK(std::abs(v0.value(-0.75) - p.exact->u.value(-0.75)) > 1e-3);
}

TEST_CASE("problem files round-trip against the builtins") {
    check_round_trip("model_1d");
    check_round_trip("circular_plate");
    CHECK(resolve_problem(data_file("model_1d.problem")).name == "model_1d");
    CHECK(resolve_problem("circular_plate").name == "circular_plate");
}

TEST_CASE("problem files: invariant violations are rejected") {
    SUBCASE("obstacle above zero on the boundary") {
        const std::string text = std::string(kGoodHeader) +
                                 "[load]\npiece: domain=(-1, 1), expr=\"-1\"\n"
                                 "[obstacle]\npiece: domain=(-1, 1), expr=\"x^2-0.5\"\n";
        CHECK_THROWS_AS(load_problem_text(text), ValidationError);
        try {
            load_problem_text(text);
        } catch (const ValidationError& e) {
            REQUIRE(!e.problems().empty());
            CHECK(e.problems()[0].find("boundary") != std::string::npos);
        }
    }
    SUBCASE("overlapping pieces") {
        const std::string text = std::string(kGoodHeader) +
                                 "[load]\npiece: domain=(-1, 0.2), expr=\"-1\"\npiece: domain=(0, 1), expr=\"-1\"\n"
                                 "[obstacle]\npiece: domain=(-1, 1), expr=\"-1\"\n";
        CHECK_THROWS_AS(load_problem_text(text), ProblemFileError);
    }
    SUBCASE("primal approximation below the obstacle") {
        const std::string text = std::string(kGoodHeader) +
                                 "[load]\npiece: domain=(-1, 1), expr=\"-1\"\n"
                                 "[obstacle]\npiece: domain=(-1, 1), expr=\"-1\"\n"
                                 "[approx.bad]\nkind = primal\npiece: domain=(-1, 1), expr=\"-3*(1-x^2)^2\"\n";
        CHECK_THROWS_AS(load_problem_text(text), ValidationError);
    }
    SUBCASE("a valid minimal file loads") {
        const std::string text = std::string(kGoodHeader) +
                                 "[load]\npiece: domain=(-1, 1), expr=\"-1\"\n"
                                 "[obstacle]\npiece: domain=(-1, 1), expr=\"-1\"\n";
        const auto p = load_problem_text(text);
        CHECK(p.name == "t");
        CHECK(!p.exact);
    }
}

TEST_CASE("problem files: parse errors carry line and column") {
    const std::string text = std::string(kGoodHeader) + "[load]\npiece: domain=(-1, 1), expr=\"-1 + * x\"\n" +
                             "[obstacle]\npiece: domain=(-1, 1), expr=\"-1\"\n";
    try {
        load_problem_text(text);
        FAIL("expected a parse error");
    } catch (const ProblemFileError& e) {
        CHECK(e.line() == 5);
        CHECK(e.column() > 1);
    }
    try {
        load_problem_text("[problem]\nname = t\ndomain = cube(1)\n");
        FAIL("expected a parse error");
    } catch (const ProblemFileError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(load_problem_text("[bogus]\n"), ProblemFileError);
    CHECK_THROWS_AS(load_problem("/nonexistent/file.problem"), std::invalid_argument);
    CHECK_THROWS_AS(load_problem_text("[problem]\nname t\n"), ProblemFileError);
}
