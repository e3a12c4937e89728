#include <doctest.h>

#include <cmath>

#include "certify/measures.hpp"
#include "test_support.hpp"

using namespace certify;
using certify::testing::close_rel;

namespace {

const QuadratureConfig kCfg{};

Approximation approx(const ProblemInstance& p, const std::string& name) { return p.approximation(name); }

}  // namespace

TEST_CASE("identity for (v1, n*) on the beam") {
    const auto p = builtin("model_1d");
    const auto r = verify_identity(p, approx(p, "v1").primal(), approx(p, "nstar").dual(), kCfg);
    CHECK(r.pass);
    CHECK(r.feasible);
    CHECK(close_rel(r.lhs_primal.quadratic.value, 125.156, 5e-3));
    CHECK(close_rel(r.lhs_primal.nonlinear.value, 152.89, 5e-3));
    CHECK(close_rel(r.lhs_dual.quadratic.value, 74.74, 5e-3));
    CHECK(close_rel(r.lhs_dual.nonlinear.value, 156.8, 5e-3));
    CHECK(close_rel(r.rhs_quadratic.value, 23.063, 5e-3));
    CHECK(close_rel(r.rhs_obstacle.value, 486.515, 5e-3));
    CHECK(r.residual <= 1e-6 * r.rhs_total.value);
    // Jump part 2 * 192 * (v1(1/2) + 1); the rest comes from (-1/2, -1/4) and (1/4, 1/2).
    CHECK(r.lhs_primal.jump_part.value == doctest::Approx(896.0 / 9.0).epsilon(1e-12));
    CHECK(r.lhs_primal.nonlinear.value - r.lhs_primal.jump_part.value == doctest::Approx(160.0 / 3.0).epsilon(1e-10));
    CHECK(r.lhs_primal.total.value == doctest::Approx(r.lhs_primal.quadratic.value + r.lhs_primal.nonlinear.value));
}

TEST_CASE("exact pair has zero measures") {
    for (const auto& id : builtin_ids()) {
        INFO(id);
        const auto p = builtin(id);
        CHECK(std::abs(mu_primal(p, p.exact->u, kCfg).total.value) < 1e-9);
        CHECK(std::abs(mu_dual(p, p.exact->p_star, kCfg).total.value) < 1e-9);
        // Div p* jumps across the free boundary, so p* itself is outside H(div Div).
        CHECK_THROWS_AS(verify_identity(p, p.exact->u, p.exact->p_star, kCfg), ValidationError);
        CHECK_THROWS_AS(energy_dual(p, p.exact->p_star, kCfg), ValidationError);
    }
}

TEST_CASE("infeasible dual: identity refused, violation located") {
    const auto p = builtin("model_1d");
    const auto& nt = approx(p, "ntilde").dual();
    const auto feas = check_feasibility(p, nt);
    CHECK(!feas.feasible);
    REQUIRE(feas.violation.components().size() == 2);
    CHECK(std::abs(feas.violation.components()[0].lo + 1.0) < 1e-12);
    CHECK(std::abs(feas.violation.components()[0].hi + 17.0 / 18.0) < 1e-9);
    CHECK(std::abs(feas.violation.components()[1].lo - 17.0 / 18.0) < 1e-9);
    CHECK(std::abs(feas.violation.components()[1].hi - 1.0) < 1e-12);
    CHECK(feas.max_violation == doctest::Approx(144.0));  // f - n'' = -1152 + 1296 at the ends

    CHECK_THROWS_AS(verify_identity(p, approx(p, "v1").primal(), nt, kCfg), InfeasibleError);
    const auto dual = energy_dual(p, nt, kCfg);
    CHECK(!dual.feasible);
    CHECK(std::isinf(dual.value.value));
    CHECK(dual.value.value < 0);
    const auto md = mu_dual(p, nt, kCfg);
    CHECK(md.warn_infeasible);
    CHECK(std::isfinite(md.total.value));

    CHECK(check_feasibility(p, approx(p, "nstar").dual()).feasible);
    CHECK(check_feasibility(p, p.exact->p_star).feasible);
}

TEST_CASE("measures equal energy gaps") {
    const auto p = builtin("model_1d");
    const double ju = energy_primal(p, p.exact->u, kCfg).value;
    CHECK(ju == doctest::Approx(-8448.0 / 5.0).epsilon(1e-13));
    std::vector<Approximation> primals{approx(p, "v1")};
    std::vector<Approximation> duals{approx(p, "nstar")};
    for (double eps : {0.0, 0.05, 0.15, 0.25, 0.35}) {
        primals.push_back(model_v_eps(eps));
        duals.push_back(model_n_eps(eps));
    }
    for (const auto& a : primals) {
        INFO(a.name);
        const double mu = mu_primal(p, a.primal(), kCfg).total.value;
        const double gap = energy_primal(p, a.primal(), kCfg).value - ju;
        CHECK(close_rel(mu, gap, 1e-9));
    }
    for (const auto& a : duals) {
        INFO(a.name);
        const auto ids = energy_dual(p, a.dual(), kCfg);
        REQUIRE(ids.feasible);
        CHECK(close_rel(mu_dual(p, a.dual(), kCfg).total.value, ju - ids.value.value, 1e-9));
    }
}

TEST_CASE("identity holds across the eps family") {
    const auto p = builtin("model_1d");
    for (double eps : {0.0, 0.05, 0.15, 0.25, 0.35, 0.5}) {
        INFO("eps = " << eps);
        const auto r = verify_identity(p, model_v_eps(eps).primal(), model_n_eps(eps).dual(), kCfg);
        CHECK(r.pass);
        CHECK(r.residual <= 1e-9 * r.rhs_total.value);
    }
    const auto r0 = verify_identity(p, model_v_eps(0.0).primal(), model_n_eps(0.0).dual(), kCfg);
    CHECK(std::abs(r0.lhs_primal.nonlinear.value) < 1e-9);
    CHECK(r0.lhs_primal.quadratic.value == doctest::Approx(57.6).epsilon(1e-9));
    CHECK(r0.lhs_dual.nonlinear.value == doctest::Approx(192.0).epsilon(1e-9));
}

TEST_CASE("circular plate measures") {
    const auto p = builtin("circular_plate");
    const auto r = verify_identity(p, approx(p, "v2").primal(), approx(p, "nhat").dual(), kCfg);
    CHECK(r.pass);
    CHECK(std::abs(r.lhs_primal.quadratic.value - 157.19) <= 0.05);
    CHECK(std::abs(r.lhs_primal.nonlinear.value) <= 1e-9);
    CHECK(std::abs(r.lhs_dual.quadratic.value - 14.84) <= 0.05);
    CHECK(std::abs(r.lhs_dual.nonlinear.value - 63.46) <= 0.05);
    CHECK(std::abs(r.rhs_quadratic.value - 111.15) <= 0.05);
    CHECK(std::abs(r.rhs_obstacle.value - 124.34) <= 0.05);
    CHECK(std::abs(r.lhs_total.value - 235.49) <= 0.05);
    CHECK(std::abs(r.rhs_total.value - 235.49) <= 0.05);

    const double ju = energy_primal(p, p.exact->u, kCfg).value;
    CHECK(close_rel(energy_primal(p, approx(p, "v2").primal(), kCfg).value - ju, r.lhs_primal.total.value, 1e-8));
    const auto ids = energy_dual(p, approx(p, "nhat").dual(), kCfg);
    REQUIRE(ids.feasible);
    CHECK(close_rel(ju - ids.value.value, r.lhs_dual.total.value, 1e-8));
}

TEST_CASE("dual fields outside H(div Div) are rejected") {
    const auto p = builtin("model_1d");
    const auto kink = PiecewiseSymMatrixField::parse_line(p.domain, {{-1, 0, "-x"}, {0, 1, "x"}});
    CHECK_THROWS_AS(require_h_divdiv(kink), ValidationError);
    CHECK_THROWS_AS(verify_identity(p, approx(p, "v1").primal(), kink, kCfg), ValidationError);
    CHECK_NOTHROW(require_h_divdiv(approx(p, "ntilde").dual()));
}

TEST_CASE("measures need an exact solution") {
    auto p = builtin("model_1d");
    p.exact.reset();
    CHECK_THROWS_AS(mu_primal(p, model_v_eps(0.1).primal(), kCfg), std::invalid_argument);
    // The right-hand side of the identity needs no exact data.
    const auto [q, o] = identity_rhs(p, model_v_eps(0.0).primal(), model_n_eps(0.0).dual(), kCfg);
    CHECK(q.value == doctest::Approx(49.371).epsilon(1e-4));
    CHECK(o.value == doctest::Approx(268.8).epsilon(1e-9));
}

TEST_CASE("breaks collect every layout") {
    const auto p = builtin("model_1d");
    const auto br = breaks_of(p, {{-1.0 / 3, 1.0 / 3}, {0.25}});
    CHECK(br == std::vector<double>{-0.5, -1.0 / 3, 0.25, 1.0 / 3, 0.5});
}
