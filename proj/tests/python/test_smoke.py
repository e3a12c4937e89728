import math
import os

import pytest

import certify

DATA = os.environ.get("CERTIFY_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def test_builtins_listed():
    assert certify.builtin_ids() == ["model_1d", "circular_plate"]
    p = certify.builtin("model_1d")
    assert p.name == "model_1d"
    assert p.coincidence == [(-0.5, 0.5)]
    assert p.friedrichs == pytest.approx(4 / math.pi**2)


def test_identity_beam():
    p = certify.builtin("model_1d")
    r = certify.verify_identity(p, "v1", "nstar")
    assert r["passed"]
    assert r["lhs_total"].value == pytest.approx(509.58, rel=5e-3)
    assert abs(r["lhs_total"].value - r["rhs_total"].value) <= 1e-6 * r["rhs_total"].value
    assert r["mu_primal"]["quadratic"].value == pytest.approx(125.156, rel=5e-3)


def test_identity_plate():
    p = certify.builtin("circular_plate")
    r = certify.verify_identity(p, "v2", "nhat", certify.QuadratureConfig(angular_points=64))
    assert abs(r["rhs_total"].value - 235.49) <= 0.05


def test_infeasible_dual_raises():
    p = certify.builtin("model_1d")
    with pytest.raises(certify.InfeasibleError):
        certify.verify_identity(p, "v1", "ntilde")
    feas = certify.check_feasibility(p, "ntilde")
    assert not feas["feasible"]
    assert feas["violation"][1][0] == pytest.approx(17 / 18, abs=1e-6)


def test_majorant_and_beta():
    p = certify.builtin("model_1d")
    c = certify.majorant(p, "v1", "ntilde")
    assert c.a2 == pytest.approx(189.22, rel=5e-3)
    for beta in certify.beta_grid(0.05, 1.0, 20):
        rep = c.at(beta)
        assert rep["bound_holds"]
        assert rep["total"].value == pytest.approx(c.a0 + c.a1 * beta + c.a2 / beta)
    with pytest.raises(ValueError):
        c.at(0.0)


def test_eps_family_and_energies():
    p = certify.builtin("model_1d")
    v = p.approximation("v_eps(0.15)")
    assert v.kind == "primal"
    assert v.parameters["eps"] == pytest.approx(0.15)
    ju = certify.energy_primal(p, "u").value
    jv = certify.energy_primal(p, "v_eps(0.15)").value
    assert jv - ju == pytest.approx(178.096, rel=5e-3)
    with pytest.raises(ValueError):
        p.approximation("v_eps(0.9)")


def test_tables():
    rows = certify.table(3)
    assert len(rows) == 20
    flagged = [r for r in certify.table(1) if r["note"]]
    assert [r["quantity"] for r in flagged] == ["eps=0.05/k_percent"]
    assert certify.table_text(2) == certify.table_text(2)
    assert certify.table_text(2, "json").startswith("{")


def test_expressions():
    e = certify.parse_expr("-8*(x+1)^2*(6*x^2+4*x+1)")
    assert e.evaluate(x=-1.0) == 0.0
    assert e.differentiate("x", 4).evaluate(x=0.3) == pytest.approx(-1152.0)
    t = certify.parse_expr("sin(2*theta)", "polar")
    assert t.differentiate("theta").evaluate(r=1.0, theta=0.0) == pytest.approx(2.0)
    with pytest.raises(certify.ParseError):
        certify.parse_expr("1 + * x")


def test_problem_files():
    p = certify.load_problem(os.path.join(DATA, "model_1d.problem"))
    assert p.name == "model_1d"
    assert {"v1", "nstar", "ntilde", "u", "pstar"} <= set(p.approximation_names())
    bad = "[problem]\nname = t\ndomain = interval(-1, 1)\n[load]\npiece: domain=(-1, 1), expr=\"-1\"\n" \
          "[obstacle]\npiece: domain=(-1, 1), expr=\"x^2-0.5\"\n"
    with pytest.raises(certify.ValidationError):
        certify.load_problem_text(bad)
    with pytest.raises(certify.ProblemFileError):
        certify.load_problem_text("[problem]\nname t\n")


def test_plot():
    svg = certify.plot_svg(certify.builtin("model_1d"), ["u", "v1"])
    assert svg.startswith("<svg")
    assert svg == certify.plot_svg(certify.builtin("model_1d"), ["u", "v1"])
