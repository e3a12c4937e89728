"""Error identities and majorants for the biharmonic obstacle problem."""

from ._core import (
    Approximation,
    Domain,
    Estimate,
    Expr,
    InfeasibleError,
    MajorantComponents,
    MatrixField,
    ParseError,
    Problem,
    ProblemFileError,
    QuadratureConfig,
    QuadratureError,
    ScalarField,
    ValidationError,
    beta_grid,
    builtin,
    builtin_ids,
    check_feasibility,
    energy_dual,
    energy_primal,
    friedrichs_constant,
    load_problem,
    load_problem_text,
    majorant,
    parse_expr,
    plot_svg,
    table,
    table_text,
    validate,
    verify_identity,
)

__all__ = [
    "Approximation",
    "Domain",
    "Estimate",
    "Expr",
    "InfeasibleError",
    "MajorantComponents",
    "MatrixField",
    "ParseError",
    "Problem",
    "ProblemFileError",
    "QuadratureConfig",
    "QuadratureError",
    "ScalarField",
    "ValidationError",
    "beta_grid",
    "builtin",
    "builtin_ids",
    "check_feasibility",
    "energy_dual",
    "energy_primal",
    "friedrichs_constant",
    "load_problem",
    "load_problem_text",
    "majorant",
    "parse_expr",
    "plot_svg",
    "table",
    "table_text",
    "validate",
    "verify_identity",
]
