#pragma once

#include <stdexcept>
#include <utility>

#include "certify/problems.hpp"
#include "certify/quadrature.hpp"

namespace certify {

struct MeasureBreakdown {
    Estimate quadratic;  // 1/2 ||grad grad (u - v)||^2  or  1/2 ||p* - n||^2
    Estimate nonlinear;  // mu_phi(v) (jump part included)  or  mu*_phi(n)
    Estimate jump_part;  // free-boundary part of mu_phi(v); zero for the dual
    Estimate total;
    bool warn_infeasible = false;  // dual only: n violates f - div Div n <= 0
};

struct FeasibilityReport {
    bool feasible = true;
    SubdomainSet violation;     // {f - div Div n > tol}, radial ranges on a disk
    double max_violation = 0.0; // max of f - div Div n over the samples
};

class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(const std::string& msg, FeasibilityReport report)
        : std::runtime_error(msg), report_(std::move(report)) {}
    const FeasibilityReport& report() const { return report_; }

private:
    FeasibilityReport report_;
};

/// J(v) = integral of 1/2 |grad grad v|^2 - f v.
Estimate energy_primal(const ProblemInstance& p, const PiecewiseScalarField& v, const QuadratureConfig& cfg);

struct DualEnergy {
    Estimate value;  // -inf when infeasible
    bool feasible;
};
/// I*(n) = -1/2 ||n||^2 - integral of phi (f - div Div n) for feasible n.
/// Throws ValidationError unless n is in H(div Div).
DualEnergy energy_dual(const ProblemInstance& p, const PiecewiseSymMatrixField& n, const QuadratureConfig& cfg);

/// Primal measure. Needs the exact solution and its free boundary.
MeasureBreakdown mu_primal(const ProblemInstance& p, const PiecewiseScalarField& v, const QuadratureConfig& cfg);
/// Dual measure; evaluated for infeasible n as well, with the warning flag set.
MeasureBreakdown mu_dual(const ProblemInstance& p, const PiecewiseSymMatrixField& n, const QuadratureConfig& cfg);

/// f - div Div n <= tol, located by sampling and bisection on every piece
/// (on every sampled ray on a disk).
FeasibilityReport check_feasibility(const ProblemInstance& p, const PiecewiseSymMatrixField& n,
                                    const SamplingConfig& sampling = {}, double tol = 1e-9);

/// Throws ValidationError when n has interface jumps that put a singular
/// part into div Div n.
void require_h_divdiv(const PiecewiseSymMatrixField& n, const std::string& name = "dual field");

/// (1/2 ||grad grad v - n||^2, integral of (f - div Div n)(phi - v)); uses no exact data.
std::pair<Estimate, Estimate> identity_rhs(const ProblemInstance& p, const PiecewiseScalarField& v,
                                           const PiecewiseSymMatrixField& n, const QuadratureConfig& cfg);

struct IdentityReport {
    MeasureBreakdown lhs_primal;
    MeasureBreakdown lhs_dual;
    Estimate rhs_quadratic;
    Estimate rhs_obstacle;
    Estimate lhs_total;
    Estimate rhs_total;
    double residual = 0.0;  // |lhs - rhs|
    double budget = 0.0;    // summed quadrature errors + 1e-10 |rhs|
    bool feasible = true;
    bool pass = false;      // residual <= budget
};

/// Both sides of mu(v) + mu*(n) = 1/2 ||grad grad v - n||^2 + integral (f - div Div n)(phi - v).
/// Throws InfeasibleError if n is not feasible.
IdentityReport verify_identity(const ProblemInstance& p, const PiecewiseScalarField& v,
                               const PiecewiseSymMatrixField& n, const QuadratureConfig& cfg);

/// Breakpoints shared by the fields of a computation, domain ends excluded.
std::vector<double> breaks_of(const ProblemInstance& p, std::initializer_list<std::vector<double>> extra);

}  // namespace certify
