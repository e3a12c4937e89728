#pragma once

#include <optional>
#include <vector>

#include "certify/fields.hpp"
#include "certify/quadrature.hpp"

namespace certify {

struct ProblemInstance;

/// C_F with ||w|| <= C_F ||grad grad w|| on clamped functions: ((b-a)/pi)^2 on
/// an interval, (R/j0)^2 on a disk of radius R (j0 the first zero of J0).
double friedrichs_constant(const Domain& d);

/// Smallest admissible beta; used when the residual term vanishes.
inline constexpr double kBetaMin = 0.05;

/// ||(f - div Div n)_+||^2. Integration breaks at the sign changes of
/// f - div Div n (along every sampled ray on a disk).
Estimate positive_part_l2_sq(const ProblemInstance& p, const PiecewiseSymMatrixField& n, const QuadratureConfig& cfg);

/// Coefficient 3 C_F^2 / 2 of ||(f - div Div n)_+||^2 / beta in the majorant.
double projection_bound(double friedrichs);

struct MajorantReport {
    double beta = 1.0;
    Estimate term_quadratic;  // 1/2 (1 + beta) ||grad grad v - n||^2
    Estimate term_residual;   // 3/(2 beta) C_F^2 ||(f - div Div n)_+||^2
    Estimate term_obstacle;   // integral of (f - div Div n)(phi - v)
    Estimate total;
    // With an exact solution:
    std::optional<Estimate> lhs_literal;  // (1-beta)/2 (||grad grad (u-v)||^2 + ||p*-n||^2) + mu_phi + mu*_phi
    std::optional<Estimate> lhs_compat;   // the same with prefactor (2-beta)/2
    std::optional<double> efficiency_literal;
    std::optional<double> efficiency_compat;
    bool bound_holds = true;  // lhs_literal <= total + summed quadrature errors
};

/// Beta-independent ingredients; the majorant is A0 + A1 beta + A2 / beta.
struct MajorantComponents {
    Estimate quad_sq;      // ||grad grad v - n||^2
    Estimate residual_sq;  // ||(f - div Div n)_+||^2
    Estimate obstacle;     // integral of (f - div Div n)(phi - v)
    double friedrichs = 0.0;

    struct Exact {
        Estimate primal_sq;  // ||grad grad (u - v)||^2
        Estimate dual_sq;    // ||p* - n||^2
        Estimate mu_phi;
        Estimate mu_star_phi;
    };
    std::optional<Exact> exact;

    double a0() const { return 0.5 * quad_sq.value + obstacle.value; }
    double a1() const { return 0.5 * quad_sq.value; }
    double a2() const { return projection_bound(friedrichs) * residual_sq.value; }

    MajorantReport report_at(double beta) const;
    /// Minimiser of A1 beta + A2 / beta over [kBetaMin, 1].
    double optimal_beta() const;
};

/// Needs n in H(div Div). The exact-side fields are filled when the problem has an exact solution.
MajorantComponents majorant_components(const ProblemInstance& p, const PiecewiseScalarField& v,
                                       const PiecewiseSymMatrixField& n, const QuadratureConfig& cfg);

MajorantReport majorant_eval(const ProblemInstance& p, const PiecewiseScalarField& v, const PiecewiseSymMatrixField& n,
                             double beta, const QuadratureConfig& cfg);

/// Evenly spaced betas a, ..., b (n >= 1 points); each must lie in (0, 1].
std::vector<double> beta_grid(double a, double b, int n);

}  // namespace certify
