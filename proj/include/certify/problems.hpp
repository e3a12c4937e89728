#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "certify/fields.hpp"

namespace certify {

/// Raised when problem data break a standing invariant.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::vector<std::string>& problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

class ProblemFileError : public std::runtime_error {
public:
    ProblemFileError(const std::string& msg, std::size_t line, std::size_t column);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

struct ExactSolution {
    PiecewiseScalarField u;
    PiecewiseSymMatrixField p_star;
    SubdomainSet coincidence;
    std::vector<double> free_boundary;  // interface points (1D) or radii (disk)
};

enum class ApproxKind { primal, dual };

struct Approximation {
    std::string name;
    ApproxKind kind;
    std::variant<PiecewiseScalarField, PiecewiseSymMatrixField> field;
    std::map<std::string, double> parameters;

    const PiecewiseScalarField& primal() const&;    // throws if dual
    const PiecewiseSymMatrixField& dual() const&;   // throws if primal
    PiecewiseScalarField primal() &&;
    PiecewiseSymMatrixField dual() &&;
};

struct ProblemInstance {
    std::string name;
    Domain domain;
    PiecewiseScalarField f;
    PiecewiseScalarField phi;
    double friedrichs;
    std::optional<ExactSolution> exact;
    std::map<std::string, Approximation> approximations;

    /// Looks up a named approximation. For built-in problems, parametric
    /// families are addressed as "v_eps(0.15)" / "n_eps(0.15)".
    Approximation approximation(const std::string& spec) const;
    std::vector<std::string> approximation_names() const;
};

std::vector<std::string> builtin_ids();
ProblemInstance builtin(const std::string& id);

/// Parametric members of the built-in 1D families; 0 <= eps <= 1/2.
Approximation model_v_eps(double eps);
Approximation model_n_eps(double eps);

/// Standing invariants: phi <= 0 on the boundary; with an exact pair, u is
/// admissible and p* matches hessian(u) off the coincidence set; primal
/// approximations are admissible. Returns the list of failures.
std::vector<std::string> validate(const ProblemInstance& p);

/// Parses the sectioned problem format and validates the result.
ProblemInstance load_problem_text(const std::string& text);
ProblemInstance load_problem(const std::string& path);

/// Either a built-in id or a path to a problem file.
ProblemInstance resolve_problem(const std::string& id_or_path);

}  // namespace certify
