#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "certify/expr.hpp"

namespace certify {

class FieldError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Geometry of the problem: an interval (a, b) in x, or a disk of radius R
/// described in polar coordinates. Piecewise fields are laid out along the
/// "layout coordinate" s, which is x on an interval and r on a disk.
class Domain {
public:
    enum class Kind { interval, disk };

    static Domain interval(double a, double b);
    static Domain disk(double radius);

    Kind kind() const { return kind_; }
    bool is_disk() const { return kind_ == Kind::disk; }
    double lower() const { return lower_; }
    double upper() const { return upper_; }
    VarSpace space() const { return is_disk() ? VarSpace::polar : VarSpace::line; }
    Var layout_var() const { return is_disk() ? Var::r : Var::x; }
    Coords at(double s, double theta = 0.0) const {
        return is_disk() ? Coords::polar(s, theta) : Coords::line(s);
    }
    std::string describe() const;

    bool operator==(const Domain&) const = default;

private:
    Domain(Kind k, double lo, double hi) : kind_(k), lower_(lo), upper_(hi) {}
    Kind kind_;
    double lower_;
    double upper_;
};

struct Range {
    double lo;
    double hi;
    bool operator==(const Range&) const = default;
};

/// Union of disjoint closed ranges of the layout coordinate: intervals in 1D,
/// annuli (or a central disk when lo == 0) on a disk.
class SubdomainSet {
public:
    SubdomainSet() = default;
    explicit SubdomainSet(std::vector<Range> ranges, double merge_gap = 1e-12);

    const std::vector<Range>& components() const { return ranges_; }
    bool empty() const { return ranges_.empty(); }
    bool contains(double s, double slack = 0.0) const;
    double length() const;
    /// Component endpoints strictly inside (lo, hi).
    std::vector<double> interior_boundary(double lo, double hi) const;
    SubdomainSet complement(double lo, double hi) const;
    bool subset_of(const SubdomainSet& other, double slack = 1e-12) const;
    std::string describe() const;

private:
    std::vector<Range> ranges_;
};

struct ScalarPiece {
    double lo;
    double hi;
    Expr expr;
};

/// Scalar field given by one closed-form expression per piece.
///
/// Pieces tile [domain.lower, domain.upper] in order. A point on an interface
/// belongs to the piece on its left (inner annulus on a disk).
class PiecewiseScalarField {
public:
    /// `claimed_smoothness` of 0 or 1 asks the constructor to verify C^0 / C^1
    /// continuity at every interface; -1 makes no claim.
    PiecewiseScalarField(Domain domain, std::vector<ScalarPiece> pieces, int claimed_smoothness = -1);

    static PiecewiseScalarField constant(const Domain& domain, double value);
    /// Pieces given as (lo, hi, expression text).
    static PiecewiseScalarField parse(const Domain& domain,
                                      const std::vector<std::tuple<double, double, std::string>>& pieces,
                                      int claimed_smoothness = -1);

    const Domain& domain() const { return domain_; }
    const std::vector<ScalarPiece>& pieces() const { return pieces_; }
    int claimed_smoothness() const { return smoothness_; }
    std::vector<double> interfaces() const;
    std::size_t piece_index(double s) const;

    double operator()(const Coords& p) const;
    double value(double s, double theta = 0.0) const { return (*this)(domain_.at(s, theta)); }
    /// Evaluates piece `i` directly, bypassing the interface tie rule.
    double piece_value(std::size_t i, const Coords& p) const { return compiled_[i](p); }

private:
    Domain domain_;
    std::vector<ScalarPiece> pieces_;
    std::vector<CompiledExpr> compiled_;
    int smoothness_;
};

struct MatrixPiece {
    double lo;
    double hi;
    Expr e11;
    Expr e12;  // unused on intervals
    Expr e22;  // unused on intervals
};

/// Symmetric matrix (moment) field. On an interval it is the 1x1 field n(x);
/// on a disk it holds the Cartesian components n11, n12 = n21, n22 written
/// as expressions in (r, theta).
class PiecewiseSymMatrixField {
public:
    PiecewiseSymMatrixField(Domain domain, std::vector<MatrixPiece> pieces);

    static PiecewiseSymMatrixField zero(const Domain& domain);
    /// 1D convenience: pieces (lo, hi, n).
    static PiecewiseSymMatrixField parse_line(const Domain& domain,
                                              const std::vector<std::tuple<double, double, std::string>>& pieces);
    /// 2D convenience: pieces (lo, hi, {n11, n12, n22}).
    static PiecewiseSymMatrixField parse_polar(
        const Domain& domain, const std::vector<std::pair<Range, std::array<std::string, 3>>>& pieces);

    const Domain& domain() const { return domain_; }
    const std::vector<MatrixPiece>& pieces() const { return pieces_; }
    std::vector<double> interfaces() const;
    std::size_t piece_index(double s) const;

    /// (n11, n12, n22); on intervals (n, 0, 0).
    std::array<double, 3> operator()(const Coords& p) const;
    std::array<double, 3> piece_entries(std::size_t i, const Coords& p) const;
    /// Squared Frobenius norm |n|^2 = n11^2 + 2 n12^2 + n22^2.
    double frobenius_sq(const Coords& p) const;

private:
    Domain domain_;
    std::vector<MatrixPiece> pieces_;
    std::vector<std::array<CompiledExpr, 3>> compiled_;
};

/// Cartesian partial derivatives of a polar expression (valid for r > 0).
Expr d_dx_polar(const Expr& e);
Expr d_dy_polar(const Expr& e);

/// Hessian: v'' on an interval; Cartesian second derivatives on a disk.
PiecewiseSymMatrixField hessian(const PiecewiseScalarField& v);
/// div Div n: n'' on an interval; d11 n11 + 2 d12 n12 + d22 n22 on a disk. Defined piecewise.
PiecewiseScalarField div_div(const PiecewiseSymMatrixField& n);
/// Laplacian (trace of the Hessian), piecewise.
PiecewiseScalarField laplacian(const PiecewiseScalarField& v);

/// Pointwise a - b on the union of both piece layouts.
PiecewiseScalarField subtract(const PiecewiseScalarField& a, const PiecewiseScalarField& b);
PiecewiseSymMatrixField subtract(const PiecewiseSymMatrixField& a, const PiecewiseSymMatrixField& b);

/// Sorted union of the interfaces of several layouts, without the domain ends.
std::vector<double> merge_interfaces(std::initializer_list<std::vector<double>> lists);

enum class Side { left, right };

/// k-th derivative along the layout coordinate of the piece adjoining `point`
/// from `side`, evaluated at the interface. On a disk `theta` fixes the ray.
double one_sided_limit(const PiecewiseScalarField& field, double point, Side side, int derivative_order,
                       double theta = 0.0);

/// Jump [Div p . nu] = (value on the coincidence side) - (value on the free side),
/// nu the exterior normal of the coincidence set. Flipping the side flips nu as
/// well, so the result is (Div p . e_s)(point-0) - (Div p . e_s)(point+0) either
/// way, with e_s the unit vector along the layout coordinate.
double flux_jump(const PiecewiseSymMatrixField& p, double point, double theta = 0.0);

/// Div n . e_s for piece `i`, as an expression.
Expr layout_divergence(const PiecewiseSymMatrixField& n, std::size_t i);

struct SamplingConfig {
    int samples_per_piece = 512;
    int angular_points = 64;
};

/// {|v - phi| <= tol}. Pieces whose expressions literally coincide are taken
/// whole; elsewhere runs of at least two consecutive samples within tol are
/// kept and their ends refined by bisection. On a disk the condition must hold
/// on every sampled ray.
SubdomainSet coincidence_set(const PiecewiseScalarField& v, const PiecewiseScalarField& phi, double tol = 1e-9,
                             const SamplingConfig& cfg = {});

struct Violation {
    std::string kind;  // "below-obstacle", "boundary-value", "boundary-slope"
    double s;
    double theta;
    double value;
};

struct AdmissibilityReport {
    bool admissible = true;
    std::size_t violation_count = 0;
    std::vector<Violation> violations;  // first few, for diagnostics
};

/// v >= phi - 1e-9 on a dense sample refined at sampled minima, plus clamped
/// boundary values and normal derivatives within 1e-9.
AdmissibilityReport check_admissible(const PiecewiseScalarField& v, const PiecewiseScalarField& phi,
                                     const SamplingConfig& cfg = {});

struct HDivDivReport {
    bool ok = true;
    std::vector<double> failing_interfaces;
};

/// True when entries and Div n are continuous across every interface, so
/// that div Div n carries no singular interface part.
HDivDivReport check_h_divdiv(const PiecewiseSymMatrixField& n, const SamplingConfig& cfg = {});

}  // namespace certify
