#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "certify/fields.hpp"

namespace certify {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 4000;  // per integration range
    int angular_points = 64;      // periodic trapezoid in theta on disks; even, >= 4

    void validate() const;  // throws std::invalid_argument
};

/// A value with an error bound. Sums add bounds; scaling scales them.
struct Estimate {
    double value = 0.0;
    double error = 0.0;

    Estimate& operator+=(const Estimate& o) {
        value += o.value;
        error += o.error;
        return *this;
    }
    friend Estimate operator+(Estimate a, const Estimate& b) { return a += b; }
    friend Estimate operator-(Estimate a, const Estimate& b) {
        a.value -= b.value;
        a.error += b.error;
        return a;
    }
    friend Estimate operator*(double c, Estimate a) {
        a.value *= c;
        a.error *= c < 0 ? -c : c;
        return a;
    }
};

struct IntegralResult : Estimate {
    int evaluations = 0;  // integrand calls (per angular sweep on disks)
    int panels = 0;
};

class QuadratureError : public std::runtime_error {
public:
    enum class Kind { non_finite, no_convergence };
    QuadratureError(Kind kind, const std::string& msg, Estimate best = {})
        : std::runtime_error(msg), kind_(kind), best_(best) {}
    Kind kind() const { return kind_; }
    const Estimate& best() const { return best_; }

private:
    Kind kind_;
    Estimate best_;
};

/// Adaptive Gauss-Kronrod 7-15 on [a, b]. Every break inside (a, b) starts a
/// panel boundary. Error per panel is |K15 - G7|; the worst panel is bisected
/// until the summed error meets max(abs_tol, rel_tol |I|).
IntegralResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                            const std::vector<double>& breaks, const QuadratureConfig& cfg);

/// Integral over the annulus r0 <= r <= r1 of f(r, theta) r dr dtheta.
/// Theta uses the periodic trapezoid rule; its error is estimated from the
/// half rule on the same nodes and added to the reported bound.
IntegralResult integrate_annulus(const std::function<double(double, double)>& f, double r0, double r1,
                                 const std::vector<double>& breaks, const QuadratureConfig& cfg);

/// Integral of f over the given ranges of the layout coordinate (intervals,
/// or annuli on a disk).
Estimate integrate_over(const Domain& domain, const std::vector<Range>& ranges, const std::vector<double>& breaks,
                        const std::function<double(const Coords&)>& f, const QuadratureConfig& cfg);

/// Integral over the whole domain.
Estimate integrate_domain(const Domain& domain, const std::vector<double>& breaks,
                          const std::function<double(const Coords&)>& f, const QuadratureConfig& cfg);

/// ||v||^2 and ||n||^2 (Frobenius) over the domain, split at piece interfaces.
Estimate l2_norm_sq(const PiecewiseScalarField& v, const QuadratureConfig& cfg);
Estimate l2_norm_sq(const PiecewiseSymMatrixField& n, const QuadratureConfig& cfg);

}  // namespace certify
