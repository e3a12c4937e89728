#include "certify/majorant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "certify/measures.hpp"
#include "certify/problems.hpp"

namespace certify {
namespace {

constexpr double kJ0 = 2.404825557695773;  // first positive zero of J0

// Sign changes of piece i of g along the ray theta, found on a uniform sample
// and polished by bisection.
void collect_roots(const PiecewiseScalarField& g, std::size_t i, double theta, std::vector<double>& out) {
    const Domain& d = g.domain();
    const double lo = g.pieces()[i].lo;
    const double hi = g.pieces()[i].hi;
    auto at = [&](double s) { return g.piece_value(i, d.at(d.is_disk() ? std::max(s, 1e-12 * d.upper()) : s, theta)); };
    constexpr int n = 512;
    double prev_s = lo;
    double prev = at(lo);
    for (int j = 1; j < n; ++j) {
        const double s = lo + (hi - lo) * j / (n - 1);
        const double v = at(s);
        if ((prev > 0.0) != (v > 0.0)) {
            double a = prev_s, b = s;
            const bool a_pos = prev > 0.0;
            for (int it = 0; it < 80; ++it) {
                const double m = 0.5 * (a + b);
                ((at(m) > 0.0) == a_pos ? a : b) = m;
            }
            out.push_back(0.5 * (a + b));
        }
        prev_s = s;
        prev = v;
    }
}

}  // namespace

double friedrichs_constant(const Domain& d) {
    if (d.is_disk()) {
        const double c = d.upper() / kJ0;
        return c * c;
    }
    const double c = (d.upper() - d.lower()) / std::numbers::pi;
    return c * c;
}

double projection_bound(double friedrichs) { return 1.5 * friedrichs * friedrichs; }

Estimate positive_part_l2_sq(const ProblemInstance& p, const PiecewiseSymMatrixField& n, const QuadratureConfig& cfg) {
    cfg.validate();
    const Domain& d = p.domain;
    const auto g = subtract(p.f, div_div(n));
    const auto base = breaks_of(p, {n.interfaces(), g.interfaces()});
    auto ray = [&](double theta) {
        std::vector<double> br = base;
        for (std::size_t i = 0; i < g.pieces().size(); ++i) collect_roots(g, i, theta, br);
        auto f = [&](double s) {
            const double v = std::max(0.0, g(d.at(s, theta)));
            return d.is_disk() ? v * v * s : v * v;
        };
        return integrate_1d(f, d.lower(), d.upper(), br, cfg);
    };
    if (!d.is_disk()) return ray(0.0);
    const int m = cfg.angular_points;
    double full = 0.0, half = 0.0, err = 0.0;
    for (int k = 0; k < m; ++k) {
        const auto r = ray(2.0 * std::numbers::pi * k / m);
        full += r.value;
        err += r.error;
        if (k % 2 == 0) half += r.value;
    }
    const double w = 2.0 * std::numbers::pi / m;
    return {w * full, w * err + std::abs(w * full - 2.0 * w * half)};
}

double MajorantComponents::optimal_beta() const {
    const double A1 = a1();
    const double A2 = a2();
    if (A2 <= 0.0) return A1 > 0.0 ? kBetaMin : 1.0;
    if (A1 <= 0.0) return 1.0;
    return std::clamp(std::sqrt(A2 / A1), kBetaMin, 1.0);
}

MajorantReport MajorantComponents::report_at(double beta) const {
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in (0, 1]");
    MajorantReport r;
    r.beta = beta;
    r.term_quadratic = (0.5 * (1.0 + beta)) * quad_sq;
    r.term_residual = (projection_bound(friedrichs) / beta) * residual_sq;
    r.term_obstacle = obstacle;
    r.total = r.term_quadratic + r.term_residual + r.term_obstacle;
    if (exact) {
        const Estimate sq = exact->primal_sq + exact->dual_sq;
        const Estimate nl = exact->mu_phi + exact->mu_star_phi;
        r.lhs_literal = (0.5 * (1.0 - beta)) * sq + nl;
        r.lhs_compat = (0.5 * (2.0 - beta)) * sq + nl;
        if (r.lhs_literal->value != 0.0) r.efficiency_literal = r.total.value / r.lhs_literal->value;
        if (r.lhs_compat->value != 0.0) r.efficiency_compat = r.total.value / r.lhs_compat->value;
        r.bound_holds = r.lhs_literal->value <= r.total.value + r.total.error + r.lhs_literal->error;
    }
    return r;
}

MajorantComponents majorant_components(const ProblemInstance& p, const PiecewiseScalarField& v,
                                       const PiecewiseSymMatrixField& n, const QuadratureConfig& cfg) {
    MajorantComponents c;
    auto [q, o] = identity_rhs(p, v, n, cfg);
    c.quad_sq = 2.0 * q;
    c.obstacle = o;
    c.residual_sq = positive_part_l2_sq(p, n, cfg);
    c.friedrichs = p.friedrichs;
    if (p.exact) {
        const auto mp = mu_primal(p, v, cfg);
        const auto md = mu_dual(p, n, cfg);
        c.exact = MajorantComponents::Exact{2.0 * mp.quadratic, 2.0 * md.quadratic, mp.nonlinear, md.nonlinear};
    }
    return c;
}

MajorantReport majorant_eval(const ProblemInstance& p, const PiecewiseScalarField& v, const PiecewiseSymMatrixField& n,
                             double beta, const QuadratureConfig& cfg) {
    return majorant_components(p, v, n, cfg).report_at(beta);
}

std::vector<double> beta_grid(double a, double b, int n) {
    if (n < 1) throw std::invalid_argument("beta grid needs at least one point");
    if (n == 1 && a != b) throw std::invalid_argument("a one-point beta grid needs a == b");
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        const double beta = n == 1 ? a : a + (b - a) * i / (n - 1);
        if (!(beta > 0.0 && beta <= 1.0 + 1e-12)) throw std::invalid_argument("beta grid values must lie in (0, 1]");
        out.push_back(std::min(beta, 1.0));
    }
    return out;
}

}  // namespace certify
