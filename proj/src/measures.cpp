#include "certify/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace certify {
namespace {

const ExactSolution& need_exact(const ProblemInstance& p) {
    if (!p.exact) throw std::invalid_argument("problem '" + p.name + "' carries no exact solution");
    return *p.exact;
}

// Circle integral of g(theta) * rho dtheta by the periodic trapezoid, with the
// half-rule difference as error.
Estimate circle_integral(double rho, int m, const std::function<double(double)>& g) {
    double full = 0.0, half = 0.0;
    for (int k = 0; k < m; ++k) {
        const double v = g(2.0 * std::numbers::pi * k / m);
        full += v;
        if (k % 2 == 0) half += v;
    }
    full *= 2.0 * std::numbers::pi / m * rho;
    half *= 4.0 * std::numbers::pi / m * rho;
    return {full, std::abs(full - half)};
}

std::vector<double> angular_nodes(const Domain& d, int n) {
    if (!d.is_disk()) return {0.0};
    std::vector<double> t;
    for (int k = 0; k < n; ++k) t.push_back(2.0 * std::numbers::pi * k / n);
    return t;
}

}  // namespace

std::vector<double> breaks_of(const ProblemInstance& p, std::initializer_list<std::vector<double>> extra) {
    std::vector<double> all = merge_interfaces({p.f.interfaces(), p.phi.interfaces()});
    for (const auto& e : extra) all.insert(all.end(), e.begin(), e.end());
    if (p.exact) {
        const auto u = p.exact->u.interfaces();
        const auto s = p.exact->p_star.interfaces();
        all.insert(all.end(), u.begin(), u.end());
        all.insert(all.end(), s.begin(), s.end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

Estimate energy_primal(const ProblemInstance& p, const PiecewiseScalarField& v, const QuadratureConfig& cfg) {
    const auto h = hessian(v);
    const auto br = breaks_of(p, {v.interfaces()});
    return integrate_domain(
        p.domain, br, [&](const Coords& c) { return 0.5 * h.frobenius_sq(c) - p.f(c) * v(c); }, cfg);
}

DualEnergy energy_dual(const ProblemInstance& p, const PiecewiseSymMatrixField& n, const QuadratureConfig& cfg) {
    require_h_divdiv(n);
    const auto feas = check_feasibility(p, n, {64 * 8, cfg.angular_points});
    if (!feas.feasible) return {{-std::numeric_limits<double>::infinity(), 0.0}, false};
    const auto dd = div_div(n);
    const auto br = breaks_of(p, {n.interfaces()});
    const Estimate e = integrate_domain(
        p.domain, br, [&](const Coords& c) { return -0.5 * n.frobenius_sq(c) - p.phi(c) * (p.f(c) - dd(c)); }, cfg);
    return {e, true};
}

MeasureBreakdown mu_primal(const ProblemInstance& p, const PiecewiseScalarField& v, const QuadratureConfig& cfg) {
    const auto& ex = need_exact(p);
    MeasureBreakdown m;
    const auto e = subtract(hessian(ex.u), hessian(v));
    const auto br = breaks_of(p, {v.interfaces(), e.interfaces()});
    m.quadratic = 0.5 * integrate_domain(p.domain, br, [&](const Coords& c) { return e.frobenius_sq(c); }, cfg);

    const auto dd = div_div(hessian(ex.u));
    const Estimate interior = integrate_over(
        p.domain, ex.coincidence.components(), br,
        [&](const Coords& c) { return (dd(c) - p.f(c)) * (v(c) - ex.u(c)); }, cfg);

    const auto pu = hessian(ex.u);
    for (double g : ex.free_boundary) {
        if (p.domain.is_disk()) {
            m.jump_part += -1.0 * circle_integral(g, cfg.angular_points, [&](double t) {
                return flux_jump(pu, g, t) * (v.value(g, t) - ex.u.value(g, t));
            });
        } else {
            m.jump_part.value += -flux_jump(pu, g) * (v.value(g) - ex.u.value(g));
        }
    }
    m.nonlinear = interior + m.jump_part;
    m.total = m.quadratic + m.nonlinear;
    return m;
}

MeasureBreakdown mu_dual(const ProblemInstance& p, const PiecewiseSymMatrixField& n, const QuadratureConfig& cfg) {
    const auto& ex = need_exact(p);
    MeasureBreakdown m;
    const auto diff = subtract(ex.p_star, n);
    const auto br = breaks_of(p, {n.interfaces()});
    m.quadratic = 0.5 * integrate_domain(p.domain, br, [&](const Coords& c) { return diff.frobenius_sq(c); }, cfg);
    const auto dd = div_div(n);
    const auto free = ex.coincidence.complement(p.domain.lower(), p.domain.upper());
    m.nonlinear = integrate_over(
        p.domain, free.components(), br, [&](const Coords& c) { return (p.f(c) - dd(c)) * (p.phi(c) - ex.u(c)); },
        cfg);
    m.total = m.quadratic + m.nonlinear;
    m.warn_infeasible = !check_feasibility(p, n, {512, cfg.angular_points}).feasible;
    return m;
}

FeasibilityReport check_feasibility(const ProblemInstance& p, const PiecewiseSymMatrixField& n,
                                    const SamplingConfig& sampling, double tol) {
    const Domain& d = p.domain;
    const auto g = subtract(p.f, div_div(n));
    const auto thetas = angular_nodes(d, sampling.angular_points);
    const int ns = std::max(sampling.samples_per_piece, 3);
    FeasibilityReport rep;
    rep.max_violation = -std::numeric_limits<double>::infinity();
    std::vector<Range> bad;
    for (std::size_t i = 0; i < g.pieces().size(); ++i) {
        const double lo = g.pieces()[i].lo;
        const double hi = g.pieces()[i].hi;
        for (double t : thetas) {
            auto at = [&](double s) {
                // Stay off the pole, where polar expressions may be singular.
                if (d.is_disk()) s = std::max(s, 1e-12 * d.upper());
                return g.piece_value(i, d.at(s, t));
            };
            auto refine = [&](double inside, double outside) {
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (inside + outside);
                    (at(mid) > tol ? inside : outside) = mid;
                }
                return 0.5 * (inside + outside);
            };
            std::vector<double> s(static_cast<std::size_t>(ns));
            std::vector<bool> pos(static_cast<std::size_t>(ns));
            for (int j = 0; j < ns; ++j) {
                s[j] = lo + (hi - lo) * j / (ns - 1);
                const double val = at(s[j]);
                rep.max_violation = std::max(rep.max_violation, val);
                pos[j] = val > tol;
            }
            for (int j = 0; j < ns;) {
                if (!pos[j]) {
                    ++j;
                    continue;
                }
                int e = j;
                while (e + 1 < ns && pos[e + 1]) ++e;
                bad.push_back({j == 0 ? lo : refine(s[j], s[j - 1]), e == ns - 1 ? hi : refine(s[e], s[e + 1])});
                j = e + 1;
            }
        }
    }
    rep.violation = SubdomainSet(bad);
    rep.feasible = rep.violation.empty();
    return rep;
}

void require_h_divdiv(const PiecewiseSymMatrixField& n, const std::string& name) {
    const auto rep = check_h_divdiv(n);
    if (rep.ok) return;
    std::ostringstream os;
    os << name << " is not in H(div Div): entries or Div jump at";
    for (double x : rep.failing_interfaces) os << ' ' << x;
    throw ValidationError({os.str()});
}

std::pair<Estimate, Estimate> identity_rhs(const ProblemInstance& p, const PiecewiseScalarField& v,
                                           const PiecewiseSymMatrixField& n, const QuadratureConfig& cfg) {
    require_h_divdiv(n);
    const auto diff = subtract(hessian(v), n);
    const auto dd = div_div(n);
    const auto br = breaks_of(p, {v.interfaces(), n.interfaces()});
    const Estimate q =
        0.5 * integrate_domain(p.domain, br, [&](const Coords& c) { return diff.frobenius_sq(c); }, cfg);
    const Estimate o = integrate_domain(
        p.domain, br, [&](const Coords& c) { return (p.f(c) - dd(c)) * (p.phi(c) - v(c)); }, cfg);
    return {q, o};
}

IdentityReport verify_identity(const ProblemInstance& p, const PiecewiseScalarField& v,
                               const PiecewiseSymMatrixField& n, const QuadratureConfig& cfg) {
    require_h_divdiv(n);
    const auto feas = check_feasibility(p, n, {512, cfg.angular_points});
    if (!feas.feasible) {
        std::ostringstream os;
        os << "dual field violates f - div Div n <= 0 on " << feas.violation.describe() << " (max "
           << feas.max_violation << ")";
        throw InfeasibleError(os.str(), feas);
    }
    IdentityReport r;
    r.lhs_primal = mu_primal(p, v, cfg);
    r.lhs_dual = mu_dual(p, n, cfg);
    std::tie(r.rhs_quadratic, r.rhs_obstacle) = identity_rhs(p, v, n, cfg);
    r.lhs_total = r.lhs_primal.total + r.lhs_dual.total;
    r.rhs_total = r.rhs_quadratic + r.rhs_obstacle;
    r.residual = std::abs(r.lhs_total.value - r.rhs_total.value);
    r.budget = r.lhs_total.error + r.rhs_total.error + 1e-10 * std::abs(r.rhs_total.value);
    r.feasible = true;
    r.pass = r.residual <= r.budget;
    return r;
}

}  // namespace certify
