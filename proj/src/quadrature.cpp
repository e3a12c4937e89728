#include "certify/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

namespace certify {
namespace {

// Kronrod 15-point abscissae (positive half, descending) and weights; the
// odd-indexed abscissae are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Integrands may carry an auxiliary channel integrated on the same panels
// (used for the angular error estimate on disks).
struct Sample {
    double main;
    double aux;
};
using PanelFn = std::function<Sample(double)>;

struct Panel {
    double a;
    double b;
    double kronrod;
    double error;
    double abs_integral;  // integral of |f|, for the roundoff floor
    double aux;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const PanelFn& f, double a, double b, int& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const Sample fc = f(c);
    double k = kWgk[7] * fc.main;
    double g = kWg[3] * fc.main;
    double kabs = kWgk[7] * std::abs(fc.main);
    double kaux = kWgk[7] * fc.aux;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const Sample f1 = f(c - dx);
        const Sample f2 = f(c + dx);
        k += kWgk[j] * (f1.main + f2.main);
        kabs += kWgk[j] * (std::abs(f1.main) + std::abs(f2.main));
        kaux += kWgk[j] * (f1.aux + f2.aux);
        if (j % 2 == 1) g += kWg[j / 2] * (f1.main + f2.main);
    }
    evals += 15;
    return {a, b, k * h, std::abs((k - g) * h), kabs * std::abs(h), kaux * h};
}

IntegralResult adaptive(const PanelFn& f, double a, double b, std::vector<double> breaks, const QuadratureConfig& cfg,
                        double* aux_total) {
    IntegralResult res;
    if (aux_total) *aux_total = 0.0;
    if (b == a) return res;
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [&](double x) { return !(x > a && x < b); }),
                 breaks.end());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    breaks.insert(breaks.begin(), a);
    breaks.push_back(b);

    std::priority_queue<Panel> queue;
    double total = 0.0, err = 0.0, abs_total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const Panel p = gk15(f, breaks[i], breaks[i + 1], res.evaluations);
        total += p.kronrod;
        err += p.error;
        abs_total += p.abs_integral;
        queue.push(p);
    }
    const double min_width = 64 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
    std::vector<Panel> frozen;  // panels too narrow to split
    int splits = 0;
    auto target = [&] {
        return std::max({cfg.abs_tol, cfg.rel_tol * std::abs(total),
                         50 * std::numeric_limits<double>::epsilon() * abs_total});
    };
    while (err > target() && !queue.empty()) {
        if (splits >= cfg.max_subdivisions) {
            std::ostringstream os;
            os << "adaptive quadrature on [" << a << ", " << b << "] did not reach tolerance after " << splits
               << " subdivisions (error " << err << ")";
            throw QuadratureError(QuadratureError::Kind::no_convergence, os.str(), {total, err});
        }
        const Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (worst.b - worst.a < min_width || mid <= worst.a || mid >= worst.b) {
            frozen.push_back(worst);
            continue;
        }
        const Panel l = gk15(f, worst.a, mid, res.evaluations);
        const Panel r = gk15(f, mid, worst.b, res.evaluations);
        total += l.kronrod + r.kronrod - worst.kronrod;
        err += l.error + r.error - worst.error;
        abs_total += l.abs_integral + r.abs_integral - worst.abs_integral;
        queue.push(l);
        queue.push(r);
        ++splits;
    }
    // Re-sum from the panels to shed drift from the running updates.
    double value = 0.0, error = 0.0, aux = 0.0;
    int panels = 0;
    auto take = [&](const Panel& p) {
        value += p.kronrod;
        error += p.error;
        aux += p.aux;
        ++panels;
    };
    for (const Panel& p : frozen) take(p);
    while (!queue.empty()) {
        take(queue.top());
        queue.pop();
    }
    if (!std::isfinite(value) || !std::isfinite(error)) {
        throw QuadratureError(QuadratureError::Kind::non_finite, "integral is not finite");
    }
    res.value = value;
    res.error = error;
    res.panels = panels;
    if (aux_total) *aux_total = aux;
    return res;
}

[[noreturn]] void non_finite_at(double s, double theta, bool disk) {
    std::ostringstream os;
    os.precision(17);
    os << "integrand is not finite at " << (disk ? "r=" : "x=") << s;
    if (disk) os << ", theta=" << theta;
    throw QuadratureError(QuadratureError::Kind::non_finite, os.str());
}

std::vector<double> all_interfaces(const Domain& d, const std::vector<double>& breaks) {
    std::vector<double> out;
    for (double x : breaks)
        if (x > d.lower() && x < d.upper()) out.push_back(x);
    return out;
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(rel_tol >= 0.0) || !(abs_tol >= 0.0) || (rel_tol == 0.0 && abs_tol == 0.0)) {
        throw std::invalid_argument("quadrature tolerances must be non-negative and not both zero");
    }
    if (max_subdivisions < 1) throw std::invalid_argument("max_subdivisions must be positive");
    if (angular_points < 4 || angular_points % 2 != 0) {
        throw std::invalid_argument("angular_points must be even and at least 4");
    }
}

IntegralResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                            const std::vector<double>& breaks, const QuadratureConfig& cfg) {
    cfg.validate();
    const PanelFn g = [&](double x) {
        const double v = f(x);
        if (!std::isfinite(v)) non_finite_at(x, 0.0, false);
        return Sample{v, 0.0};
    };
    return adaptive(g, a, b, breaks, cfg, nullptr);
}

IntegralResult integrate_annulus(const std::function<double(double, double)>& f, double r0, double r1,
                                 const std::vector<double>& breaks, const QuadratureConfig& cfg) {
    cfg.validate();
    const int m = cfg.angular_points;
    std::vector<double> thetas(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) thetas[static_cast<std::size_t>(k)] = 2.0 * std::numbers::pi * k / m;
    const double w_full = 2.0 * std::numbers::pi / m;
    const double w_half = 2.0 * w_full;
    const PanelFn g = [&](double r) {
        double full = 0.0, half = 0.0;
        for (int k = 0; k < m; ++k) {
            const double v = f(r, thetas[static_cast<std::size_t>(k)]);
            if (!std::isfinite(v)) non_finite_at(r, thetas[static_cast<std::size_t>(k)], true);
            full += v;
            if (k % 2 == 0) half += v;
        }
        full *= w_full * r;
        half *= w_half * r;
        return Sample{full, full - half};
    };
    double angular = 0.0;
    IntegralResult res = adaptive(g, r0, r1, breaks, cfg, &angular);
    res.error += std::abs(angular);
    return res;
}

Estimate integrate_over(const Domain& domain, const std::vector<Range>& ranges, const std::vector<double>& breaks,
                        const std::function<double(const Coords&)>& f, const QuadratureConfig& cfg) {
    Estimate total;
    const auto cuts = all_interfaces(domain, breaks);
    for (const Range& rg : ranges) {
        const double lo = std::max(rg.lo, domain.lower());
        const double hi = std::min(rg.hi, domain.upper());
        if (!(hi > lo)) continue;
        if (domain.is_disk()) {
            total += integrate_annulus([&](double r, double t) { return f(Coords::polar(r, t)); }, lo, hi, cuts, cfg);
        } else {
            total += integrate_1d([&](double x) { return f(Coords::line(x)); }, lo, hi, cuts, cfg);
        }
    }
    return total;
}

Estimate integrate_domain(const Domain& domain, const std::vector<double>& breaks,
                          const std::function<double(const Coords&)>& f, const QuadratureConfig& cfg) {
    return integrate_over(domain, {{domain.lower(), domain.upper()}}, breaks, f, cfg);
}

Estimate l2_norm_sq(const PiecewiseScalarField& v, const QuadratureConfig& cfg) {
    return integrate_domain(
        v.domain(), v.interfaces(),
        [&](const Coords& p) {
            const double x = v(p);
            return x * x;
        },
        cfg);
}

Estimate l2_norm_sq(const PiecewiseSymMatrixField& n, const QuadratureConfig& cfg) {
    return integrate_domain(n.domain(), n.interfaces(), [&](const Coords& p) { return n.frobenius_sq(p); }, cfg);
}

}  // namespace certify
