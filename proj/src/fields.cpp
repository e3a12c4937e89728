#include "certify/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace certify {
namespace {

constexpr double kSnap = 1e-12;
constexpr double kSmoothTol = 1e-9;
constexpr std::size_t kMaxListedViolations = 16;

double scale_of(const Domain& d) { return std::max(1.0, std::max(std::abs(d.lower()), std::abs(d.upper()))); }

// Evaluation coordinate for sampling; keeps strictly away from the pole.
Coords sample_at(const Domain& d, double s, double theta) {
    if (d.is_disk()) s = std::max(s, kSnap * d.upper());
    return d.at(s, theta);
}

std::vector<double> angular_samples(const Domain& d, int n) {
    if (!d.is_disk()) return {0.0};
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) t[static_cast<std::size_t>(k)] = 2.0 * std::numbers::pi * k / n;
    return t;
}

void check_space(const Domain& d, const Expr& e, const char* what) {
    for (Var v : {Var::x, Var::r, Var::theta}) {
        if (e.depends_on(v) && !allows(d.space(), v)) {
            throw FieldError(std::string(what) + " uses variable '" + to_string(v) + "' not valid on " +
                             d.describe());
        }
    }
}

template <class Piece>
std::vector<Piece> tile(const Domain& d, std::vector<Piece> pieces, const char* what) {
    const double snap = kSnap * scale_of(d);
    std::vector<Piece> kept;
    for (auto& p : pieces) {
        if (!std::isfinite(p.lo) || !std::isfinite(p.hi)) throw FieldError(std::string(what) + ": non-finite piece bound");
        if (p.hi < p.lo - snap) throw FieldError(std::string(what) + ": piece with hi < lo");
        if (p.hi - p.lo <= snap) continue;
        kept.push_back(std::move(p));
    }
    if (kept.empty()) throw FieldError(std::string(what) + ": no pieces");
    if (std::abs(kept.front().lo - d.lower()) > snap || std::abs(kept.back().hi - d.upper()) > snap) {
        throw FieldError(std::string(what) + ": pieces do not cover " + d.describe());
    }
    kept.front().lo = d.lower();
    kept.back().hi = d.upper();
    for (std::size_t i = 1; i < kept.size(); ++i) {
        if (std::abs(kept[i].lo - kept[i - 1].hi) > snap) {
            throw FieldError(std::string(what) + ": pieces are not contiguous at " + std::to_string(kept[i - 1].hi));
        }
        kept[i].lo = kept[i - 1].hi;
    }
    return kept;
}

template <class Piece>
std::size_t locate(const Domain& d, const std::vector<Piece>& pieces, double s) {
    const double snap = kSnap * scale_of(d);
    if (s < d.lower() - snap || s > d.upper() + snap || std::isnan(s)) {
        throw FieldError("point " + std::to_string(s) + " outside " + d.describe());
    }
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (s <= pieces[i].hi + snap) return i;
    }
    return pieces.size() - 1;
}

// Piece adjoining `point` from the given side.
template <class Piece>
std::size_t adjoining(const Domain& d, const std::vector<Piece>& pieces, double point, Side side) {
    const double snap = kSnap * scale_of(d);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const bool in_left = point > pieces[i].lo + snap && point <= pieces[i].hi + snap;
        const bool in_right = point >= pieces[i].lo - snap && point < pieces[i].hi - snap;
        if ((side == Side::left && in_left) || (side == Side::right && in_right)) return i;
    }
    throw FieldError("no piece adjoins " + std::to_string(point) + (side == Side::left ? " from the left" : " from the right"));
}

template <class Piece>
std::vector<double> piece_interfaces(const std::vector<Piece>& pieces) {
    std::vector<double> out;
    for (std::size_t i = 1; i < pieces.size(); ++i) out.push_back(pieces[i].lo);
    return out;
}

// Sorted union of piece boundaries of two layouts over the same domain.
std::vector<double> merged_grid(const Domain& d, const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> g = merge_interfaces({a, b});
    g.insert(g.begin(), d.lower());
    g.push_back(d.upper());
    return g;
}

bool close_enough(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace

// ----------------------------------------------------------------------------- Domain

Domain Domain::interval(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) throw FieldError("interval needs finite a < b");
    return Domain(Kind::interval, a, b);
}

Domain Domain::disk(double radius) {
    if (!std::isfinite(radius) || !(radius > 0.0)) throw FieldError("disk needs a finite radius > 0");
    return Domain(Kind::disk, 0.0, radius);
}

std::string Domain::describe() const {
    std::ostringstream os;
    os.precision(12);
    if (is_disk()) {
        os << "disk(R=" << upper_ << ")";
    } else {
        os << "interval(" << lower_ << ", " << upper_ << ")";
    }
    return os.str();
}

// ----------------------------------------------------------------------------- SubdomainSet

SubdomainSet::SubdomainSet(std::vector<Range> ranges, double merge_gap) {
    std::sort(ranges.begin(), ranges.end(), [](const Range& a, const Range& b) { return a.lo < b.lo; });
    for (const Range& r : ranges) {
        if (r.hi < r.lo) continue;
        if (!ranges_.empty() && r.lo <= ranges_.back().hi + merge_gap) {
            ranges_.back().hi = std::max(ranges_.back().hi, r.hi);
        } else {
            ranges_.push_back(r);
        }
    }
}

bool SubdomainSet::contains(double s, double slack) const {
    return std::any_of(ranges_.begin(), ranges_.end(),
                       [&](const Range& r) { return s >= r.lo - slack && s <= r.hi + slack; });
}

double SubdomainSet::length() const {
    double total = 0.0;
    for (const Range& r : ranges_) total += r.hi - r.lo;
    return total;
}

std::vector<double> SubdomainSet::interior_boundary(double lo, double hi) const {
    std::vector<double> out;
    for (const Range& r : ranges_) {
        for (double e : {r.lo, r.hi}) {
            if (e > lo && e < hi && (out.empty() || out.back() != e)) out.push_back(e);
        }
    }
    return out;
}

SubdomainSet SubdomainSet::complement(double lo, double hi) const {
    std::vector<Range> out;
    double cursor = lo;
    for (const Range& r : ranges_) {
        if (r.lo > cursor) out.push_back({cursor, std::min(r.lo, hi)});
        cursor = std::max(cursor, r.hi);
        if (cursor >= hi) break;
    }
    if (cursor < hi) out.push_back({cursor, hi});
    return SubdomainSet(std::move(out), 0.0);
}

bool SubdomainSet::subset_of(const SubdomainSet& other, double slack) const {
    return std::all_of(ranges_.begin(), ranges_.end(), [&](const Range& r) {
        return std::any_of(other.ranges_.begin(), other.ranges_.end(), [&](const Range& o) {
            return r.lo >= o.lo - slack && r.hi <= o.hi + slack;
        });
    });
}

std::string SubdomainSet::describe() const {
    if (ranges_.empty()) return "{}";
    std::ostringstream os;
    os.precision(10);
    for (std::size_t i = 0; i < ranges_.size(); ++i) {
        if (i) os << " U ";
        os << "[" << ranges_[i].lo << ", " << ranges_[i].hi << "]";
    }
    return os.str();
}

// ----------------------------------------------------------------------------- scalar fields

PiecewiseScalarField::PiecewiseScalarField(Domain domain, std::vector<ScalarPiece> pieces, int claimed_smoothness)
    : domain_(domain), pieces_(tile(domain, std::move(pieces), "scalar field")), smoothness_(claimed_smoothness) {
    compiled_.reserve(pieces_.size());
    for (const auto& p : pieces_) {
        check_space(domain_, p.expr, "scalar field");
        compiled_.emplace_back(p.expr);
    }
    if (smoothness_ < 0) return;
    const Var s = domain_.layout_var();
    const auto thetas = angular_samples(domain_, 16);
    for (std::size_t i = 1; i < pieces_.size(); ++i) {
        const double at = pieces_[i].lo;
        for (int k = 0; k <= std::min(smoothness_, 2); ++k) {
            const Expr dl = pieces_[i - 1].expr.differentiate(s, k);
            const Expr dr = pieces_[i].expr.differentiate(s, k);
            for (double t : thetas) {
                const double a = dl.evaluate(sample_at(domain_, at, t));
                const double b = dr.evaluate(sample_at(domain_, at, t));
                if (!close_enough(a, b, kSmoothTol)) {
                    std::ostringstream os;
                    os << "field claimed C^" << smoothness_ << " but derivative " << k << " jumps at " << at
                       << " (" << a << " vs " << b << ")";
                    throw FieldError(os.str());
                }
            }
        }
    }
}

PiecewiseScalarField PiecewiseScalarField::constant(const Domain& domain, double value) {
    return PiecewiseScalarField(domain, {{domain.lower(), domain.upper(), Expr(value)}}, 2);
}

PiecewiseScalarField PiecewiseScalarField::parse(const Domain& domain,
                                                 const std::vector<std::tuple<double, double, std::string>>& pieces,
                                                 int claimed_smoothness) {
    std::vector<ScalarPiece> out;
    for (const auto& [lo, hi, text] : pieces) out.push_back({lo, hi, parse_expr(text, domain.space())});
    return PiecewiseScalarField(domain, std::move(out), claimed_smoothness);
}

std::vector<double> PiecewiseScalarField::interfaces() const { return piece_interfaces(pieces_); }

std::size_t PiecewiseScalarField::piece_index(double s) const { return locate(domain_, pieces_, s); }

double PiecewiseScalarField::operator()(const Coords& p) const {
    const double s = domain_.is_disk() ? p.r : p.x;
    return compiled_[piece_index(s)](p);
}

// ----------------------------------------------------------------------------- matrix fields

PiecewiseSymMatrixField::PiecewiseSymMatrixField(Domain domain, std::vector<MatrixPiece> pieces)
    : domain_(domain), pieces_(tile(domain, std::move(pieces), "matrix field")) {
    compiled_.reserve(pieces_.size());
    for (auto& p : pieces_) {
        if (!domain_.is_disk()) {
            if (!p.e12.is_constant(0.0) || !p.e22.is_constant(0.0)) {
                throw FieldError("matrix field on an interval has only the (1,1) entry");
            }
        }
        check_space(domain_, p.e11, "matrix field");
        check_space(domain_, p.e12, "matrix field");
        check_space(domain_, p.e22, "matrix field");
        compiled_.push_back({CompiledExpr(p.e11), CompiledExpr(p.e12), CompiledExpr(p.e22)});
    }
}

PiecewiseSymMatrixField PiecewiseSymMatrixField::zero(const Domain& domain) {
    return PiecewiseSymMatrixField(domain, {{domain.lower(), domain.upper(), Expr(), Expr(), Expr()}});
}

PiecewiseSymMatrixField PiecewiseSymMatrixField::parse_line(
    const Domain& domain, const std::vector<std::tuple<double, double, std::string>>& pieces) {
    if (domain.is_disk()) throw FieldError("parse_line needs an interval domain");
    std::vector<MatrixPiece> out;
    for (const auto& [lo, hi, text] : pieces) out.push_back({lo, hi, parse_expr(text, VarSpace::line), Expr(), Expr()});
    return PiecewiseSymMatrixField(domain, std::move(out));
}

PiecewiseSymMatrixField PiecewiseSymMatrixField::parse_polar(
    const Domain& domain, const std::vector<std::pair<Range, std::array<std::string, 3>>>& pieces) {
    if (!domain.is_disk()) throw FieldError("parse_polar needs a disk domain");
    std::vector<MatrixPiece> out;
    for (const auto& [range, texts] : pieces) {
        out.push_back({range.lo, range.hi, parse_expr(texts[0], VarSpace::polar), parse_expr(texts[1], VarSpace::polar),
                       parse_expr(texts[2], VarSpace::polar)});
    }
    return PiecewiseSymMatrixField(domain, std::move(out));
}

std::vector<double> PiecewiseSymMatrixField::interfaces() const { return piece_interfaces(pieces_); }

std::size_t PiecewiseSymMatrixField::piece_index(double s) const { return locate(domain_, pieces_, s); }

std::array<double, 3> PiecewiseSymMatrixField::piece_entries(std::size_t i, const Coords& p) const {
    const auto& c = compiled_[i];
    if (!domain_.is_disk()) return {c[0](p), 0.0, 0.0};
    return {c[0](p), c[1](p), c[2](p)};
}

std::array<double, 3> PiecewiseSymMatrixField::operator()(const Coords& p) const {
    return piece_entries(piece_index(domain_.is_disk() ? p.r : p.x), p);
}

double PiecewiseSymMatrixField::frobenius_sq(const Coords& p) const {
    const auto e = (*this)(p);
    return e[0] * e[0] + 2.0 * e[1] * e[1] + e[2] * e[2];
}

// ----------------------------------------------------------------------------- differential operators

Expr d_dx_polar(const Expr& e) {
    const Expr r = Expr::variable(Var::r);
    const Expr t = Expr::variable(Var::theta);
    return cos(t) * e.differentiate(Var::r) - sin(t) / r * e.differentiate(Var::theta);
}

Expr d_dy_polar(const Expr& e) {
    const Expr r = Expr::variable(Var::r);
    const Expr t = Expr::variable(Var::theta);
    return sin(t) * e.differentiate(Var::r) + cos(t) / r * e.differentiate(Var::theta);
}

PiecewiseSymMatrixField hessian(const PiecewiseScalarField& v) {
    std::vector<MatrixPiece> out;
    for (const auto& p : v.pieces()) {
        if (!v.domain().is_disk()) {
            out.push_back({p.lo, p.hi, p.expr.differentiate(Var::x, 2), Expr(), Expr()});
        } else {
            const Expr wx = d_dx_polar(p.expr);
            const Expr wy = d_dy_polar(p.expr);
            out.push_back({p.lo, p.hi, d_dx_polar(wx), d_dx_polar(wy), d_dy_polar(wy)});
        }
    }
    return PiecewiseSymMatrixField(v.domain(), std::move(out));
}

PiecewiseScalarField div_div(const PiecewiseSymMatrixField& n) {
    std::vector<ScalarPiece> out;
    for (const auto& p : n.pieces()) {
        if (!n.domain().is_disk()) {
            out.push_back({p.lo, p.hi, p.e11.differentiate(Var::x, 2)});
        } else {
            out.push_back({p.lo, p.hi,
                           d_dx_polar(d_dx_polar(p.e11)) + Expr(2.0) * d_dx_polar(d_dy_polar(p.e12)) +
                               d_dy_polar(d_dy_polar(p.e22))});
        }
    }
    return PiecewiseScalarField(n.domain(), std::move(out));
}

PiecewiseScalarField laplacian(const PiecewiseScalarField& v) {
    std::vector<ScalarPiece> out;
    const Expr r = Expr::variable(Var::r);
    for (const auto& p : v.pieces()) {
        if (!v.domain().is_disk()) {
            out.push_back({p.lo, p.hi, p.expr.differentiate(Var::x, 2)});
        } else {
            out.push_back({p.lo, p.hi,
                           p.expr.differentiate(Var::r, 2) + p.expr.differentiate(Var::r) / r +
                               p.expr.differentiate(Var::theta, 2) / pow(r, 2)});
        }
    }
    return PiecewiseScalarField(v.domain(), std::move(out));
}

std::vector<double> merge_interfaces(std::initializer_list<std::vector<double>> lists) {
    std::vector<double> all;
    for (const auto& l : lists) all.insert(all.end(), l.begin(), l.end());
    std::sort(all.begin(), all.end());
    std::vector<double> out;
    for (double x : all) {
        if (out.empty() || std::abs(x - out.back()) > kSnap * std::max(1.0, std::abs(x))) out.push_back(x);
    }
    return out;
}

PiecewiseScalarField subtract(const PiecewiseScalarField& a, const PiecewiseScalarField& b) {
    if (!(a.domain() == b.domain())) throw FieldError("subtract: fields live on different domains");
    const auto grid = merged_grid(a.domain(), a.interfaces(), b.interfaces());
    std::vector<ScalarPiece> out;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double mid = 0.5 * (grid[k] + grid[k + 1]);
        out.push_back({grid[k], grid[k + 1],
                       a.pieces()[a.piece_index(mid)].expr - b.pieces()[b.piece_index(mid)].expr});
    }
    return PiecewiseScalarField(a.domain(), std::move(out));
}

PiecewiseSymMatrixField subtract(const PiecewiseSymMatrixField& a, const PiecewiseSymMatrixField& b) {
    if (!(a.domain() == b.domain())) throw FieldError("subtract: fields live on different domains");
    const auto grid = merged_grid(a.domain(), a.interfaces(), b.interfaces());
    std::vector<MatrixPiece> out;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double mid = 0.5 * (grid[k] + grid[k + 1]);
        const auto& pa = a.pieces()[a.piece_index(mid)];
        const auto& pb = b.pieces()[b.piece_index(mid)];
        out.push_back({grid[k], grid[k + 1], pa.e11 - pb.e11, pa.e12 - pb.e12, pa.e22 - pb.e22});
    }
    return PiecewiseSymMatrixField(a.domain(), std::move(out));
}

// ----------------------------------------------------------------------------- interface quantities

double one_sided_limit(const PiecewiseScalarField& field, double point, Side side, int derivative_order,
                       double theta) {
    const auto& d = field.domain();
    const std::size_t i = adjoining(d, field.pieces(), point, side);
    const Expr e = field.pieces()[i].expr.differentiate(d.layout_var(), derivative_order);
    return e.evaluate(d.at(point, theta));
}

Expr layout_divergence(const PiecewiseSymMatrixField& n, std::size_t i) {
    const auto& p = n.pieces().at(i);
    if (!n.domain().is_disk()) return p.e11.differentiate(Var::x);
    const Expr t = Expr::variable(Var::theta);
    const Expr c1 = d_dx_polar(p.e11) + d_dy_polar(p.e12);
    const Expr c2 = d_dx_polar(p.e12) + d_dy_polar(p.e22);
    return cos(t) * c1 + sin(t) * c2;
}

double flux_jump(const PiecewiseSymMatrixField& p, double point, double theta) {
    const auto& d = p.domain();
    const std::size_t il = adjoining(d, p.pieces(), point, Side::left);
    const std::size_t ir = adjoining(d, p.pieces(), point, Side::right);
    const Coords at = d.at(point, theta);
    return layout_divergence(p, il).evaluate(at) - layout_divergence(p, ir).evaluate(at);
}

// ----------------------------------------------------------------------------- coincidence and admissibility

SubdomainSet coincidence_set(const PiecewiseScalarField& v, const PiecewiseScalarField& phi, double tol,
                             const SamplingConfig& cfg) {
    if (!(v.domain() == phi.domain())) throw FieldError("coincidence_set: fields live on different domains");
    const Domain& d = v.domain();
    const auto grid = merged_grid(d, v.interfaces(), phi.interfaces());
    const auto thetas = angular_samples(d, cfg.angular_points);
    const int n = std::max(cfg.samples_per_piece, 3);
    std::vector<Range> found;

    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double lo = grid[k];
        const double hi = grid[k + 1];
        const double mid = 0.5 * (lo + hi);
        const std::size_t iv = v.piece_index(mid);
        const std::size_t ip = phi.piece_index(mid);
        if (v.pieces()[iv].expr.structurally_equal(phi.pieces()[ip].expr)) {
            found.push_back({lo, hi});
            continue;
        }
        auto gap = [&](double s) {
            double m = 0.0;
            for (double t : thetas) {
                const Coords c = sample_at(d, s, t);
                m = std::max(m, std::abs(v.piece_value(iv, c) - phi.piece_value(ip, c)));
            }
            return m;
        };
        auto refine = [&](double inside, double outside) {
            for (int it = 0; it < 60; ++it) {
                const double m = 0.5 * (inside + outside);
                (gap(m) <= tol ? inside : outside) = m;
            }
            return 0.5 * (inside + outside);
        };
        std::vector<double> s(static_cast<std::size_t>(n));
        std::vector<bool> in(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            s[j] = lo + (hi - lo) * j / (n - 1);
            in[j] = gap(s[j]) <= tol;
        }
        for (int j = 0; j < n;) {
            if (!in[j]) {
                ++j;
                continue;
            }
            int e = j;
            while (e + 1 < n && in[e + 1]) ++e;
            if (e > j) {
                const double a = j == 0 ? lo : refine(s[j], s[j - 1]);
                const double b = e == n - 1 ? hi : refine(s[e], s[e + 1]);
                found.push_back({a, b});
            }
            j = e + 1;
        }
    }
    return SubdomainSet(std::move(found), kSnap * scale_of(d));
}

AdmissibilityReport check_admissible(const PiecewiseScalarField& v, const PiecewiseScalarField& phi,
                                     const SamplingConfig& cfg) {
    if (!(v.domain() == phi.domain())) throw FieldError("check_admissible: fields live on different domains");
    const Domain& d = v.domain();
    AdmissibilityReport rep;
    auto record = [&](const char* kind, double s, double t, double value) {
        rep.admissible = false;
        ++rep.violation_count;
        if (rep.violations.size() < kMaxListedViolations) rep.violations.push_back({kind, s, t, value});
    };

    const auto thetas = angular_samples(d, cfg.angular_points);
    const auto grid = merged_grid(d, v.interfaces(), phi.interfaces());
    const int n = std::max(cfg.samples_per_piece, 3);
    constexpr double tol = 1e-9;
    constexpr int max_refinements = 64;

    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double lo = grid[k];
        const double hi = grid[k + 1];
        const double mid = 0.5 * (lo + hi);
        const std::size_t iv = v.piece_index(mid);
        const std::size_t ip = phi.piece_index(mid);
        if (v.pieces()[iv].expr.structurally_equal(phi.pieces()[ip].expr)) continue;
        for (double t : thetas) {
            auto diff = [&](double s) {
                const Coords c = sample_at(d, s, t);
                return v.piece_value(iv, c) - phi.piece_value(ip, c);
            };
            std::vector<double> s(static_cast<std::size_t>(n));
            std::vector<double> g(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) {
                s[j] = lo + (hi - lo) * j / (n - 1);
                g[j] = diff(s[j]);
                if (g[j] < -tol) record("below-obstacle", s[j], t, g[j]);
            }
            int refinements = 0;
            for (int j = 1; j + 1 < n && refinements < max_refinements; ++j) {
                if (!(g[j] < g[j - 1] && g[j] < g[j + 1]) || g[j] < -tol) continue;
                ++refinements;
                // Golden-section search for the minimum in the bracketing cell pair.
                const double phi_inv = (std::sqrt(5.0) - 1.0) / 2.0;
                double a = s[j - 1];
                double b = s[j + 1];
                double c = b - phi_inv * (b - a);
                double e = a + phi_inv * (b - a);
                double fc = diff(c);
                double fe = diff(e);
                for (int it = 0; it < 80 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
                    if (fc < fe) {
                        b = e;
                        e = c;
                        fe = fc;
                        c = b - phi_inv * (b - a);
                        fc = diff(c);
                    } else {
                        a = c;
                        c = e;
                        fc = fe;
                        e = a + phi_inv * (b - a);
                        fe = diff(e);
                    }
                }
                const double m = std::min(fc, fe);
                if (m < -tol) record("below-obstacle", fc < fe ? c : e, t, m);
            }
        }
    }

    // Clamped boundary: v = 0 and dv/dn = 0.
    const Var sv = d.layout_var();
    std::vector<double> ends{d.upper()};
    if (!d.is_disk()) ends.insert(ends.begin(), d.lower());
    for (double end : ends) {
        const std::size_t i = v.piece_index(end);
        const Expr dv = v.pieces()[i].expr.differentiate(sv);
        for (double t : thetas) {
            const Coords c = d.at(end, t);
            const double val = v.piece_value(i, c);
            const double slope = dv.evaluate(c);
            if (std::abs(val) > tol) record("boundary-value", end, t, val);
            if (std::abs(slope) > tol) record("boundary-slope", end, t, slope);
        }
    }
    return rep;
}

HDivDivReport check_h_divdiv(const PiecewiseSymMatrixField& n, const SamplingConfig& cfg) {
    const Domain& d = n.domain();
    HDivDivReport rep;
    const auto thetas = angular_samples(d, cfg.angular_points);
    constexpr double tol = 1e-8;
    for (std::size_t i = 1; i < n.pieces().size(); ++i) {
        const double at = n.pieces()[i].lo;
        const Expr dl = layout_divergence(n, i - 1);
        const Expr dr = layout_divergence(n, i);
        bool ok = true;
        for (double t : thetas) {
            const Coords c = d.at(at, t);
            const auto el = n.piece_entries(i - 1, c);
            const auto er = n.piece_entries(i, c);
            for (int k = 0; k < 3; ++k) ok = ok && close_enough(el[k], er[k], tol);
            ok = ok && close_enough(dl.evaluate(c), dr.evaluate(c), tol);
            if (!ok) break;
        }
        if (!ok) {
            rep.ok = false;
            rep.failing_interfaces.push_back(at);
        }
    }
    return rep;
}

}  // namespace certify
