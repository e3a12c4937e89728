#include "certify/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

#include "certify/majorant.hpp"

namespace certify {
namespace {

constexpr const char* kC1 = "(9*ln(3)-4)";
constexpr const char* kC2 = "(208-216*ln(3)+9*ln(3)^2)";

std::string substitute(std::string text, const std::string& token, const std::string& value) {
    for (auto pos = text.find(token); pos != std::string::npos; pos = text.find(token, pos + value.size())) {
        text.replace(pos, token.size(), value);
    }
    return text;
}

std::string plate_text(const std::string& t) { return substitute(substitute(t, "C1", kC1), "C2", kC2); }

std::string number_text(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "(%.17g)", v);
    return buf;
}

using PieceText = std::tuple<double, double, std::string>;

PiecewiseScalarField scalar(const Domain& d, const std::vector<PieceText>& pieces, int smoothness = -1) {
    return PiecewiseScalarField::parse(d, pieces, smoothness);
}

Approximation primal(const std::string& name, PiecewiseScalarField f, std::map<std::string, double> params = {}) {
    return {name, ApproxKind::primal, std::move(f), std::move(params)};
}

Approximation dual(const std::string& name, PiecewiseSymMatrixField n, std::map<std::string, double> params = {}) {
    return {name, ApproxKind::dual, std::move(n), std::move(params)};
}

const Domain kModelDomain = Domain::interval(-1.0, 1.0);

ProblemInstance make_model_1d() {
    const Domain& d = kModelDomain;
    const auto u = scalar(d,
                          {{-1.0, -0.5, "-8*(x+1)^2*(6*x^2+4*x+1)"},
                           {-0.5, 0.5, "-1"},
                           {0.5, 1.0, "-8*(x-1)^2*(6*x^2-4*x+1)"}},
                          1);
    const auto p = PiecewiseSymMatrixField::parse_line(
        d, {{-1.0, -0.5, "-48*(2*x+1)*(6*x+5)"}, {-0.5, 0.5, "0"}, {0.5, 1.0, "-48*(2*x-1)*(6*x-5)"}});
    ProblemInstance inst{"model_1d",
                         d,
                         scalar(d, {{-1.0, 1.0, "-1152"}}),
                         scalar(d, {{-1.0, 1.0, "-1"}}),
                         friedrichs_constant(d),
                         ExactSolution{u, p, SubdomainSet({{-0.5, 0.5}}), {-0.5, 0.5}},
                         {}};
    auto add = [&](Approximation a) { inst.approximations.emplace(a.name, std::move(a)); };
    add(primal("v1", scalar(d,
                            {{-1.0, -0.25, "-16/27*(x+1)^2*(1-8*x)"},
                             {-0.25, 0.25, "-1"},
                             {0.25, 1.0, "-16/27*(x-1)^2*(1+8*x)"}},
                            1)));
    add(dual("nstar", PiecewiseSymMatrixField::parse_line(
                          d, {{-1.0, -0.5, "20*(2*x+1)^2*(5+6*x)"}, {-0.5, 0.5, "0"}, {0.5, 1.0, "20*(2*x-1)^2*(5-6*x)"}})));
    add(dual("ntilde", PiecewiseSymMatrixField::parse_line(d, {{-1.0, -1.0 / 3, "8*(3*x+1)^2*(6*x+5)"},
                                                               {-1.0 / 3, 1.0 / 3, "0"},
                                                               {1.0 / 3, 1.0, "8*(3*x-1)^2*(5-6*x)"}})));
    add(primal("u", u));
    add(dual("pstar", p));
    return inst;
}

ProblemInstance make_circular_plate() {
    const Domain d = Domain::disk(3.0);
    const std::string u_outer = "((r^2-1)*(128+C1*(r^2-3))+4*(C1-32*(1+r^2))*ln(r))/(4*C2)-1";
    const auto u = scalar(d, {{0.0, 1.0, "-1"}, {1.0, 3.0, plate_text(u_outer)}}, 1);
    const auto p = PiecewiseSymMatrixField::parse_polar(
        d, {{{0.0, 1.0}, {"0", "0", "0"}},
            {{1.0, 3.0},
             {plate_text("((r^2-1)*cos(2*theta)*(C1*(r^2+1)-32)+2*r^2*(C1*(r^2-1)-32*ln(r)))/(C2*r^2)"),
              plate_text("(r^2-1)*sin(2*theta)*(C1*(r^2+1)-32)/(C2*r^2)"),
              plate_text("((1-r^2)*cos(2*theta)*(C1*(r^2+1)-32)+2*r^2*(C1*(r^2-1)-32*ln(r)))/(C2*r^2)")}}});
    ProblemInstance inst{"circular_plate",
                         d,
                         scalar(d, {{0.0, 3.0, plate_text("16*C1/C2")}}),
                         scalar(d, {{0.0, 3.0, "-1"}}),
                         friedrichs_constant(d),
                         ExactSolution{u, p, SubdomainSet({{0.0, 1.0}}), {1.0}},
                         {}};
    auto add = [&](Approximation a) { inst.approximations.emplace(a.name, std::move(a)); };
    add(primal("v2", scalar(d, {{0.0, 1.0, "-1"}, {1.0, 3.0, plate_text(u_outer) + "+0.5*(1-cos(pi*(3-r)))"}}, 1)));
    add(dual("nhat", PiecewiseSymMatrixField::parse_polar(
                         d, {{{0.0, 1.0}, {"0", "0", "0"}},
                             {{1.0, 3.0},
                              {plate_text("(r-1)^3*cos(2*theta)/(C2*r^2)"),
                               plate_text("9*(r-1)^3*sin(2*theta)/(C2*r^2)"),
                               plate_text("(r-1)^3*cos(2*theta)/(C2*r^2)")}}})));
    add(primal("u", u));
    add(dual("pstar", p));
    return inst;
}

void check_eps(double eps) {
    if (!(eps >= 0.0 && eps <= 0.5)) {
        throw std::invalid_argument("eps must satisfy 0 <= eps <= 1/2, got " + std::to_string(eps));
    }
}

// ---------------------------------------------------------------------------- problem files

struct Line {
    std::size_t number;
    std::string text;
};

[[noreturn]] void fail(const std::string& msg, const Line& line, std::size_t col) {
    throw ProblemFileError(msg, line.number, col + 1);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Field {
    std::string key;
    std::string value;
    std::size_t column;  // 0-based column of the value in the line
};

// key=value pairs separated by commas outside quotes and parentheses.
std::vector<Field> split_fields(const Line& line, std::size_t start) {
    std::vector<Field> out;
    const std::string& s = line.text;
    std::size_t i = start;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
        if (i >= s.size()) break;
        const std::size_t key_start = i;
        while (i < s.size() && s[i] != '=' && s[i] != ',') ++i;
        if (i >= s.size() || s[i] != '=') fail("expected key=value", line, key_start);
        const std::string key = trim(s.substr(key_start, i - key_start));
        ++i;
        while (i < s.size() && s[i] == ' ') ++i;
        const std::size_t vstart = i;
        if (i < s.size() && s[i] == '"') {
            const auto close = s.find('"', i + 1);
            if (close == std::string::npos) fail("unterminated string", line, i);
            out.push_back({key, s.substr(i + 1, close - i - 1), i + 1});
            i = close + 1;
        } else {
            int depth = 0;
            while (i < s.size() && !(depth == 0 && s[i] == ',')) {
                if (s[i] == '(') ++depth;
                if (s[i] == ')') --depth;
                ++i;
            }
            if (depth != 0) fail("unbalanced parentheses", line, vstart);
            out.push_back({key, trim(s.substr(vstart, i - vstart)), vstart});
        }
    }
    return out;
}

double constant_expr(const std::string& text, const Line& line, std::size_t col) {
    try {
        const Expr e = parse_expr(text, VarSpace::line);
        if (!e.is_constant()) fail("expected a constant, got '" + text + "'", line, col);
        return e.constant_value();
    } catch (const ParseError& e) {
        fail(std::string("bad number: ") + e.what(), line, col + e.position());
    }
}

// "(a, b)", "annulus(a, b)", "interval(a, b)", "disk(R)"; returns the head word and arguments.
std::pair<std::string, std::vector<double>> call_form(const std::string& text, const Line& line, std::size_t col) {
    const auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')') fail("expected (a, b)", line, col);
    const std::string head = trim(text.substr(0, open));
    std::vector<double> args;
    std::size_t i = open + 1;
    int depth = 0;
    std::size_t arg_start = i;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '(') ++depth;
        if ((c == ',' && depth == 0) || (c == ')' && depth == 0)) {
            args.push_back(constant_expr(trim(text.substr(arg_start, i - arg_start)), line, col + arg_start));
            arg_start = i + 1;
            if (c == ')') break;
        } else if (c == ')') {
            --depth;
        }
    }
    return {head, args};
}

Range piece_range(const Field& fld, const Line& line) {
    const auto [head, args] = call_form(fld.value, line, fld.column);
    if ((head.empty() || head == "annulus") && args.size() == 2) return {args[0], args[1]};
    fail("piece domain must be (a,b) or annulus(r1,r2)", line, fld.column);
}

struct RawPiece {
    Range range;
    std::map<std::string, Field> values;
    Line line;
};

struct Section {
    std::string name;
    Line header;
    std::map<std::string, Field> settings;
    std::map<std::string, Line> setting_lines;
    std::vector<RawPiece> pieces;
    std::vector<std::pair<Range, Line>> ranges;
};

Expr piece_expr(const RawPiece& p, const std::string& key, const Domain& d, bool required = true) {
    const auto it = p.values.find(key);
    if (it == p.values.end()) {
        if (required) fail("piece is missing '" + key + "'", p.line, 0);
        return Expr();
    }
    try {
        return parse_expr(it->second.value, d.space());
    } catch (const ParseError& e) {
        fail(std::string("in ") + key + ": " + e.what(), p.line, it->second.column + e.position());
    }
}

int smoothness_of(const Section& s) {
    const auto it = s.settings.find("smoothness");
    if (it == s.settings.end()) return -1;
    const double v = constant_expr(it->second.value, s.setting_lines.at("smoothness"), it->second.column);
    return static_cast<int>(v);
}

template <class F>
auto with_section(const Section& s, F&& build) -> decltype(build()) {
    try {
        return build();
    } catch (const FieldError& e) {
        fail("[" + s.name + "] " + e.what(), s.header, 0);
    } catch (const DomainError& e) {
        fail("[" + s.name + "] " + e.what(), s.header, 0);
    }
}

PiecewiseScalarField scalar_section(const Section& s, const Domain& d) {
    return with_section(s, [&] {
        std::vector<ScalarPiece> pieces;
        for (const auto& p : s.pieces) pieces.push_back({p.range.lo, p.range.hi, piece_expr(p, "expr", d)});
        return PiecewiseScalarField(d, std::move(pieces), smoothness_of(s));
    });
}

PiecewiseSymMatrixField matrix_section(const Section& s, const Domain& d) {
    return with_section(s, [&] {
        std::vector<MatrixPiece> pieces;
        for (const auto& p : s.pieces) {
            if (d.is_disk()) {
                pieces.push_back({p.range.lo, p.range.hi, piece_expr(p, "e11", d), piece_expr(p, "e12", d),
                                  piece_expr(p, "e22", d)});
            } else {
                const bool has_expr = p.values.count("expr") != 0;
                pieces.push_back({p.range.lo, p.range.hi, piece_expr(p, has_expr ? "expr" : "e11", d), Expr(), Expr()});
            }
        }
        return PiecewiseSymMatrixField(d, std::move(pieces));
    });
}

std::vector<Section> read_sections(const std::string& text) {
    std::vector<Section> sections;
    std::istringstream in(text);
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        const Line line{number, raw};
        const auto hash = raw.find('#');
        // '#' starts a comment unless it sits inside a quoted string.
        std::string body = raw;
        if (hash != std::string::npos && std::count(raw.begin(), raw.begin() + static_cast<long>(hash), '"') % 2 == 0) {
            body = raw.substr(0, hash);
        }
        const std::string t = trim(body);
        if (t.empty()) continue;
        const std::size_t indent = body.find_first_not_of(" \t");
        if (t.front() == '[') {
            if (t.back() != ']') fail("unterminated section header", line, indent);
            sections.push_back({trim(t.substr(1, t.size() - 2)), line, {}, {}, {}, {}});
            continue;
        }
        if (sections.empty()) fail("content before the first section", line, indent);
        Section& sec = sections.back();
        if (t.rfind("piece:", 0) == 0) {
            const Line body_line{number, body};
            auto fields = split_fields(body_line, indent + 6);
            RawPiece piece{{0, 0}, {}, line};
            bool have_range = false;
            for (auto& f : fields) {
                if (f.key == "domain") {
                    piece.range = piece_range(f, line);
                    have_range = true;
                } else {
                    if (piece.values.count(f.key)) fail("duplicate key '" + f.key + "'", line, f.column);
                    piece.values.emplace(f.key, f);
                }
            }
            if (!have_range) fail("piece needs domain=(a,b)", line, indent);
            sec.pieces.push_back(std::move(piece));
        } else if (t.rfind("range:", 0) == 0) {
            const std::size_t col = body.find("range:") + 6;
            const Field f{"range", trim(body.substr(col)), body.find_first_not_of(' ', col)};
            sec.ranges.emplace_back(piece_range(f, line), line);
        } else {
            // One "key = value" per line; the value runs to the end of the line.
            const auto eq = body.find('=');
            if (eq == std::string::npos) fail("expected key = value", line, indent);
            const std::string key = trim(body.substr(0, eq));
            if (key.empty()) fail("missing key before '='", line, indent);
            std::size_t vcol = body.find_first_not_of(" \t", eq + 1);
            if (vcol == std::string::npos) fail("missing value after '='", line, eq + 1);
            std::string value = trim(body.substr(vcol));
            if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
                value = value.substr(1, value.size() - 2);
                ++vcol;
            }
            if (sec.settings.count(key)) fail("duplicate key '" + key + "'", line, indent);
            sec.setting_lines.emplace(key, line);
            sec.settings.emplace(key, Field{key, value, vcol});
        }
    }
    return sections;
}

std::vector<double> number_list(const Field& f, const Line& line) {
    std::vector<double> out;
    std::size_t start = 0;
    const std::string& s = f.value;
    int depth = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i < s.size() && s[i] == '(') ++depth;
        if (i < s.size() && s[i] == ')') --depth;
        if (i == s.size() || (s[i] == ',' && depth == 0)) {
            const std::string item = trim(s.substr(start, i - start));
            if (!item.empty()) out.push_back(constant_expr(item, line, f.column + start));
            start = i + 1;
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------- public API

ValidationError::ValidationError(const std::vector<std::string>& problems)
    : std::invalid_argument([&] {
          std::string msg = "validation failed:";
          for (const auto& p : problems) msg += "\n  - " + p;
          return msg;
      }()),
      problems_(problems) {}

ProblemFileError::ProblemFileError(const std::string& msg, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

const PiecewiseScalarField& Approximation::primal() const& {
    if (kind != ApproxKind::primal) throw std::invalid_argument("'" + name + "' is a dual (moment) field");
    return std::get<PiecewiseScalarField>(field);
}

const PiecewiseSymMatrixField& Approximation::dual() const& {
    if (kind != ApproxKind::dual) throw std::invalid_argument("'" + name + "' is a primal (scalar) field");
    return std::get<PiecewiseSymMatrixField>(field);
}

PiecewiseScalarField Approximation::primal() && { return std::move(std::as_const(*this).primal()); }

PiecewiseSymMatrixField Approximation::dual() && { return std::move(std::as_const(*this).dual()); }

Approximation ProblemInstance::approximation(const std::string& spec) const {
    static const std::regex param_form(R"(^\s*([A-Za-z_]\w*)\s*\(\s*([^)]*?)\s*\)\s*$)");
    std::smatch m;
    if (std::regex_match(spec, m, param_form)) {
        const std::string fam = m[1];
        if (name == "model_1d" && (fam == "v_eps" || fam == "n_eps")) {
            std::size_t used = 0;
            double eps = 0.0;
            try {
                eps = std::stod(m[2], &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != static_cast<std::size_t>(m[2].length())) throw std::invalid_argument("bad parameter in '" + spec + "'");
            return fam == "v_eps" ? model_v_eps(eps) : model_n_eps(eps);
        }
        throw std::invalid_argument("problem '" + name + "' has no parametric family '" + fam + "'");
    }
    const auto it = approximations.find(spec);
    if (it == approximations.end()) {
        std::string known;
        for (const auto& n : approximation_names()) known += (known.empty() ? "" : ", ") + n;
        throw std::invalid_argument("unknown approximation '" + spec + "' for " + name + " (known: " + known + ")");
    }
    return it->second;
}

std::vector<std::string> ProblemInstance::approximation_names() const {
    std::vector<std::string> out;
    for (const auto& [k, _] : approximations) out.push_back(k);
    if (name == "model_1d") {
        out.push_back("v_eps(<eps>)");
        out.push_back("n_eps(<eps>)");
    }
    return out;
}

std::vector<std::string> builtin_ids() { return {"model_1d", "circular_plate"}; }

ProblemInstance builtin(const std::string& id) {
    if (id == "model_1d") return make_model_1d();
    if (id == "circular_plate") return make_circular_plate();
    throw std::invalid_argument("unknown built-in problem '" + id + "' (known: model_1d, circular_plate)");
}

Approximation model_v_eps(double eps) {
    check_eps(eps);
    const std::string e = number_text(eps);
    const double a = eps - 0.5;
    const double b = 0.5 - eps;
    auto field = scalar(kModelDomain,
                        {{-1.0, a, substitute("-4/(2*E+1)^3*(1+x)^2*(-4*x+6*E-1)", "E", e)},
                         {a, b, "-1"},
                         {b, 1.0, substitute("-4/(2*E+1)^3*(1-x)^2*(4*x+6*E-1)", "E", e)}},
                        1);
    return primal("v_eps(" + std::to_string(eps) + ")", std::move(field), {{"eps", eps}});
}

Approximation model_n_eps(double eps) {
    check_eps(eps);
    const std::string e = number_text(eps);
    const double a = eps - 0.5;
    const double b = 0.5 - eps;
    auto field = PiecewiseSymMatrixField::parse_line(
        kModelDomain, {{-1.0, a, substitute("24/(2*E+1)^5*(-2*x+2*E-1)^2*(3-2*E+4*x)", "E", e)},
                       {a, b, "0"},
                       {b, 1.0, substitute("24/(2*E+1)^5*(2*x+2*E-1)^2*(3-2*E-4*x)", "E", e)}});
    return dual("n_eps(" + std::to_string(eps) + ")", std::move(field), {{"eps", eps}});
}

std::vector<std::string> validate(const ProblemInstance& p) {
    std::vector<std::string> issues;
    const Domain& d = p.domain;
    auto same_domain = [&](const Domain& other, const std::string& what) {
        if (!(other == d)) issues.push_back(what + " lives on " + other.describe() + ", expected " + d.describe());
        return other == d;
    };
    if (!same_domain(p.f.domain(), "load") || !same_domain(p.phi.domain(), "obstacle")) return issues;
    if (!(p.friedrichs > 0.0) || !std::isfinite(p.friedrichs)) issues.push_back("Friedrichs constant must be positive");

    // phi <= 0 on the boundary.
    std::vector<double> ends{d.upper()};
    if (!d.is_disk()) ends.insert(ends.begin(), d.lower());
    const int nt = d.is_disk() ? 64 : 1;
    for (double s : ends) {
        for (int k = 0; k < nt; ++k) {
            const double t = 2.0 * std::numbers::pi * k / nt;
            const double v = p.phi.value(s, t);
            if (v > 1e-12) {
                std::ostringstream os;
                os << "obstacle is positive on the boundary (phi = " << v << " at " << (d.is_disk() ? "r=" : "x=") << s << ")";
                issues.push_back(os.str());
                k = nt;
            }
        }
    }

    auto admissible = [&](const PiecewiseScalarField& v, const std::string& what) {
        if (!same_domain(v.domain(), what)) return;
        const auto rep = check_admissible(v, p.phi);
        if (!rep.admissible) {
            const auto& first = rep.violations.front();
            std::ostringstream os;
            os << what << " is not admissible: " << rep.violation_count << " violation(s), first " << first.kind
               << " at s=" << first.s << " (value " << first.value << ")";
            issues.push_back(os.str());
        }
    };

    if (p.exact) {
        const auto& ex = *p.exact;
        admissible(ex.u, "exact u");
        if (same_domain(ex.p_star.domain(), "exact p*") && same_domain(ex.u.domain(), "exact u")) {
            const auto h = hessian(ex.u);
            const auto free = ex.coincidence.complement(d.lower(), d.upper());
            double worst = 0.0;
            double where = 0.0;
            for (const Range& rg : free.components()) {
                for (int j = 1; j < 64; ++j) {
                    const double s = rg.lo + (rg.hi - rg.lo) * j / 64.0;
                    for (int k = 0; k < (d.is_disk() ? 16 : 1); ++k) {
                        const Coords c = d.at(s, 2.0 * std::numbers::pi * k / 16.0);
                        const auto a = h(c);
                        const auto b = ex.p_star(c);
                        for (int e = 0; e < 3; ++e) {
                            const double dev = std::abs(a[e] - b[e]) / std::max(1.0, std::abs(b[e]));
                            if (dev > worst) {
                                worst = dev;
                                where = s;
                            }
                        }
                    }
                }
            }
            if (worst > 1e-8) {
                std::ostringstream os;
                os << "exact p* differs from hessian(u) by " << worst << " (relative) near s=" << where;
                issues.push_back(os.str());
            }
        }
        for (double g : ex.free_boundary) {
            if (!(g > d.lower() && g < d.upper())) issues.push_back("free boundary point " + std::to_string(g) + " is not interior");
        }
    }
    for (const auto& [name, a] : p.approximations) {
        if (a.kind == ApproxKind::primal) {
            admissible(a.primal(), "approximation '" + name + "'");
        } else {
            same_domain(a.dual().domain(), "approximation '" + name + "'");
        }
    }
    return issues;
}

ProblemInstance load_problem_text(const std::string& text) {
    const auto sections = read_sections(text);
    auto find = [&](const std::string& name) -> const Section* {
        const Section* found = nullptr;
        for (const auto& s : sections) {
            if (s.name == name) {
                if (found) fail("duplicate section [" + name + "]", s.header, 0);
                found = &s;
            }
        }
        return found;
    };
    for (const auto& s : sections) {
        static const std::vector<std::string> known = {"problem", "load", "obstacle", "exact.u", "exact.pstar",
                                                       "exact.coincidence"};
        if (std::find(known.begin(), known.end(), s.name) == known.end() && s.name.rfind("approx.", 0) != 0) {
            fail("unknown section [" + s.name + "]", s.header, 1);
        }
    }
    const Section* head = find("problem");
    if (!head) throw ProblemFileError("missing [problem] section", 1, 1);
    auto setting = [&](const Section& s, const std::string& key) -> const Field& {
        const auto it = s.settings.find(key);
        if (it == s.settings.end()) fail("[" + s.name + "] needs " + key + "=...", s.header, 0);
        return it->second;
    };
    const Field& dom = setting(*head, "domain");
    const Line& dom_line = head->setting_lines.at("domain");
    const auto [kind, args] = call_form(dom.value, dom_line, dom.column);
    std::optional<Domain> domain;
    try {
        if (kind == "interval" && args.size() == 2) domain = Domain::interval(args[0], args[1]);
        if (kind == "disk" && args.size() == 1) domain = Domain::disk(args[0]);
    } catch (const FieldError& e) {
        fail(e.what(), dom_line, dom.column);
    }
    if (!domain) fail("domain must be interval(a,b) or disk(R)", dom_line, dom.column);
    const Domain d = *domain;

    const Section* load = find("load");
    const Section* obstacle = find("obstacle");
    if (!load) throw ProblemFileError("missing [load] section", head->header.number, 1);
    if (!obstacle) throw ProblemFileError("missing [obstacle] section", head->header.number, 1);

    double friedrichs = friedrichs_constant(d);
    if (head->settings.count("friedrichs")) {
        const Field& f = head->settings.at("friedrichs");
        friedrichs = constant_expr(f.value, head->setting_lines.at("friedrichs"), f.column);
    }

    ProblemInstance inst{setting(*head, "name").value, d, scalar_section(*load, d), scalar_section(*obstacle, d),
                         friedrichs, std::nullopt, {}};

    const Section* eu = find("exact.u");
    const Section* ep = find("exact.pstar");
    const Section* ec = find("exact.coincidence");
    if (eu || ep || ec) {
        if (!(eu && ep && ec)) {
            const Section* any = eu ? eu : ep ? ep : ec;
            fail("exact solution needs [exact.u], [exact.pstar] and [exact.coincidence]", any->header, 0);
        }
        std::vector<Range> ranges;
        for (const auto& [r, _] : ec->ranges) ranges.push_back(r);
        SubdomainSet coincidence(ranges);
        std::vector<double> free_boundary;
        if (ec->settings.count("free_boundary")) {
            free_boundary = number_list(ec->settings.at("free_boundary"), ec->setting_lines.at("free_boundary"));
        } else {
            free_boundary = coincidence.interior_boundary(d.lower(), d.upper());
        }
        inst.exact = ExactSolution{scalar_section(*eu, d), matrix_section(*ep, d), coincidence, free_boundary};
    }
    for (const auto& s : sections) {
        if (s.name.rfind("approx.", 0) != 0) continue;
        const std::string name = s.name.substr(7);
        if (name.empty()) fail("approximation needs a name", s.header, 0);
        const std::string k = setting(s, "kind").value;
        if (k == "primal") {
            inst.approximations.emplace(name, primal(name, scalar_section(s, d)));
        } else if (k == "dual") {
            inst.approximations.emplace(name, dual(name, matrix_section(s, d)));
        } else {
            fail("kind must be primal or dual", s.setting_lines.at("kind"), s.settings.at("kind").column);
        }
    }
    // The exact pair is addressable like any approximation, as for the builtins.
    if (inst.exact) {
        inst.approximations.emplace("u", primal("u", inst.exact->u));
        inst.approximations.emplace("pstar", dual("pstar", inst.exact->p_star));
    }
    const auto issues = validate(inst);
    if (!issues.empty()) throw ValidationError(issues);
    return inst;
}

ProblemInstance load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open problem file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_problem_text(ss.str());
}

ProblemInstance resolve_problem(const std::string& id_or_path) {
    const auto ids = builtin_ids();
    if (std::find(ids.begin(), ids.end(), id_or_path) != ids.end()) return builtin(id_or_path);
    return load_problem(id_or_path);
}

}  // namespace certify
