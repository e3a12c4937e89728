// certify: error identities, majorants, reference tables and plots for the
// biharmonic obstacle problem.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "certify/majorant.hpp"
#include "certify/measures.hpp"
#include "certify/plot.hpp"
#include "certify/report.hpp"

namespace fs = std::filesystem;
using namespace certify;

namespace {

enum class Exit : int { ok = 0, validation = 1, infeasible = 2, quadrature = 3 };

int code(Exit e) { return static_cast<int>(e); }

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int angular_points = 64;
    std::optional<double> friedrichs;
    std::string out;
    std::string format = "csv";
};

struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

QuadratureConfig quadrature(const Options& o) {
    QuadratureConfig cfg;
    cfg.rel_tol = o.rel_tol;
    cfg.abs_tol = o.abs_tol;
    cfg.angular_points = o.angular_points;
    cfg.validate();
    return cfg;
}

// CERTIFY_OUT wins over --out. Empty means "no output directory".
std::string out_dir(const Options& o) {
    if (const char* env = std::getenv("CERTIFY_OUT"); env && *env) return env;
    return o.out;
}

void prepare_out_dir(const std::string& dir) {
    if (dir.empty()) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ValidationFailure("cannot create output directory '" + dir + "'");
    const fs::path probe = fs::path(dir) / ".certify_write_test";
    std::ofstream f(probe);
    if (!f) throw ValidationFailure("output directory '" + dir + "' is not writable");
    f.close();
    fs::remove(probe, ec);
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_')) c = '_';
    return s;
}

std::string stem_of(const std::string& problem) {
    // A file path names its problem by the file stem.
    const fs::path p(problem);
    return sanitize(p.has_extension() ? p.stem().string() : problem);
}

void emit(const Report& r, const Options& o, const std::string& stem) {
    const ReportFormat fmt = o.format == "json" ? ReportFormat::json : ReportFormat::csv;
    write_report(r, fmt, std::cout);
    const std::string dir = out_dir(o);
    if (dir.empty()) return;
    const fs::path path = fs::path(dir) / (stem + (fmt == ReportFormat::json ? ".json" : ".csv"));
    std::ofstream f(path, std::ios::binary);
    write_report(r, fmt, f);
    if (!f) throw ValidationFailure("could not write " + path.string());
    std::cerr << "wrote " << path.string() << "\n";
}

ProblemInstance open_problem(const std::string& id, const Options& o) {
    ProblemInstance p = resolve_problem(id);
    if (o.friedrichs) {
        if (!(*o.friedrichs > 0.0)) throw ValidationFailure("--friedrichs must be positive");
        p.friedrichs = *o.friedrichs;
    }
    return p;
}

Approximation need(const ProblemInstance& p, const std::string& name, ApproxKind kind) {
    Approximation a = p.approximation(name);
    if (a.kind != kind)
        throw ValidationFailure("'" + name + "' is a " + (a.kind == ApproxKind::primal ? "primal" : "dual") +
                                " field; expected a " + (kind == ApproxKind::primal ? "primal" : "dual") + " one");
    if (kind == ApproxKind::primal) {
        const auto rep = check_admissible(a.primal(), p.phi);
        if (!rep.admissible) {
            const auto& v = rep.violations.front();
            std::ostringstream os;
            os << "'" << name << "' is not admissible: " << v.kind << " at s=" << v.s << " (value " << v.value << ")";
            throw ValidationFailure(os.str());
        }
    }
    return a;
}

int run_identity(const std::string& problem, const std::string& primal, const std::string& dual, const Options& o) {
    const QuadratureConfig cfg = quadrature(o);
    prepare_out_dir(out_dir(o));
    const auto p = open_problem(problem, o);
    const auto v = need(p, primal, ApproxKind::primal);
    const auto n = need(p, dual, ApproxKind::dual);
    if (!p.exact) throw ValidationFailure("problem '" + p.name + "' has no exact solution; the identity needs one");
    try {
        const auto r = verify_identity(p, v.primal(), n.dual(), cfg);
        emit(identity_report(r, identity_references(p.name, v, n)), o,
             "identity_" + stem_of(problem) + "_" + sanitize(primal) + "_" + sanitize(dual));
        char line[256];
        std::snprintf(line, sizeof line, "identity: lhs %.6g = rhs %.6g, residual %.3g (budget %.3g): %s\n",
                      r.lhs_total.value, r.rhs_total.value, r.residual, r.budget, r.pass ? "PASS" : "FAIL");
        std::cerr << line;
        return r.pass ? code(Exit::ok) : code(Exit::validation);
    } catch (const InfeasibleError& e) {
        std::cerr << "identity: not applicable, " << e.what() << "\n"
                  << "hint: use 'certify majorant' for duals that violate f - div Div n <= 0\n";
        return code(Exit::infeasible);
    }
}

std::vector<double> parse_grid(const std::string& spec) {
    double a = 0, b = 0;
    int n = 0;
    char tail = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%d%c", &a, &b, &n, &tail) != 3)
        throw ValidationFailure("--beta-grid expects a:b:n, got '" + spec + "'");
    try {
        return beta_grid(a, b, n);
    } catch (const std::invalid_argument& e) {
        throw ValidationFailure(e.what());
    }
}

int run_majorant(const std::string& problem, const std::string& primal, const std::string& dual,
                 std::optional<double> beta, const std::string& grid, bool optimize, const Options& o) {
    if (static_cast<int>(beta.has_value()) + static_cast<int>(!grid.empty()) + static_cast<int>(optimize) > 1)
        throw ValidationFailure("give at most one of --beta, --beta-grid, --optimize-beta");
    std::vector<double> betas;
    if (beta) {
        if (!(*beta > 0.0 && *beta <= 1.0)) throw ValidationFailure("--beta must lie in (0, 1]");
        betas = {*beta};
    } else if (!grid.empty()) {
        betas = parse_grid(grid);
    }
    const QuadratureConfig cfg = quadrature(o);
    prepare_out_dir(out_dir(o));
    const auto p = open_problem(problem, o);
    const auto v = need(p, primal, ApproxKind::primal);
    const auto n = need(p, dual, ApproxKind::dual);
    const auto c = majorant_components(p, v.primal(), n.dual(), cfg);
    if (betas.empty()) betas = {c.optimal_beta()};
    emit(majorant_report(c, betas, majorant_references(p.name, v, n, betas)), o,
         "majorant_" + stem_of(problem) + "_" + sanitize(primal) + "_" + sanitize(dual));
    bool holds = true;
    for (double b : betas) {
        const auto r = c.report_at(b);
        char line[256];
        std::snprintf(line, sizeof line, "majorant: beta %.4g  M = %.6g", b, r.total.value);
        std::cerr << line;
        if (r.lhs_literal) {
            std::snprintf(line, sizeof line, "  lhs = %.6g  efficiency %.4g  %s", r.lhs_literal->value,
                          r.efficiency_literal.value_or(0.0), r.bound_holds ? "bound holds" : "BOUND VIOLATED");
            std::cerr << line;
            holds = holds && r.bound_holds;
        }
        std::cerr << "\n";
    }
    return holds ? code(Exit::ok) : code(Exit::validation);
}

int run_table(int id, const Options& o) {
    if (id < 1 || id > 3) throw ValidationFailure("table id must be 1, 2 or 3");
    const QuadratureConfig cfg = quadrature(o);
    prepare_out_dir(out_dir(o));
    const auto rep = table_report(id, cfg);
    emit(rep, o, "table" + std::to_string(id));
    int off = 0;
    for (const auto& row : rep.rows) {
        if (!row.note.empty()) {
            std::cerr << row.quantity << ": " << row.note << "\n";
            continue;
        }
        if (row.rel_dev() && *row.rel_dev() > 5e-3) {
            std::cerr << row.quantity << ": computed " << format_number(row.computed) << " vs reference "
                      << format_number(*row.reference) << "\n";
            ++off;
        }
    }
    if (id == 3) {
        for (std::size_t i = 0; i + 3 < rep.rows.size(); i += 4) {
            const double rhs = rep.rows[i + 2].computed, lhs = rep.rows[i + 3].computed;
            if (std::abs(lhs - rhs) > 1e-6 * std::abs(rhs)) {
                std::cerr << rep.rows[i].quantity << ": lhs " << lhs << " != rhs " << rhs << "\n";
                ++off;
            }
        }
    }
    std::cerr << "table " << id << ": " << rep.rows.size() << " cells, " << off << " outside tolerance\n";
    return off == 0 ? code(Exit::ok) : code(Exit::validation);
}

int run_plot(const std::string& problem, const std::vector<std::string>& fields, double theta, const Options& o) {
    std::string dir = out_dir(o);
    if (dir.empty()) dir = ".";
    prepare_out_dir(dir);
    const auto p = open_problem(problem, o);
    const auto spec = field_plot(p, fields, theta);
    std::string stem = stem_of(problem);
    for (const auto& f : fields) stem += "_" + sanitize(f);
    const fs::path path = fs::path(dir) / (stem + ".svg");
    std::ofstream out(path, std::ios::binary);
    out << render_svg(spec);
    if (!out) throw ValidationFailure("could not write " + path.string());
    std::cout << path.string() << "\n";
    return code(Exit::ok);
}

int run_load(const std::string& file, const std::vector<std::string>& pair, const Options& o) {
    if (!pair.empty() && pair.size() != 2) throw ValidationFailure("load takes either no fields or a primal and a dual");
    const auto p = open_problem(file, o);
    if (pair.size() == 2) return run_identity(file, pair[0], pair[1], o);
    std::cout << "problem " << p.name << " on " << p.domain.describe() << "\n";
    std::cout << "friedrichs " << format_number(p.friedrichs) << "\n";
    std::cout << "exact solution " << (p.exact ? "yes" : "no") << "\n";
    if (p.exact) std::cout << "coincidence set " << p.exact->coincidence.describe() << "\n";
    for (const auto& [name, a] : p.approximations)
        std::cout << (a.kind == ApproxKind::primal ? "primal " : "dual ") << name << "\n";
    std::cerr << "load: " << file << " is valid\n";
    return code(Exit::ok);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Error identities and majorants for the biharmonic obstacle problem"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--rel-tol", o.rel_tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
    app.add_option("--abs-tol", o.abs_tol, "Absolute quadrature tolerance")->check(CLI::PositiveNumber);
    app.add_option("--angular-points", o.angular_points, "Angular trapezoid points on disks (even, >= 4)");
    app.add_option("--friedrichs", o.friedrichs, "Override the Friedrichs constant C_F");
    app.add_option("--out", o.out, "Directory for report files (CERTIFY_OUT overrides)");
    app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "json"}));

    std::string problem, primal, dual;
    auto* identity = app.add_subcommand("identity", "Both sides of the error identity for a feasible pair");
    identity->add_option("problem", problem, "Built-in id or problem file")->required();
    identity->add_option("primal", primal, "Primal approximation")->required();
    identity->add_option("dual", dual, "Dual approximation")->required();

    std::optional<double> beta;
    std::string grid;
    bool optimize = false;
    auto* majorant = app.add_subcommand("majorant", "Majorant terms and efficiency");
    majorant->add_option("problem", problem, "Built-in id or problem file")->required();
    majorant->add_option("primal", primal, "Primal approximation")->required();
    majorant->add_option("dual", dual, "Dual approximation")->required();
    majorant->add_option("--beta", beta, "Single beta in (0, 1]");
    majorant->add_option("--beta-grid", grid, "Beta grid a:b:n");
    majorant->add_flag("--optimize-beta", optimize, "Minimise over beta (default)");

    int table_id = 0;
    auto* table = app.add_subcommand("table", "Recompute a reference table of the beam example");
    table->add_option("id", table_id, "1, 2 or 3")->required();

    std::vector<std::string> fields;
    double theta = 0.0;
    auto* plot = app.add_subcommand("plot", "SVG line plot of fields");
    plot->add_option("problem", problem, "Built-in id or problem file")->required();
    plot->add_option("fields", fields, "Field names; prefix d for the derivative")->required();
    plot->add_option("--theta", theta, "Ray angle on disks");

    std::string file;
    std::vector<std::string> pair;
    auto* load = app.add_subcommand("load", "Validate a problem file, optionally run the identity on a pair");
    load->add_option("file", file, "Problem file")->required();
    load->add_option("fields", pair, "primal dual");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? code(Exit::ok) : code(Exit::validation);
    }

    try {
        if (*identity) return run_identity(problem, primal, dual, o);
        if (*majorant) return run_majorant(problem, primal, dual, beta, grid, optimize, o);
        if (*table) return run_table(table_id, o);
        if (*plot) return run_plot(problem, fields, theta, o);
        if (*load) return run_load(file, pair, o);
    } catch (const QuadratureError& e) {
        std::cerr << "quadrature failed: " << e.what() << "\n";
        return code(Exit::quadrature);
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return code(Exit::infeasible);
    } catch (const ValidationError& e) {
        std::cerr << "validation failed:\n";
        for (const auto& m : e.problems()) std::cerr << "  - " << m << "\n";
        return code(Exit::validation);
    } catch (const ProblemFileError& e) {
        std::cerr << "problem file: " << e.what() << "\n";
        return code(Exit::validation);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return code(Exit::validation);
    }
    return code(Exit::validation);
}
