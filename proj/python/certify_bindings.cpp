#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "certify/majorant.hpp"
#include "certify/measures.hpp"
#include "certify/plot.hpp"
#include "certify/report.hpp"

namespace py = pybind11;
using namespace certify;

namespace {

QuadratureConfig config(std::optional<QuadratureConfig> cfg) { return cfg.value_or(QuadratureConfig{}); }

py::dict measure_dict(const MeasureBreakdown& m) {
    py::dict d;
    d["quadratic"] = m.quadratic;
    d["nonlinear"] = m.nonlinear;
    d["jump_part"] = m.jump_part;
    d["total"] = m.total;
    d["warn_infeasible"] = m.warn_infeasible;
    return d;
}

py::list rows_of(const Report& r) {
    py::list out;
    for (const auto& row : r.rows) {
        py::dict d;
        d["quantity"] = row.quantity;
        d["computed"] = row.computed;
        d["quad_error"] = row.quad_error;
        d["reference"] = row.reference ? py::cast(*row.reference) : py::none();
        const auto dev = row.rel_dev();
        d["rel_dev"] = dev ? py::cast(*dev) : py::none();
        d["note"] = row.note;
        out.append(d);
    }
    return out;
}

std::string report_text(const Report& r, const std::string& format) {
    std::ostringstream os;
    if (format == "json") write_json(r, os);
    else if (format == "csv") write_csv(r, os);
    else throw std::invalid_argument("format must be 'csv' or 'json'");
    return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Error identities and majorants for the biharmonic obstacle problem";

    auto validation_error = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_ValueError);
    py::register_exception<ProblemFileError>(m, "ProblemFileError", PyExc_ValueError);
    py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_ArithmeticError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    (void)validation_error;

    py::class_<Estimate>(m, "Estimate")
        .def(py::init<>())
        .def(py::init([](double v, double e) { return Estimate{v, e}; }), py::arg("value"), py::arg("error") = 0.0)
        .def_readwrite("value", &Estimate::value)
        .def_readwrite("error", &Estimate::error)
        .def("__float__", [](const Estimate& e) { return e.value; })
        .def("__repr__", [](const Estimate& e) {
            std::ostringstream os;
            os << "Estimate(" << e.value << " +- " << e.error << ")";
            return os.str();
        });

    py::class_<QuadratureConfig>(m, "QuadratureConfig")
        .def(py::init<>())
        .def(py::init([](double rel_tol, double abs_tol, int max_subdivisions, int angular_points) {
                 QuadratureConfig c{rel_tol, abs_tol, max_subdivisions, angular_points};
                 c.validate();
                 return c;
             }),
             py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-12, py::arg("max_subdivisions") = 4000,
             py::arg("angular_points") = 64)
        .def_readwrite("rel_tol", &QuadratureConfig::rel_tol)
        .def_readwrite("abs_tol", &QuadratureConfig::abs_tol)
        .def_readwrite("max_subdivisions", &QuadratureConfig::max_subdivisions)
        .def_readwrite("angular_points", &QuadratureConfig::angular_points);

    py::class_<Expr>(m, "Expr")
        .def("evaluate",
             [](const Expr& e, std::optional<double> x, std::optional<double> r, std::optional<double> theta) {
                 if (x) return e.evaluate(Coords::line(*x));
                 return e.evaluate(Coords::polar(r.value_or(0.0), theta.value_or(0.0)));
             },
             py::kw_only(), py::arg("x") = py::none(), py::arg("r") = py::none(), py::arg("theta") = py::none())
        .def("differentiate",
             [](const Expr& e, const std::string& var, int order) {
                 const Var v = var == "x" ? Var::x : var == "r" ? Var::r : var == "theta" ? Var::theta
                               : throw std::invalid_argument("variable must be x, r or theta");
                 return e.differentiate(v, order);
             },
             py::arg("var"), py::arg("order") = 1)
        .def("__str__", &Expr::to_string);

    m.def(
        "parse_expr",
        [](const std::string& text, const std::string& space) {
            if (space != "line" && space != "polar") throw std::invalid_argument("space must be 'line' or 'polar'");
            return parse_expr(text, space == "line" ? VarSpace::line : VarSpace::polar);
        },
        py::arg("text"), py::arg("space") = "line");

    py::class_<Domain>(m, "Domain")
        .def_static("interval", &Domain::interval)
        .def_static("disk", &Domain::disk)
        .def_property_readonly("is_disk", &Domain::is_disk)
        .def_property_readonly("lower", &Domain::lower)
        .def_property_readonly("upper", &Domain::upper)
        .def("__repr__", &Domain::describe);

    py::class_<PiecewiseScalarField>(m, "ScalarField")
        .def("__call__", &PiecewiseScalarField::value, py::arg("s"), py::arg("theta") = 0.0)
        .def_property_readonly("interfaces", &PiecewiseScalarField::interfaces);

    py::class_<PiecewiseSymMatrixField>(m, "MatrixField")
        .def("__call__",
             [](const PiecewiseSymMatrixField& n, double s, double theta) { return n(n.domain().at(s, theta)); },
             py::arg("s"), py::arg("theta") = 0.0)
        .def_property_readonly("interfaces", &PiecewiseSymMatrixField::interfaces);

    py::class_<Approximation>(m, "Approximation")
        .def_readonly("name", &Approximation::name)
        .def_property_readonly("kind",
                               [](const Approximation& a) { return a.kind == ApproxKind::primal ? "primal" : "dual"; })
        .def_readonly("parameters", &Approximation::parameters)
        .def_property_readonly("field", [](const Approximation& a) -> py::object {
            if (a.kind == ApproxKind::primal) return py::cast(a.primal());
            return py::cast(a.dual());
        });

    py::class_<ProblemInstance>(m, "Problem")
        .def_readonly("name", &ProblemInstance::name)
        .def_readonly("domain", &ProblemInstance::domain)
        .def_readwrite("friedrichs", &ProblemInstance::friedrichs)
        .def_readonly("f", &ProblemInstance::f)
        .def_readonly("phi", &ProblemInstance::phi)
        .def_property_readonly("has_exact", [](const ProblemInstance& p) { return p.exact.has_value(); })
        .def_property_readonly("coincidence",
                               [](const ProblemInstance& p) -> py::object {
                                   if (!p.exact) return py::none();
                                   py::list out;
                                   for (const auto& r : p.exact->coincidence.components())
                                       out.append(py::make_tuple(r.lo, r.hi));
                                   return out;
                               })
        .def("approximation", &ProblemInstance::approximation, py::arg("spec"))
        .def("approximation_names", &ProblemInstance::approximation_names);

    m.def("builtin_ids", &builtin_ids);
    m.def("builtin", &builtin, py::arg("id"));
    m.def("load_problem", &load_problem, py::arg("path"));
    m.def("load_problem_text", &load_problem_text, py::arg("text"));
    m.def("validate", &validate, py::arg("problem"));
    m.def("friedrichs_constant", &friedrichs_constant, py::arg("domain"));

    m.def(
        "verify_identity",
        [](const ProblemInstance& p, const std::string& primal, const std::string& dual,
           std::optional<QuadratureConfig> cfg) {
            const auto v = p.approximation(primal);
            const auto n = p.approximation(dual);
            const auto r = verify_identity(p, v.primal(), n.dual(), config(cfg));
            py::dict d;
            d["mu_primal"] = measure_dict(r.lhs_primal);
            d["mu_dual"] = measure_dict(r.lhs_dual);
            d["rhs_quadratic"] = r.rhs_quadratic;
            d["rhs_obstacle"] = r.rhs_obstacle;
            d["lhs_total"] = r.lhs_total;
            d["rhs_total"] = r.rhs_total;
            d["residual"] = r.residual;
            d["budget"] = r.budget;
            d["passed"] = r.pass;
            return d;
        },
        py::arg("problem"), py::arg("primal"), py::arg("dual"), py::arg("config") = py::none());

    m.def(
        "check_feasibility",
        [](const ProblemInstance& p, const std::string& dual) {
            const auto rep = check_feasibility(p, p.approximation(dual).dual());
            py::list bad;
            for (const auto& r : rep.violation.components()) bad.append(py::make_tuple(r.lo, r.hi));
            py::dict d;
            d["feasible"] = rep.feasible;
            d["violation"] = bad;
            d["max_violation"] = rep.max_violation;
            return d;
        },
        py::arg("problem"), py::arg("dual"));

    m.def(
        "energy_primal",
        [](const ProblemInstance& p, const std::string& primal, std::optional<QuadratureConfig> cfg) {
            return energy_primal(p, p.approximation(primal).primal(), config(cfg));
        },
        py::arg("problem"), py::arg("primal"), py::arg("config") = py::none());

    m.def(
        "energy_dual",
        [](const ProblemInstance& p, const std::string& dual, std::optional<QuadratureConfig> cfg) {
            return energy_dual(p, p.approximation(dual).dual(), config(cfg)).value;
        },
        py::arg("problem"), py::arg("dual"), py::arg("config") = py::none());

    py::class_<MajorantComponents>(m, "MajorantComponents")
        .def_property_readonly("a0", &MajorantComponents::a0)
        .def_property_readonly("a1", &MajorantComponents::a1)
        .def_property_readonly("a2", &MajorantComponents::a2)
        .def("optimal_beta", &MajorantComponents::optimal_beta)
        .def(
            "at",
            [](const MajorantComponents& c, double beta) {
                const auto r = c.report_at(beta);
                py::dict d;
                d["beta"] = r.beta;
                d["term_quadratic"] = r.term_quadratic;
                d["term_residual"] = r.term_residual;
                d["term_obstacle"] = r.term_obstacle;
                d["total"] = r.total;
                d["lhs_literal"] = r.lhs_literal ? py::cast(*r.lhs_literal) : py::none();
                d["lhs_compat"] = r.lhs_compat ? py::cast(*r.lhs_compat) : py::none();
                d["efficiency_literal"] = r.efficiency_literal ? py::cast(*r.efficiency_literal) : py::none();
                d["efficiency_compat"] = r.efficiency_compat ? py::cast(*r.efficiency_compat) : py::none();
                d["bound_holds"] = r.bound_holds;
                return d;
            },
            py::arg("beta"));

    m.def(
        "majorant",
        [](const ProblemInstance& p, const std::string& primal, const std::string& dual,
           std::optional<QuadratureConfig> cfg) {
            const auto v = p.approximation(primal);
            const auto n = p.approximation(dual);
            return majorant_components(p, v.primal(), n.dual(), config(cfg));
        },
        py::arg("problem"), py::arg("primal"), py::arg("dual"), py::arg("config") = py::none());

    m.def("beta_grid", &beta_grid, py::arg("a"), py::arg("b"), py::arg("n"));

    m.def(
        "table",
        [](int id, std::optional<QuadratureConfig> cfg) { return rows_of(table_report(id, config(cfg))); },
        py::arg("id"), py::arg("config") = py::none());

    m.def(
        "table_text",
        [](int id, const std::string& format, std::optional<QuadratureConfig> cfg) {
            return report_text(table_report(id, config(cfg)), format);
        },
        py::arg("id"), py::arg("format") = "csv", py::arg("config") = py::none());

    m.def(
        "plot_svg",
        [](const ProblemInstance& p, const std::vector<std::string>& fields, double theta) {
            return render_svg(field_plot(p, fields, theta));
        },
        py::arg("problem"), py::arg("fields"), py::arg("theta") = 0.0);
}
