#pragma once

#include <array>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "certify/majorant.hpp"
#include "certify/measures.hpp"

namespace certify {

/// One output line: a computed quantity with its quadrature error bound and,
/// when known, a published reference value.
struct ReportRow {
    std::string quantity;
    double computed = 0.0;
    double quad_error = 0.0;
    std::optional<double> reference;
    std::string note;

    /// |computed - reference| / |reference|; the absolute deviation when the reference is 0.
    std::optional<double> rel_dev() const;
};

struct Report {
    std::string title;
    std::vector<ReportRow> rows;

    void add(std::string quantity, const Estimate& e, std::optional<double> reference = std::nullopt,
             std::string note = {});
    const ReportRow& row(const std::string& quantity) const;  // throws std::out_of_range
};

enum class ReportFormat { csv, json };

/// Numbers are written with 6 significant digits; output depends only on the report.
std::string format_number(double v);
void write_csv(const Report& r, std::ostream& out);
void write_json(const Report& r, std::ostream& out);
void write_report(const Report& r, ReportFormat format, std::ostream& out);

// ---------------------------------------------------------------------------- reference tables

/// The eps values of the beam tables, in table order.
const std::vector<double>& table_eps();

struct TableSpec {
    int id;
    std::string title;
    std::array<std::string, 4> columns;  // quantity names, one per cell
    std::vector<std::array<double, 4>> reference;  // one row per eps in table_eps()
};

/// Tables 1-3: components of mu(v_eps), of mu*(n_eps), and of the identity for (v_eps, n_eps).
const TableSpec& table_spec(int id);  // id in {1, 2, 3}

/// Recomputes every cell. Quantities are "eps=<eps>/<column>". Reference cells
/// that disagree with their own row are carried but flagged in `note`.
Report table_report(int id, const QuadratureConfig& cfg);

// ---------------------------------------------------------------------------- identity and majorant

/// Reference values known for a (problem, primal, dual) combination, keyed by
/// quantity name; empty when none are known.
std::map<std::string, double> identity_references(const std::string& problem, const Approximation& v,
                                                  const Approximation& n);

Report identity_report(const IdentityReport& r, const std::map<std::string, double>& references = {});

/// Reference values for majorant quantities; `beta` selects the per-beta entries.
std::map<std::string, double> majorant_references(const std::string& problem, const Approximation& v,
                                                  const Approximation& n, const std::vector<double>& betas);

/// Coefficients A0, A1, A2, the optimal beta, and per-beta rows "beta=<b>/<term>".
Report majorant_report(const MajorantComponents& c, const std::vector<double>& betas,
                       const std::map<std::string, double>& references = {});

}  // namespace certify
