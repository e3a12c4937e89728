#include "certify/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace certify {
namespace {

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    if (std::abs(v) < 1e-12) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// Tick step 1, 2 or 5 times a power of ten giving about `target` ticks.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

struct Curve {
    std::string label;
    // Each segment is one piece; segments are drawn as separate polylines.
    std::vector<std::pair<std::vector<double>, std::vector<double>>> segments;
};

struct Resolved {
    std::string label;
    bool derivative = false;
    bool matrix = false;
    const PiecewiseScalarField* scalar = nullptr;
    const PiecewiseSymMatrixField* tensor = nullptr;
};

std::vector<double> samples(double lo, double hi, int n) {
    std::vector<double> s;
    for (int i = 0; i < n; ++i) s.push_back(lo + (hi - lo) * i / (n - 1));
    return s;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
    const double W = spec.width, H = spec.height;
    const double left = 80, right = 150, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : spec.series) {
        if (s.x.size() != s.y.size()) throw std::invalid_argument("series '" + s.label + "': x and y differ in length");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax - ymin <= 1e-12 * std::max(1.0, std::abs(ymax))) {
        ymin -= 1.0;
        ymax += 1.0;
    } else {
        const double pad = 0.05 * (ymax - ymin);
        ymin -= pad;
        ymax += pad;
    }
    auto X = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto Y = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << spec.height << "\" fill=\"white\"/>\n";
    s << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(spec.title) << "</text>\n";

    // Grid and ticks.
    const double xs = nice_step(xmax - xmin, 8), ys = nice_step(ymax - ymin, 6);
    for (double t = std::ceil(xmin / xs) * xs; t <= xmax + 1e-9 * xs; t += xs) {
        s << "<line x1=\"" << fmt(X(t)) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(X(t)) << "\" y2=\""
          << fmt(top + ph) << "\" stroke=\"#e0e0e0\"/>\n";
        s << "<text x=\"" << fmt(X(t)) << "\" y=\"" << fmt(top + ph + 16) << "\" text-anchor=\"middle\">"
          << tick_label(t) << "</text>\n";
    }
    for (double t = std::ceil(ymin / ys) * ys; t <= ymax + 1e-9 * ys; t += ys) {
        s << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(Y(t)) << "\" x2=\"" << fmt(left + pw) << "\" y2=\""
          << fmt(Y(t)) << "\" stroke=\"#e0e0e0\"/>\n";
        s << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(Y(t) + 4) << "\" text-anchor=\"end\">" << tick_label(t)
          << "</text>\n";
    }
    s << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    s << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(H - 12) << "\" text-anchor=\"middle\">"
      << escape(spec.x_label) << "</text>\n";
    s << "<text x=\"18\" y=\"" << fmt(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fmt(top + ph / 2) << ")\">" << escape(spec.y_label) << "</text>\n";

    // Curves; NaN samples and explicit breaks (x decreasing) split a polyline.
    for (std::size_t k = 0; k < spec.series.size(); ++k) {
        const auto& sr = spec.series[k];
        const char* color = kColors[k % (sizeof kColors / sizeof *kColors)];
        std::string pts;
        auto flush = [&] {
            if (!pts.empty())
                s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts
                  << "\"/>\n";
            pts.clear();
        };
        for (std::size_t i = 0; i < sr.x.size(); ++i) {
            if (!std::isfinite(sr.y[i])) {
                flush();
                continue;
            }
            if (!pts.empty()) pts += ' ';
            pts += fmt(X(sr.x[i])) + "," + fmt(Y(sr.y[i]));
        }
        flush();
        const double ly = top + 10 + 18.0 * static_cast<double>(k);
        s << "<line x1=\"" << fmt(left + pw + 12) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(left + pw + 36)
          << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << fmt(left + pw + 42) << "\" y=\"" << fmt(ly + 4) << "\">" << escape(sr.label)
          << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

PlotSpec field_plot(const ProblemInstance& p, const std::vector<std::string>& names, double theta,
                    int samples_per_piece) {
    if (names.empty()) throw std::invalid_argument("no fields to plot");
    if (samples_per_piece < 2) throw std::invalid_argument("need at least two samples per piece");
    const Domain& d = p.domain;
    const double floor_s = d.is_disk() ? 1e-9 * d.upper() : -std::numeric_limits<double>::infinity();

    std::vector<Approximation> held;  // keeps fields named through approximation() alive
    held.reserve(names.size());
    PlotSpec spec;
    spec.title = p.name;
    spec.x_label = d.is_disk() ? "r (theta = " + tick_label(theta) + ")" : "x";
    spec.y_label = "value";

    auto lookup = [&](const std::string& name, Resolved& out) {
        if (name == "f") {
            out.scalar = &p.f;
            return true;
        }
        if (name == "phi") {
            out.scalar = &p.phi;
            return true;
        }
        try {
            held.push_back(p.approximation(name));
        } catch (const std::invalid_argument&) {
            return false;
        }
        const auto& a = held.back();
        if (a.kind == ApproxKind::primal) out.scalar = &a.primal();
        else out.tensor = &a.dual();
        return true;
    };

    for (const auto& name : names) {
        Resolved r;
        r.label = name;
        if (!lookup(name, r)) {
            if (!(name.size() > 1 && name[0] == 'd' && lookup(name.substr(1), r)))
                throw std::invalid_argument("unknown field '" + name + "' for " + p.name);
            r.derivative = true;
        }
        const Var s_var = d.layout_var();
        auto emit = [&](const std::string& label, std::size_t npieces, auto piece_range, auto piece_expr) {
            Series sr;
            sr.label = label;
            for (std::size_t i = 0; i < npieces; ++i) {
                const auto [lo, hi] = piece_range(i);
                const Expr e = r.derivative ? piece_expr(i).differentiate(s_var) : piece_expr(i);
                const CompiledExpr ce(e);
                if (i > 0) {
                    sr.x.push_back(lo);
                    sr.y.push_back(std::numeric_limits<double>::quiet_NaN());
                }
                for (double s : samples(lo, hi, samples_per_piece)) {
                    sr.x.push_back(s);
                    sr.y.push_back(ce(d.at(std::max(s, floor_s), theta)));  // off the pole
                }
            }
            spec.series.push_back(std::move(sr));
        };
        if (r.scalar) {
            const auto& pc = r.scalar->pieces();
            emit(name, pc.size(), [&](std::size_t i) { return std::pair{pc[i].lo, pc[i].hi}; },
                 [&](std::size_t i) { return pc[i].expr; });
        } else {
            const auto& pc = r.tensor->pieces();
            auto range = [&](std::size_t i) { return std::pair{pc[i].lo, pc[i].hi}; };
            if (!d.is_disk()) {
                emit(name, pc.size(), range, [&](std::size_t i) { return pc[i].e11; });
            } else {
                emit(name + ".11", pc.size(), range, [&](std::size_t i) { return pc[i].e11; });
                emit(name + ".12", pc.size(), range, [&](std::size_t i) { return pc[i].e12; });
                emit(name + ".22", pc.size(), range, [&](std::size_t i) { return pc[i].e22; });
            }
        }
    }
    return spec;
}

}  // namespace certify
