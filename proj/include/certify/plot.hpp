#pragma once

#include <string>
#include <vector>

#include "certify/problems.hpp"

namespace certify {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    int width = 720;
    int height = 440;
};

/// Static SVG line plot. Identical specs give identical bytes.
std::string render_svg(const PlotSpec& spec);

/// Line plot of named fields along the layout coordinate: x on an interval,
/// the ray at `theta` on a disk. Names are "f", "phi", approximation names and
/// "d<name>" for the derivative along the layout coordinate. Matrix fields on a
/// disk contribute one curve per component. Every piece is sampled separately,
/// so jumps stay visible.
PlotSpec field_plot(const ProblemInstance& p, const std::vector<std::string>& names, double theta = 0.0,
                    int samples_per_piece = 200);

}  // namespace certify
