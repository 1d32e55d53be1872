#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace govmine::pipeline {

struct PlotSeries {
    std::string name;
    std::string color;  // CSS color
    std::vector<double> x;
    std::vector<double> y;
    /// Optional band (same length as y).
    std::vector<double> lower;
    std::vector<double> upper;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
};

/// Standalone SVG document with one plot.
std::string render_line_plot(const LinePlot& plot, int width = 640, int height = 400);

/// Grid of small plots sharing one legend.
std::string render_panels(std::span<const LinePlot> panels, int columns, int panel_width = 300,
                          int panel_height = 220, const std::string& title = {});

}  // namespace govmine::pipeline
