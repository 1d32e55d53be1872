#include "govmine/pipeline/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace govmine::pipeline {

namespace {

std::string escape(std::string_view s) {
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

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish() {
        if (!(lo <= hi)) lo = 0, hi = 1;
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

std::string tick_label(double v) {
    if (std::abs(v) >= 100 || v == std::round(v)) return fmt::format("{:.0f}", v);
    return fmt::format("{:.2g}", v);
}

// Plot body in a box at (ox, oy) of size w x h.
std::string plot_body(const LinePlot& plot, double ox, double oy, double w, double h, bool legend) {
    const double left = 52, right = 12, top = 28, bottom = 40;
    const double pw = w - left - right, ph = h - top - bottom;
    Range xr, yr;
    for (const auto& s : plot.series) {
        for (double v : s.x) xr.add(v);
        for (double v : s.y) yr.add(v);
        for (double v : s.lower) yr.add(v);
        for (double v : s.upper) yr.add(v);
    }
    xr.finish();
    yr.finish();
    auto px = [&](double v) { return ox + left + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double v) { return oy + top + (1.0 - (v - yr.lo) / (yr.hi - yr.lo)) * ph; };

    std::string out;
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
                       ox + w / 2, oy + 18, escape(plot.title));
    out += fmt::format(
        "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" stroke=\"#444\"/>\n",
        ox + left, oy + top, pw, ph);
    for (int i = 0; i <= 4; ++i) {
        const double yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
        const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"10\" text-anchor=\"end\">{}</text>\n",
                           ox + left - 4, py(yv) + 3, tick_label(yv));
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"10\" text-anchor=\"middle\">{}</text>\n",
                           px(xv), oy + top + ph + 14, tick_label(xv));
    }
    if (yr.lo < 0 && yr.hi > 0)
        out += fmt::format(
            "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#bbb\" stroke-dasharray=\"3,3\"/>\n",
            ox + left, py(0), ox + left + pw, py(0));
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
                       ox + left + pw / 2, oy + h - 8, escape(plot.x_label));
    out += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"11\" text-anchor=\"middle\" "
        "transform=\"rotate(-90 {:.1f} {:.1f})\">{}</text>\n",
        ox + 12, oy + top + ph / 2, ox + 12, oy + top + ph / 2, escape(plot.y_label));

    for (const auto& s : plot.series) {
        if (!s.lower.empty() && s.lower.size() == s.x.size() && s.upper.size() == s.x.size() && !s.x.empty()) {
            std::string pts;
            for (std::size_t i = 0; i < s.x.size(); ++i) pts += fmt::format("{:.1f},{:.1f} ", px(s.x[i]), py(s.upper[i]));
            for (std::size_t i = s.x.size(); i-- > 0;) pts += fmt::format("{:.1f},{:.1f} ", px(s.x[i]), py(s.lower[i]));
            out += fmt::format("<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.2\" stroke=\"none\"/>\n", pts,
                               s.color);
        }
        std::string pts;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
            pts += fmt::format("{:.1f},{:.1f} ", px(s.x[i]), py(s.y[i]));
        out += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n", pts,
                           s.color);
    }
    if (legend) {
        double ly = oy + top + 12;
        for (const auto& s : plot.series) {
            out += fmt::format(
                "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                ox + left + 8, ly, ox + left + 24, ly, s.color);
            out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"10\">{}</text>\n", ox + left + 28, ly + 3,
                               escape(s.name));
            ly += 14;
        }
    }
    return out;
}

std::string header(int width, int height) {
    return fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\">\n<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
        width, height);
}

}  // namespace

std::string render_line_plot(const LinePlot& plot, int width, int height) {
    return header(width, height) + plot_body(plot, 0, 0, width, height, true) + "</svg>\n";
}

std::string render_panels(std::span<const LinePlot> panels, int columns, int panel_width, int panel_height,
                          const std::string& title) {
    columns = std::max(1, columns);
    const int rows = static_cast<int>((panels.size() + static_cast<std::size_t>(columns) - 1) / static_cast<std::size_t>(columns));
    const int offset = title.empty() ? 0 : 30;
    const int width = columns * panel_width, height = rows * panel_height + offset;
    std::string out = header(width, height);
    if (!title.empty())
        out += fmt::format("<text x=\"{}\" y=\"20\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n", width / 2,
                           escape(title));
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const auto r = static_cast<int>(i) / columns, c = static_cast<int>(i) % columns;
        out += plot_body(panels[i], c * panel_width, offset + r * panel_height, panel_width, panel_height, i == 0);
    }
    return out + "</svg>\n";
}

}  // namespace govmine::pipeline
