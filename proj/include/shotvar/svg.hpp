#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shotvar/cltstats.hpp"
#include "shotvar/io.hpp"

namespace shotvar::svg {

struct FitLine {
    double slope = 0.0;
    double intercept = 0.0;
};

namespace detail {

inline std::string num(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

} // namespace detail

/// Deterministic scatter of (x, y) points with an optional fitted line.
/// Fixed 640x480 canvas, so outputs are byte-stable for golden tests.
inline std::string scatter_plot(const std::vector<std::pair<double, double>>& points,
                                std::optional<FitLine> fit, const std::string& x_label,
                                const std::string& y_label) {
    const double width = 640, height = 480;
    const double ml = 70, mr = 20, mt = 20, mb = 50;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (!points.empty()) {
        xmin = xmax = points[0].first;
        ymin = ymax = points[0].second;
        for (const auto& [x, y] : points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    double xpad = 0.05 * (xmax - xmin), ypad = 0.1 * (ymax - ymin);
    xmin -= xpad;
    xmax += xpad;
    ymin -= ypad;
    ymax += ypad;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto py = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * (height - mt - mb); };

    std::ostringstream out;
    out << "<?xml version='1.0' encoding='UTF-8'?>\n"
        << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "'>\n"
        << "<rect width='" << width << "' height='" << height << "' fill='white'/>\n";
    // axes
    out << "<line x1='" << ml << "' y1='" << height - mb << "' x2='" << width - mr << "' y2='"
        << height - mb << "' stroke='black'/>\n"
        << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << height - mb
        << "' stroke='black'/>\n";
    // ticks: 5 per axis
    for (int i = 0; i <= 4; ++i) {
        double x = xmin + (xmax - xmin) * i / 4.0;
        double y = ymin + (ymax - ymin) * i / 4.0;
        out << "<text x='" << px(x) << "' y='" << height - mb + 18
            << "' font-size='12' text-anchor='middle'>" << detail::num(x) << "</text>\n";
        out << "<text x='" << ml - 8 << "' y='" << py(y) + 4
            << "' font-size='12' text-anchor='end'>" << detail::num(y) << "</text>\n";
    }
    out << "<text x='" << (ml + width - mr) / 2 << "' y='" << height - 10
        << "' font-size='14' text-anchor='middle'>" << x_label << "</text>\n";
    out << "<text x='18' y='" << (mt + height - mb) / 2
        << "' font-size='14' text-anchor='middle' transform='rotate(-90 18 "
        << (mt + height - mb) / 2 << ")'>" << y_label << "</text>\n";
    if (fit) {
        double y1 = fit->slope * xmin + fit->intercept;
        double y2 = fit->slope * xmax + fit->intercept;
        out << "<line x1='" << px(xmin) << "' y1='" << py(y1) << "' x2='" << px(xmax) << "' y2='"
            << py(y2) << "' stroke='#d62728' stroke-width='1.5'/>\n";
    }
    for (const auto& [x, y] : points)
        out << "<circle cx='" << px(x) << "' cy='" << py(y) << "' r='4' fill='#1f77b4'/>\n";
    out << "</svg>\n";
    return out.str();
}

inline const char* color_hex(clt::Color c) {
    switch (c) {
        case clt::Color::Green: return "#2ca02c";
        case clt::Color::Yellow: return "#e6c229";
        case clt::Color::Black: return "#222222";
        case clt::Color::Red: return "#d62728";
        case clt::Color::Orange: return "#ff7f0e";
    }
    return "#888888";
}

/// Grid of colored cells (10 per row) labeled by id; the map rendering of a
/// comparison report.
inline std::string grid_map(const std::vector<std::pair<std::string, clt::Color>>& cells) {
    const int per_row = 10;
    const double cell = 48, pad = 6;
    int rows = (static_cast<int>(cells.size()) + per_row - 1) / per_row;
    double width = per_row * (cell + pad) + pad;
    double height = std::max(1, rows) * (cell + pad) + pad;
    std::ostringstream out;
    out << "<?xml version='1.0' encoding='UTF-8'?>\n"
        << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "'>\n"
        << "<rect width='" << width << "' height='" << height << "' fill='white'/>\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        double x = pad + static_cast<double>(i % per_row) * (cell + pad);
        double y = pad + static_cast<double>(i / per_row) * (cell + pad);
        out << "<rect x='" << x << "' y='" << y << "' width='" << cell << "' height='" << cell
            << "' fill='" << color_hex(cells[i].second) << "' stroke='black'/>\n";
        const char* text_fill = cells[i].second == clt::Color::Black ? "white" : "black";
        out << "<text x='" << x + cell / 2 << "' y='" << y + cell / 2 + 4
            << "' font-size='12' text-anchor='middle' fill='" << text_fill << "'>"
            << cells[i].first << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace shotvar::svg
