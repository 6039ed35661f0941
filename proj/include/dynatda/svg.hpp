#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "error.hpp"
#include "grid_function.hpp"

namespace dynatda {

struct HeatmapStyle {
    std::size_t cell = 6;  // pixels per cell
    std::string title;
};

/// Rect-per-cell heatmap of a 2-D slice: rows follow `row_axis` bottom-up,
/// columns follow `col_axis`. Eight-step monotone ramp; infinity is hatched,
/// cells outside the domain are left blank.
inline void write_heatmap_svg(std::ostream& os, const GridFunction& g, std::size_t row_axis, std::size_t col_axis,
                              std::vector<std::size_t> fixed, const HeatmapStyle& style = {}) {
    if (row_axis >= g.dim() || col_axis >= g.dim() || row_axis == col_axis || fixed.size() != g.dim())
        throw config_error("bad heatmap slice specification");
    static constexpr std::array<const char*, 8> ramp = {"#fff7ec", "#fee8c8", "#fdd49e", "#fdbb84",
                                                        "#fc8d59", "#ef6548", "#d7301f", "#990000"};
    const std::size_t rows = g.axes()[row_axis].count, cols = g.axes()[col_axis].count;
    std::uint32_t lo = ExtCount::infinity().value(), hi = 0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            fixed[row_axis] = r;
            fixed[col_axis] = c;
            if (!g.in_domain<std::size_t>(fixed)) continue;
            const ExtCount v = g.at(fixed);
            if (v.is_infinite()) continue;
            lo = std::min(lo, v.value());
            hi = std::max(hi, v.value());
        }
    const std::size_t px = style.cell, margin = 24;
    const std::size_t w = cols * px + 2 * margin, h = rows * px + 2 * margin;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
       << ' ' << h << "\">\n";
    os << "<defs><pattern id=\"hatch\" width=\"4\" height=\"4\" patternUnits=\"userSpaceOnUse\">"
          "<rect width=\"4\" height=\"4\" fill=\"#ffffff\"/><path d=\"M0,4 L4,0\" stroke=\"#333333\" "
          "stroke-width=\"1\"/></pattern></defs>\n";
    if (!style.title.empty())
        os << "<text x=\"" << margin << "\" y=\"16\" font-family=\"sans-serif\" font-size=\"12\">" << style.title
           << "</text>\n";
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            fixed[row_axis] = r;
            fixed[col_axis] = c;
            if (!g.in_domain<std::size_t>(fixed)) continue;
            const ExtCount v = g.at(fixed);
            std::string fill;
            if (v.is_infinite()) {
                fill = "url(#hatch)";
            } else {
                std::size_t b = hi > lo ? std::size_t(v.value() - lo) * 7 / std::size_t(hi - lo) : 0;
                fill = ramp[b];
            }
            os << "<rect x=\"" << margin + c * px << "\" y=\"" << margin + (rows - 1 - r) * px << "\" width=\"" << px
               << "\" height=\"" << px << "\" fill=\"" << fill << "\"><title>" << v << "</title></rect>\n";
        }
    os << "<text x=\"" << margin << "\" y=\"" << h - 6 << "\" font-family=\"sans-serif\" font-size=\"10\">"
       << g.axes()[col_axis].name << " &#8594;  (rows: " << g.axes()[row_axis].name << ", range " << lo << ".." << hi
       << ")</text>\n";
    os << "</svg>\n";
}

}  // namespace dynatda
