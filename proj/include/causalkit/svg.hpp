#pragma once

#include <string>
#include <utility>
#include <vector>

namespace causalkit {

// One plotted series: a label and (x, y) points.
struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

// Minimal SVG 1.1 scatter/line chart: one polyline plus point markers per
// series, axes with min/max tick labels, and a legend.
std::string render_svg_chart(const std::string& title, const std::string& x_label,
                             const std::string& y_label, const std::vector<PlotSeries>& series);

}  // namespace causalkit
