#include "causalkit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace causalkit {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
                          "#aec7e8", "#ffbb78"};

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string render_svg_chart(const std::string& title, const std::string& x_label,
                             const std::string& y_label, const std::vector<PlotSeries>& series) {
    constexpr double width = 720, height = 480;
    constexpr double left = 70, right = 200, top = 50, bottom = 55;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool any = false;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (!any) {
                xmin = xmax = x;
                ymin = ymax = y;
                any = true;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;

    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
    auto sy = [&](double y) { return top + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
       << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "  <text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\" "
          "font-family=\"sans-serif\">" << xml_escape(title) << "</text>\n";
    // axes
    os << "  <line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
       << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
    os << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
       << top + plot_h << "\" stroke=\"black\"/>\n";
    os << "  <text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
       << xml_escape(x_label) << "</text>\n";
    os << "  <text x=\"18\" y=\"" << top + plot_h / 2
       << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" transform=\"rotate(-90 18 "
       << top + plot_h / 2 << ")\">" << xml_escape(y_label) << "</text>\n";
    // min/max ticks
    os << "  <text x=\"" << left << "\" y=\"" << top + plot_h + 18
       << "\" text-anchor=\"middle\" font-size=\"10\" font-family=\"sans-serif\">" << fmt(xmin)
       << "</text>\n";
    os << "  <text x=\"" << left + plot_w << "\" y=\"" << top + plot_h + 18
       << "\" text-anchor=\"middle\" font-size=\"10\" font-family=\"sans-serif\">" << fmt(xmax)
       << "</text>\n";
    os << "  <text x=\"" << left - 8 << "\" y=\"" << top + plot_h + 4
       << "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\">" << fmt(ymin)
       << "</text>\n";
    os << "  <text x=\"" << left - 8 << "\" y=\"" << top + 4
       << "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\">" << fmt(ymax)
       << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        auto pts = series[s].points;
        std::sort(pts.begin(), pts.end());
        os << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : pts) os << fmt(sx(x)) << "," << fmt(sy(y)) << " ";
        os << "\"/>\n";
        for (auto [x, y] : pts)
            os << "  <circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y))
               << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        double ly = top + 14 + 16 * static_cast<double>(s);
        os << "  <rect x=\"" << left + plot_w + 14 << "\" y=\"" << ly - 9
           << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
        os << "  <text x=\"" << left + plot_w + 30 << "\" y=\"" << ly
           << "\" font-size=\"11\" font-family=\"sans-serif\">" << xml_escape(series[s].label)
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace causalkit
