#pragma once

// Standalone SVG line plot with axes, tick labels and a marked maximum.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "cvrp_itp/errors.hpp"
#include "cvrp_itp/json_io.hpp"

namespace cvrp {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string title;
    std::string x_label = "x";
    std::string y_label = "y";
};

struct PlotSummary {
    std::size_t max_index = 0;
    double max_x = 0.0;
    double max_y = 0.0;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
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

inline std::string fixed(double v, int digits) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

}  // namespace detail

// First point wins ties.
inline PlotSummary series_maximum(const Series& s) {
    require(!s.x.empty() && s.x.size() == s.y.size(), "plot needs a non-empty series with |x| = |y|");
    PlotSummary p;
    for (std::size_t i = 1; i < s.y.size(); ++i)
        if (s.y[i] > s.y[p.max_index]) p.max_index = i;
    p.max_x = s.x[p.max_index];
    p.max_y = s.y[p.max_index];
    return p;
}

inline std::string render_svg(const Series& s) {
    const PlotSummary best = series_maximum(s);
    for (std::size_t i = 0; i < s.x.size(); ++i)
        require(std::isfinite(s.x[i]) && std::isfinite(s.y[i]), "plot values must be finite");

    constexpr double width = 720, height = 450;
    constexpr double left = 80, right = 30, top = 50, bottom = 60;
    const double pw = width - left - right, ph = height - top - bottom;

    auto [xmin_it, xmax_it] = std::minmax_element(s.x.begin(), s.x.end());
    auto [ymin_it, ymax_it] = std::minmax_element(s.y.begin(), s.y.end());
    double x0 = *xmin_it, x1 = *xmax_it, y0 = *ymin_it, y1 = *ymax_it;
    if (!(x1 > x0)) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if (!(y1 > y0)) {  // flat series sits in the middle
        const double pad = std::max(1e-12, std::abs(y0) * 0.1);
        y0 -= pad;
        y1 += pad;
    } else {
        const double pad = 0.05 * (y1 - y0);
        y0 -= pad;
        y1 += pad;
    }
    auto sx = [&](double v) { return left + (v - x0) / (x1 - x0) * pw; };
    auto sy = [&](double v) { return top + (1.0 - (v - y0) / (y1 - y0)) * ph; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
       << "\" fill=\"white\"/>\n";
    if (!s.title.empty())
        os << "  <text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           << "font-size=\"16\">" << detail::xml_escape(s.title) << "</text>\n";

    os << "  <g id=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
    os << "    <line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\""
       << top + ph << "\"/>\n";
    os << "    <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
       << "\"/>\n";
    os << "  </g>\n";
    os << "  <g id=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
    constexpr int kTicks = 5;
    for (int t = 0; t <= kTicks; ++t) {
        const double xv = x0 + (x1 - x0) * t / kTicks;
        const double yv = y0 + (y1 - y0) * t / kTicks;
        const double px = sx(xv), py = sy(yv);
        os << "    <line x1=\"" << px << "\" y1=\"" << top + ph << "\" x2=\"" << px << "\" y2=\""
           << top + ph + 5 << "\" stroke=\"black\"/>\n";
        os << "    <text x=\"" << px << "\" y=\"" << top + ph + 19 << "\" text-anchor=\"middle\">"
           << detail::fixed(xv, 3) << "</text>\n";
        os << "    <line x1=\"" << left - 5 << "\" y1=\"" << py << "\" x2=\"" << left << "\" y2=\"" << py
           << "\" stroke=\"black\"/>\n";
        os << "    <text x=\"" << left - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
           << detail::fixed(yv, 4) << "</text>\n";
    }
    os << "  </g>\n";
    os << "  <text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
       << detail::xml_escape(s.x_label) << "</text>\n";
    os << "  <text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"13\" transform=\"rotate(-90 18 " << top + ph / 2 << ")\">"
       << detail::xml_escape(s.y_label) << "</text>\n";

    os << "  <polyline id=\"series\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
        os << (i ? " " : "") << detail::fixed(sx(s.x[i]), 3) << ',' << detail::fixed(sy(s.y[i]), 3);
    os << "\"/>\n";

    const double mx = sx(best.max_x), my = sy(best.max_y);
    os << "  <g id=\"maximum\" data-index=\"" << best.max_index << "\" data-x=\""
       << format_double(best.max_x) << "\" data-y=\"" << format_double(best.max_y) << "\">\n";
    os << "    <circle cx=\"" << mx << "\" cy=\"" << my << "\" r=\"4\" fill=\"crimson\"/>\n";
    const bool flip = mx > left + 0.7 * pw;
    os << "    <text x=\"" << (flip ? mx - 8 : mx + 8) << "\" y=\"" << my - 8 << "\" text-anchor=\""
       << (flip ? "end" : "start") << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"crimson\">max "
       << detail::fixed(best.max_y, 6) << " at " << detail::fixed(best.max_x, 5) << "</text>\n";
    os << "  </g>\n";
    os << "</svg>\n";
    return os.str();
}

inline PlotSummary emit_plot(const Series& s, const std::string& out_path) {
    const PlotSummary p = series_maximum(s);
    write_text_file(out_path, render_svg(s));
    return p;
}

}  // namespace cvrp
