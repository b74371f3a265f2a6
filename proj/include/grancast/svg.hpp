#ifndef GRANCAST_SVG_HPP
#define GRANCAST_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace grancast {

struct Trace {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct PlotBounds {
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;
};

/// Data extent padded by 5% of the range on each side; a zero range pads by
/// max(|v|, 1) * 5% so flat traces stay visible.
inline PlotBounds plot_bounds(const std::vector<Trace>& traces) {
    if (traces.empty()) throw std::invalid_argument("plot_bounds: no traces");
    double x_lo = traces[0].points.at(0).first, x_hi = x_lo;
    double y_lo = traces[0].points.at(0).second, y_hi = y_lo;
    for (const auto& t : traces) {
        if (t.points.size() < 2) throw std::invalid_argument("plot: every trace needs at least 2 points");
        for (const auto& [x, y] : t.points) {
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    }
    const auto pad = [](double lo, double hi) {
        const double range = hi - lo;
        return range > 0.0 ? 0.05 * range : 0.05 * std::max(std::fabs(hi), 1.0);
    };
    const double px = pad(x_lo, x_hi);
    const double py = pad(y_lo, y_hi);
    return {x_lo - px, x_hi + px, y_lo - py, y_hi + py};
}

namespace detail {

inline std::string fmt2(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string fmt_tick(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace detail

/// Self-contained deterministic SVG line chart: axes, one polyline per trace,
/// and a legend. Identical input yields identical bytes.
inline std::string render_plot(const std::vector<Trace>& traces, const std::string& title = "") {
    const PlotBounds b = plot_bounds(traces);
    const double width = 800.0, height = 480.0;
    const double ml = 70.0, mr = 20.0, mt = title.empty() ? 20.0 : 40.0, mb = 45.0;
    const double pw = width - ml - mr, ph = height - mt - mb;
    const auto sx = [&](double x) { return ml + (x - b.x_min) / (b.x_max - b.x_min) * pw; };
    const auto sy = [&](double y) { return mt + ph - (y - b.y_min) / (b.y_max - b.y_min) * ph; };

    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                     "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"480\" "
         "viewBox=\"0 0 800 480\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"480\" fill=\"#ffffff\"/>\n";
    if (!title.empty())
        s += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"16\">" + title + "</text>\n";

    // Axes and ticks.
    s += "<line x1=\"" + detail::fmt2(ml) + "\" y1=\"" + detail::fmt2(mt) + "\" x2=\"" +
         detail::fmt2(ml) + "\" y2=\"" + detail::fmt2(mt + ph) + "\" stroke=\"#000000\"/>\n";
    s += "<line x1=\"" + detail::fmt2(ml) + "\" y1=\"" + detail::fmt2(mt + ph) + "\" x2=\"" +
         detail::fmt2(ml + pw) + "\" y2=\"" + detail::fmt2(mt + ph) + "\" stroke=\"#000000\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = b.x_min + (b.x_max - b.x_min) * i / 4.0;
        const double fy = b.y_min + (b.y_max - b.y_min) * i / 4.0;
        s += "<text x=\"" + detail::fmt2(sx(fx)) + "\" y=\"" + detail::fmt2(mt + ph + 18.0) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
             detail::fmt_tick(fx) + "</text>\n";
        s += "<text x=\"" + detail::fmt2(ml - 6.0) + "\" y=\"" + detail::fmt2(sy(fy) + 4.0) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
             detail::fmt_tick(fy) + "</text>\n";
        s += "<line x1=\"" + detail::fmt2(ml) + "\" y1=\"" + detail::fmt2(sy(fy)) + "\" x2=\"" +
             detail::fmt2(ml + pw) + "\" y2=\"" + detail::fmt2(sy(fy)) +
             "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    }

    for (std::size_t k = 0; k < traces.size(); ++k) {
        const char* color = kPalette[k % 8];
        s += "<polyline fill=\"none\" stroke=\"";
        s += color;
        s += "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < traces[k].points.size(); ++i) {
            if (i) s += ' ';
            s += detail::fmt2(sx(traces[k].points[i].first));
            s += ',';
            s += detail::fmt2(sy(traces[k].points[i].second));
        }
        s += "\"/>\n";
    }

    // Legend.
    for (std::size_t k = 0; k < traces.size(); ++k) {
        const double ly = mt + 14.0 + 16.0 * static_cast<double>(k);
        s += "<line x1=\"" + detail::fmt2(ml + pw - 150.0) + "\" y1=\"" + detail::fmt2(ly - 4.0) +
             "\" x2=\"" + detail::fmt2(ml + pw - 126.0) + "\" y2=\"" + detail::fmt2(ly - 4.0) +
             "\" stroke=\"";
        s += kPalette[k % 8];
        s += "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + detail::fmt2(ml + pw - 120.0) + "\" y=\"" + detail::fmt2(ly) +
             "\" font-family=\"sans-serif\" font-size=\"12\">" + traces[k].label + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace grancast

#endif
