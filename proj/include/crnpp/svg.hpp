#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace crnpp {

// Minimal SVG emission for trace plots and error heatmaps. No external
// dependencies; output is a standalone file.

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

namespace svgdetail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline const char* palette(std::size_t i) {
    static const char* colors[] = {"#d95f02", "#1b9e77", "#d02828", "#7570b3",
                                   "#e7298a", "#66a61e", "#e6ab02", "#666666"};
    return colors[i % 8];
}

struct Range {
    double lo = 0.0, hi = 1.0;

    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double span() const { return hi - lo > 0 ? hi - lo : 1.0; }
};

}  // namespace svgdetail

inline std::string svg_line_chart(const std::string& title, const std::vector<SvgSeries>& series,
                                  const std::string& x_label = "time",
                                  const std::string& y_label = "concentration", int width = 900,
                                  int height = 480) {
    using svgdetail::num;
    const double ml = 70, mr = 150, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    svgdetail::Range xr, yr;
    bool any = false;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!any) {
                xr = {s.x[i], s.x[i]};
                yr = {s.y[i], s.y[i]};
                any = true;
            }
            xr.include(s.x[i]);
            yr.include(s.y[i]);
        }
    if (yr.lo > 0) yr.lo = 0;

    auto px = [&](double x) { return ml + (x - xr.lo) / xr.span() * pw; };
    auto py = [&](double y) { return mt + ph - (y - yr.lo) / yr.span() * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + num(width / 2.0) + "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" + title + "</text>\n";

    // axes + ticks
    out += "<g stroke=\"#333\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt + ph) + "\" x2=\"" + num(ml + pw) +
           "\" y2=\"" + num(mt + ph) + "\"/>\n";
    out += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(ml) + "\" y2=\"" +
           num(mt + ph) + "\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        double fx = xr.lo + xr.span() * i / 5.0;
        double fy = yr.lo + yr.span() * i / 5.0;
        out += "<line x1=\"" + num(px(fx)) + "\" y1=\"" + num(mt + ph) + "\" x2=\"" + num(px(fx)) +
               "\" y2=\"" + num(mt + ph + 5) + "\"/>\n";
        out += "<text stroke=\"none\" x=\"" + num(px(fx)) + "\" y=\"" + num(mt + ph + 18) +
               "\" text-anchor=\"middle\">" + num(fx) + "</text>\n";
        out += "<line x1=\"" + num(ml - 5) + "\" y1=\"" + num(py(fy)) + "\" x2=\"" + num(ml) +
               "\" y2=\"" + num(py(fy)) + "\"/>\n";
        out += "<text stroke=\"none\" x=\"" + num(ml - 8) + "\" y=\"" + num(py(fy) + 4) +
               "\" text-anchor=\"end\">" + num(fy) + "</text>\n";
    }
    out += "<text stroke=\"none\" x=\"" + num(ml + pw / 2) + "\" y=\"" + num(height - 10.0) +
           "\" text-anchor=\"middle\">" + x_label + "</text>\n";
    out += "<text stroke=\"none\" x=\"16\" y=\"" + num(mt + ph / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + num(mt + ph / 2) + ")\">" +
           y_label + "</text>\n";
    out += "</g>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i)
            pts += num(px(s.x[i])) + "," + num(py(s.y[i])) + " ";
        out += "<polyline fill=\"none\" stroke=\"" + std::string(svgdetail::palette(si)) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        double ly = mt + 16.0 * (si + 1);
        out += "<line x1=\"" + num(ml + pw + 10) + "\" y1=\"" + num(ly) + "\" x2=\"" +
               num(ml + pw + 34) + "\" y2=\"" + num(ly) + "\" stroke=\"" +
               svgdetail::palette(si) + "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + num(ml + pw + 40) + "\" y=\"" + num(ly + 4) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + s.label + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

inline std::string svg_heatmap(const std::string& title, const std::vector<double>& a_values,
                               const std::vector<double>& b_values,
                               const std::vector<std::vector<double>>& cell, int width = 640,
                               int height = 600) {
    using svgdetail::num;
    const double ml = 70, mr = 30, mt = 50, mb = 60;
    const double pw = width - ml - mr, ph = height - mt - mb;
    double vmax = 0.0;
    for (const auto& row : cell)
        for (double v : row) vmax = std::max(vmax, v);
    if (vmax <= 0) vmax = 1.0;

    auto shade = [&](double v) {
        double f = std::clamp(v / vmax, 0.0, 1.0);
        // white -> orange -> dark red ramp
        int r = static_cast<int>(255 - 80 * f);
        int g = static_cast<int>(245 - 200 * f);
        int b = static_cast<int>(235 - 215 * f);
        char buf[16];
        std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
        return std::string(buf);
    };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + num(width / 2.0) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" + title + " (max " + num(vmax) +
           ")</text>\n";

    double cw = pw / b_values.size(), ch = ph / a_values.size();
    for (std::size_t ai = 0; ai < a_values.size(); ++ai)
        for (std::size_t bi = 0; bi < b_values.size(); ++bi) {
            // a on the vertical axis, increasing upward
            double x = ml + bi * cw;
            double y = mt + ph - (ai + 1) * ch;
            out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cw + 0.5) +
                   "\" height=\"" + num(ch + 0.5) + "\" fill=\"" + shade(cell[ai][bi]) + "\"/>\n";
        }

    out += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    std::size_t stride_b = std::max<std::size_t>(1, b_values.size() / 8);
    for (std::size_t bi = 0; bi < b_values.size(); bi += stride_b)
        out += "<text x=\"" + num(ml + (bi + 0.5) * cw) + "\" y=\"" + num(mt + ph + 16) +
               "\" text-anchor=\"middle\">" + num(b_values[bi]) + "</text>\n";
    std::size_t stride_a = std::max<std::size_t>(1, a_values.size() / 8);
    for (std::size_t ai = 0; ai < a_values.size(); ai += stride_a)
        out += "<text x=\"" + num(ml - 8) + "\" y=\"" + num(mt + ph - (ai + 0.5) * ch + 4) +
               "\" text-anchor=\"end\">" + num(a_values[ai]) + "</text>\n";
    out += "<text x=\"" + num(ml + pw / 2) + "\" y=\"" + num(height - 16.0) +
           "\" text-anchor=\"middle\">b</text>\n";
    out += "<text x=\"20\" y=\"" + num(mt + ph / 2) + "\" text-anchor=\"middle\">a</text>\n";
    out += "</g>\n</svg>\n";
    return out;
}

}  // namespace crnpp
