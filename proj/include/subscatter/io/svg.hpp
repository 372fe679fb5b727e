#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "subscatter/errors.hpp"
#include "subscatter/io/csv.hpp"

namespace subscatter {

// One plotted series: x/y data plus a stroke style.
struct SvgSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f6fb2";
    bool dashed = false;
    bool markers = false;
};

struct PlotSpec {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    int width = 720;
    int height = 480;
};

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
    std::vector<double> ticks;
    if (!(hi > lo)) {
        ticks.push_back(lo);
        return ticks;
    }
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    }
    const double first = std::ceil(lo / step) * step;
    for (double t = first; t <= hi + 0.5 * step; t += step) ticks.push_back(t);
    return ticks;
}

}  // namespace detail

// Deterministic static line/scatter plot. Degenerate input produces a valid
// SVG with axes only.
inline std::string render_svg(const std::vector<SvgSeries>& series, const PlotSpec& spec) {
    const double ml = 70, mr = 20, mt = 36, mb = 48;
    const double pw = spec.width - ml - mr, ph = spec.height - mt - mb;
    double xlo = 0.0, xhi = 1.0, ylo = 0.0, yhi = 1.0;
    bool any = false;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (!any) {
                xlo = xhi = s.x[i];
                ylo = yhi = s.y[i];
                any = true;
            }
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
        }
    }
    if (!any) {
        xlo = ylo = 0.0;
        xhi = yhi = 1.0;
    }
    if (xhi == xlo) xhi = xlo + 1.0;
    if (yhi == ylo) yhi = ylo + 1.0;
    const double xpad = 0.03 * (xhi - xlo), ypad = 0.06 * (yhi - ylo);
    xlo -= xpad;
    xhi += xpad;
    ylo -= ypad;
    yhi += ypad;
    auto X = [&](double v) { return ml + (v - xlo) / (xhi - xlo) * pw; };
    auto Y = [&](double v) { return mt + ph - (v - ylo) / (yhi - ylo) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(spec.width) + "\" height=\"" + std::to_string(spec.height) +
           "\" viewBox=\"0 0 " + std::to_string(spec.width) + " " +
           std::to_string(spec.height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + detail::svg_num(ml + pw / 2) + "\" y=\"20\" font-size=\"15\" "
           "text-anchor=\"middle\" font-family=\"sans-serif\">" + spec.title + "</text>\n";

    for (double t : detail::nice_ticks(xlo + xpad, xhi - xpad)) {
        svg += "<line x1=\"" + detail::svg_num(X(t)) + "\" y1=\"" + detail::svg_num(mt) +
               "\" x2=\"" + detail::svg_num(X(t)) + "\" y2=\"" + detail::svg_num(mt + ph) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + detail::svg_num(X(t)) + "\" y=\"" +
               detail::svg_num(mt + ph + 16) +
               "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">" +
               format_value(t) + "</text>\n";
    }
    for (double t : detail::nice_ticks(ylo + ypad, yhi - ypad)) {
        svg += "<line x1=\"" + detail::svg_num(ml) + "\" y1=\"" + detail::svg_num(Y(t)) +
               "\" x2=\"" + detail::svg_num(ml + pw) + "\" y2=\"" + detail::svg_num(Y(t)) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + detail::svg_num(ml - 6) + "\" y=\"" +
               detail::svg_num(Y(t) + 4) +
               "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">" +
               format_value(t) + "</text>\n";
    }
    svg += "<rect x=\"" + detail::svg_num(ml) + "\" y=\"" + detail::svg_num(mt) +
           "\" width=\"" + detail::svg_num(pw) + "\" height=\"" + detail::svg_num(ph) +
           "\" fill=\"none\" stroke=\"#333333\"/>\n";
    svg += "<text x=\"" + detail::svg_num(ml + pw / 2) + "\" y=\"" +
           detail::svg_num(spec.height - 10.0) +
           "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">" +
           spec.xlabel + "</text>\n";
    svg += "<text x=\"16\" y=\"" + detail::svg_num(mt + ph / 2) +
           "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "transform=\"rotate(-90 16 " + detail::svg_num(mt + ph / 2) + ")\">" +
           spec.ylabel + "</text>\n";

    double legend_y = mt + 14;
    for (const auto& s : series) {
        std::string path;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            path += (path.empty() ? "M" : " L");
            path += detail::svg_num(X(s.x[i])) + " " + detail::svg_num(Y(s.y[i]));
        }
        if (!path.empty() && !s.markers) {
            svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + s.color +
                   "\" stroke-width=\"1.6\"" +
                   (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
        }
        if (s.markers) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                svg += "<circle cx=\"" + detail::svg_num(X(s.x[i])) + "\" cy=\"" +
                       detail::svg_num(Y(s.y[i])) + "\" r=\"2.6\" fill=\"none\" stroke=\"" +
                       s.color + "\"/>\n";
            }
        }
        if (!s.name.empty()) {
            svg += "<line x1=\"" + detail::svg_num(ml + pw - 150) + "\" y1=\"" +
                   detail::svg_num(legend_y - 4) + "\" x2=\"" +
                   detail::svg_num(ml + pw - 126) + "\" y2=\"" +
                   detail::svg_num(legend_y - 4) + "\" stroke=\"" + s.color +
                   "\" stroke-width=\"1.6\"" +
                   (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
            svg += "<text x=\"" + detail::svg_num(ml + pw - 120) + "\" y=\"" +
                   detail::svg_num(legend_y) +
                   "\" font-size=\"12\" font-family=\"sans-serif\">" + s.name + "</text>\n";
            legend_y += 16;
        }
    }
    svg += "</svg>\n";
    return svg;
}

// Plot selected columns of a CSV-style table against its first column.
inline std::string emit_svg(const CsvTable& table, const PlotSpec& spec,
                            const std::vector<std::string>& ycolumns) {
    std::vector<SvgSeries> series;
    const std::vector<std::string> palette = {"#1f6fb2", "#c23b22", "#2e8540",
                                              "#8031a7", "#b8860b"};
    for (std::size_t si = 0; si < ycolumns.size(); ++si) {
        std::size_t ci = table.columns.size();
        for (std::size_t i = 0; i < table.columns.size(); ++i)
            if (table.columns[i] == ycolumns[si]) ci = i;
        if (ci == table.columns.size())
            throw ConfigError("emit_svg: unknown column " + ycolumns[si]);
        SvgSeries s;
        s.name = ycolumns[si];
        s.color = palette[si % palette.size()];
        for (const auto& row : table.rows) {
            s.x.push_back(row[0]);
            s.y.push_back(row[ci]);
        }
        series.push_back(std::move(s));
    }
    return render_svg(series, spec);
}

}  // namespace subscatter
