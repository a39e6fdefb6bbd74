#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "moran/constructions.hpp"
#include "moran/spectrum.hpp"

namespace moran {

/// 12 significant digits, locale-independent.
inline std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// The pinned CSV layout: header
/// theta,upper,lower,upper_window2,lower_window2,converged
/// with 12-significant-digit values, LF line endings, no trailing whitespace.
inline std::string spectrum_csv(const SpectrumResult& result) {
    std::string out = "theta,upper,lower,upper_window2,lower_window2,converged\n";
    for (const SpectrumPoint& pt : result.points) {
        out += format_value(pt.theta);
        out += ',';
        out += format_value(pt.upper);
        out += ',';
        out += format_value(pt.lower);
        out += ',';
        out += format_value(pt.upper_window2);
        out += ',';
        out += format_value(pt.lower_window2);
        out += ',';
        out += pt.converged ? '1' : '0';
        out += '\n';
    }
    return out;
}

/// Static polyline chart of upper/lower against θ; overlays the closed form
/// when the spec is a Möbius construction.
inline std::string spectrum_svg(const SpectrumResult& result, const MobiusFamily* closed_form) {
    const double width = 640.0, height = 420.0;
    const double mleft = 60.0, mright = 20.0, mtop = 20.0, mbottom = 40.0;
    double y_lo = 1e300, y_hi = -1e300;
    for (const SpectrumPoint& pt : result.points) {
        y_lo = std::min({y_lo, pt.lower, pt.upper});
        y_hi = std::max({y_hi, pt.lower, pt.upper});
    }
    if (closed_form != nullptr) {
        y_lo = std::min({y_lo, closed_form->hausdorff()});
        y_hi = std::max({y_hi, closed_form->upper_box()});
    }
    double pad = std::max(1e-6, 0.08 * (y_hi - y_lo));
    y_lo -= pad;
    y_hi += pad;
    auto x_of = [&](double theta) { return mleft + theta * (width - mleft - mright); };
    auto y_of = [&](double v) {
        return height - mbottom - (v - y_lo) / (y_hi - y_lo) * (height - mtop - mbottom);
    };
    auto polyline = [&](const std::vector<std::pair<double, double>>& pts, const char* color,
                        const char* dash) {
        std::string s = "  <polyline fill=\"none\" stroke=\"";
        s += color;
        s += "\" stroke-width=\"1.5\"";
        if (dash[0] != '\0') s += std::string(" stroke-dasharray=\"") + dash + "\"";
        s += " points=\"";
        for (auto [x, y] : pts) s += format_value(x) + "," + format_value(y) + " ";
        if (!pts.empty()) s.pop_back();
        s += "\"/>\n";
        return s;
    };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
                      "viewBox=\"0 0 640 420\">\n";
    svg += "  <rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "  <line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", mleft,
                  height - mbottom, width - mright, height - mbottom);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "  <line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", mleft,
                  mtop, mleft, height - mbottom);
    svg += buf;
    for (int i = 0; i <= 4; ++i) {
        double theta = 0.25 * i;
        std::snprintf(buf, sizeof(buf),
                      "  <text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"middle\">%s</text>\n",
                      x_of(theta), height - mbottom + 16.0, format_value(theta).c_str());
        svg += buf;
        double v = y_lo + (y_hi - y_lo) * 0.25 * i;
        std::snprintf(buf, sizeof(buf),
                      "  <text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"end\">%.4f</text>\n",
                      mleft - 6.0, y_of(v) + 4.0, v);
        svg += buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "  <text x=\"%g\" y=\"%g\" font-size=\"12\" text-anchor=\"middle\">theta</text>\n",
                  (mleft + width - mright) / 2.0, height - 8.0);
    svg += buf;

    std::vector<std::pair<double, double>> upper_pts, lower_pts, form_pts;
    for (const SpectrumPoint& pt : result.points) {
        upper_pts.emplace_back(x_of(pt.theta), y_of(pt.upper));
        lower_pts.emplace_back(x_of(pt.theta), y_of(pt.lower));
    }
    if (closed_form != nullptr)
        for (int i = 0; i <= 200; ++i) {
            double theta = i / 200.0;
            form_pts.emplace_back(x_of(theta), y_of(closed_form_spectrum(*closed_form, theta)));
        }
    svg += polyline(upper_pts, "#c0392b", "");
    svg += polyline(lower_pts, "#2980b9", "");
    if (!form_pts.empty()) svg += polyline(form_pts, "#7f8c8d", "4 3");
    svg += "  <text x=\"540\" y=\"30\" font-size=\"11\" fill=\"#c0392b\">upper</text>\n";
    svg += "  <text x=\"540\" y=\"44\" font-size=\"11\" fill=\"#2980b9\">lower</text>\n";
    if (!form_pts.empty())
        svg += "  <text x=\"540\" y=\"58\" font-size=\"11\" fill=\"#7f8c8d\">closed form</text>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace moran
