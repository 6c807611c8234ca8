#include "gou/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "gou/errors.hpp"

namespace gou {

namespace {

constexpr double kWidth = 640.0, kHeight = 440.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Axis {
    double lo = 0.0, hi = 1.0;

    void expand(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (hi <= lo) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double m = 0.05 * (hi - lo);
        lo -= m;
        hi += m;
    }
};

std::vector<double> ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * mult >= raw) {
            step = mag * mult;
            break;
        }
    }
    std::vector<double> out;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step)
        out.push_back(v == 0.0 ? 0.0 : v);
    return out;
}

} // namespace

std::string render_line_chart(const PlotSpec& spec) {
    bool any = false;
    for (const auto& s : spec.series)
        if (!s.x.empty()) any = true;
    if (!any)
        throw Error(ErrorCode::MissingInput,
                    "render_line_chart: no data series to plot");

    Axis ax{std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};
    Axis ay = ax;
    for (const auto& s : spec.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            ax.expand(s.x[i]);
            ay.expand(s.y[i]);
        }
    for (double h : spec.h_lines) ay.expand(h);
    ax.pad();
    ay.pad();

    const double px = (kWidth - kLeft - kRight) / (ax.hi - ax.lo);
    const double py = (kHeight - kTop - kBottom) / (ay.hi - ay.lo);
    auto X = [&](double v) { return kLeft + (v - ax.lo) * px; };
    auto Y = [&](double v) { return kHeight - kBottom - (v - ay.lo) * py; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">" << spec.title
      << "</text>\n";

    for (double v : ticks(ax.lo, ax.hi)) {
        const double xx = X(v);
        o << "<line x1=\"" << num(xx) << "\" y1=\"" << num(kHeight - kBottom)
          << "\" x2=\"" << num(xx) << "\" y2=\"" << num(kTop)
          << "\" stroke=\"#e0e0e0\"/>\n";
        o << "<text x=\"" << num(xx) << "\" y=\"" << num(kHeight - kBottom + 18)
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"11\">" << num(v) << "</text>\n";
    }
    for (double v : ticks(ay.lo, ay.hi)) {
        const double yy = Y(v);
        o << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(yy) << "\" x2=\""
          << num(kWidth - kRight) << "\" y2=\"" << num(yy)
          << "\" stroke=\"#e0e0e0\"/>\n";
        o << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(yy + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"11\">" << num(v) << "</text>\n";
    }
    o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << kWidth - kLeft - kRight << "\" height=\"" << kHeight - kTop - kBottom
      << "\" fill=\"none\" stroke=\"#404040\"/>\n";
    o << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">" << spec.x_label << "</text>\n";
    o << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 " << kHeight / 2 << ")\">" << spec.y_label
      << "</text>\n";

    for (double h : spec.h_lines)
        o << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(Y(h)) << "\" x2=\""
          << num(kWidth - kRight) << "\" y2=\"" << num(Y(h))
          << "\" stroke=\"#888888\" stroke-dasharray=\"6,4\"/>\n";

    double legend_y = kTop + 14.0;
    for (const auto& s : spec.series) {
        if (s.x.empty()) continue;
        o << "<polyline fill=\"none\" stroke=\"" << s.color
          << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) o << " ";
            o << num(X(s.x[i])) << "," << num(Y(s.y[i]));
        }
        o << "\"/>\n";
        if (s.points)
            for (std::size_t i = 0; i < s.x.size(); ++i)
                o << "<circle cx=\"" << num(X(s.x[i])) << "\" cy=\""
                  << num(Y(s.y[i])) << "\" r=\"3\" fill=\"" << s.color
                  << "\"/>\n";
        if (!s.label.empty()) {
            o << "<text x=\"" << num(kWidth - kRight - 8) << "\" y=\""
              << num(legend_y) << "\" text-anchor=\"end\" "
                 "font-family=\"sans-serif\" font-size=\"11\" fill=\"" << s.color
              << "\">" << s.label << "</text>\n";
            legend_y += 14.0;
        }
    }
    o << "</svg>\n";
    return o.str();
}

} // namespace gou
