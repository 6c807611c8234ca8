#ifndef GOU_SVG_HPP
#define GOU_SVG_HPP

#include <string>
#include <vector>

namespace gou {

struct PlotSeries {
    std::vector<double> x, y;
    std::string color = "#1f6fb2";
    std::string label;
    bool points = false;  // draw markers as well as the line
};

struct PlotSpec {
    std::string title;
    std::string x_label, y_label;
    std::vector<PlotSeries> series;
    std::vector<double> h_lines;  // horizontal reference levels
};

/// Renders a fixed-size line chart. Output depends only on the input values
/// (stable number formatting, no timestamps), so reruns are byte-identical.
/// Throws MissingInput when no series has data.
std::string render_line_chart(const PlotSpec& spec);

} // namespace gou

#endif
