// plot.hpp: gnuplot scripts over the CSV artifacts and self-contained SVG
// line plots.

#pragma once

#include <string>
#include <vector>

namespace srsa {

struct GnuplotCurve {
    std::string data_file;
    std::string using_expr;  // e.g. "($1*100):2"
    std::string title;
    std::string style{"lines"};
};

struct GnuplotPanel {
    std::string name;  // script is <name>.gp, renders <name>.png
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<GnuplotCurve> curves;
};

std::string gnuplot_script(const GnuplotPanel& panel);

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<SvgSeries>& series);

} // namespace srsa
