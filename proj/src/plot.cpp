#include "srsa/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace srsa {

std::string gnuplot_script(const GnuplotPanel& panel) {
    std::string s;
    s += "set datafile separator ','\n";
    s += "set terminal pngcairo size 900,600\n";
    s += fmt::format("set output '{}.png'\n", panel.name);
    s += fmt::format("set title \"{}\"\n", panel.title);
    s += fmt::format("set xlabel \"{}\"\n", panel.xlabel);
    s += fmt::format("set ylabel \"{}\"\n", panel.ylabel);
    s += "set key top right\nset grid\n";
    s += "plot ";
    for (std::size_t i = 0; i < panel.curves.size(); ++i) {
        const auto& c = panel.curves[i];
        s += fmt::format("{}'{}' every ::1 using {} with {} title \"{}\"", i ? ", \\\n     " : "", c.data_file,
                         c.using_expr, c.style, c.title);
    }
    s += "\n";
    return s;
}

namespace {

std::string escape(const std::string& in) {
    std::string out;
    for (char ch : in) {
        switch (ch) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += ch;
        }
    }
    return out;
}

// Ticks at 1, 2 or 5 times a power of ten.
std::vector<double> ticks(double lo, double hi) {
    const double span = hi - lo;
    if (!(span > 0)) return {lo};
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) out.push_back(t);
    return out;
}

} // namespace

std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<SvgSeries>& series) {
    constexpr double W = 800, H = 500, ml = 90, mr = 20, mt = 40, mb = 60;
    constexpr std::array<const char*, 6> colors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };

    std::string s = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        W, H);
    s += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n", W / 2,
                     escape(title));
    s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", ml, mt,
                     W - ml - mr, H - mt - mb);
    for (double t : ticks(x0, x1))
        s += fmt::format("<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{:.4g}</text>\n", px(t), H - mb + 18, t);
    for (double t : ticks(y0, y1))
        s += fmt::format("<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{:.4g}</text>\n", ml - 6, py(t) + 4, t);
    if (y0 < 0 && y1 > 0)
        s += fmt::format("<line x1=\"{}\" x2=\"{}\" y1=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#999\" "
                         "stroke-dasharray=\"4 3\"/>\n",
                         ml, W - mr, py(0), py(0));
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", (ml + W - mr) / 2, H - 16,
                     escape(xlabel));
    s += fmt::format("<text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{}</text>\n",
                     (mt + H - mb) / 2, (mt + H - mb) / 2, escape(ylabel));
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& ser = series[k];
        const char* color = colors[k % colors.size()];
        s += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"", color);
        for (std::size_t i = 0; i < ser.x.size(); ++i) {
            if (!std::isfinite(ser.x[i]) || !std::isfinite(ser.y[i])) continue;
            s += fmt::format("{:.2f},{:.2f} ", px(ser.x[i]), py(ser.y[i]));
        }
        s += "\"/>\n";
        s += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", W - mr - 150, mt + 18 + 16 * k, color,
                         escape(ser.label));
    }
    s += "</svg>\n";
    return s;
}

} // namespace srsa
