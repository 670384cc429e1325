#include "tilesift/svg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tilesift/util.hpp"

namespace tilesift {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 36;
constexpr int kMarginBottom = 48;

std::string xml_escape(const std::string& s) {
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

struct Mapper {
    double x_min, x_max, y_min, y_max;

    double px(double x) const {
        double span = x_max - x_min;
        double t = span == 0.0 ? 0.5 : (x - x_min) / span;
        return kMarginLeft + t * (kWidth - kMarginLeft - kMarginRight);
    }
    double py(double y) const {
        double span = y_max - y_min;
        double t = span == 0.0 ? 0.5 : (y - y_min) / span;
        return kHeight - kMarginBottom - t * (kHeight - kMarginTop - kMarginBottom);
    }
};

std::string header() {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(kWidth) + "\" height=\"" + std::to_string(kHeight) +
           "\" viewBox=\"0 0 " + std::to_string(kWidth) + " " +
           std::to_string(kHeight) + "\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void axes(std::string& out, const Mapper& m, const std::string& x_label,
          const std::string& y_label, const std::string& title) {
    double x0 = m.px(m.x_min), x1 = m.px(m.x_max);
    double y0 = m.py(m.y_min), y1 = m.py(m.y_max);
    out += "<line x1=\"" + fmt_fixed(x0, 1) + "\" y1=\"" + fmt_fixed(y0, 1) +
           "\" x2=\"" + fmt_fixed(x1, 1) + "\" y2=\"" + fmt_fixed(y0, 1) +
           "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + fmt_fixed(x0, 1) + "\" y1=\"" + fmt_fixed(y0, 1) +
           "\" x2=\"" + fmt_fixed(x0, 1) + "\" y2=\"" + fmt_fixed(y1, 1) +
           "\" stroke=\"black\"/>\n";

    // Endpoint tick labels only; enough to read the range off the plot.
    out += "<text x=\"" + fmt_fixed(x0, 1) + "\" y=\"" +
           fmt_fixed(y0 + 16, 1) + "\" font-size=\"11\" text-anchor=\"middle\">" +
           fmt_fixed(m.x_min, 2) + "</text>\n";
    out += "<text x=\"" + fmt_fixed(x1, 1) + "\" y=\"" +
           fmt_fixed(y0 + 16, 1) + "\" font-size=\"11\" text-anchor=\"middle\">" +
           fmt_fixed(m.x_max, 2) + "</text>\n";
    out += "<text x=\"" + fmt_fixed(x0 - 6, 1) + "\" y=\"" +
           fmt_fixed(y0 + 4, 1) + "\" font-size=\"11\" text-anchor=\"end\">" +
           fmt_fixed(m.y_min, 2) + "</text>\n";
    out += "<text x=\"" + fmt_fixed(x0 - 6, 1) + "\" y=\"" +
           fmt_fixed(y1 + 4, 1) + "\" font-size=\"11\" text-anchor=\"end\">" +
           fmt_fixed(m.y_max, 2) + "</text>\n";

    out += "<text x=\"" + fmt_fixed((x0 + x1) / 2, 1) + "\" y=\"" +
           std::to_string(kHeight - 12) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + xml_escape(x_label) +
           "</text>\n";
    out += "<text x=\"16\" y=\"" + fmt_fixed((y0 + y1) / 2, 1) +
           "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           fmt_fixed((y0 + y1) / 2, 1) + ")\">" + xml_escape(y_label) + "</text>\n";
    if (!title.empty()) {
        out += "<text x=\"" + std::to_string(kWidth / 2) +
               "\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">" +
               xml_escape(title) + "</text>\n";
    }
}

}  // namespace

std::string svg_histogram(const HistogramPlot& plot) {
    std::size_t n = plot.count.size();
    if (n == 0 || plot.bin_low.size() != n || plot.bin_high.size() != n) {
        throw std::invalid_argument("svg_histogram: misaligned or empty bins");
    }
    Mapper m;
    m.x_min = plot.bin_low.front();
    m.x_max = plot.bin_high.back();
    m.y_min = 0.0;
    m.y_max = *std::max_element(plot.count.begin(), plot.count.end());
    if (m.y_max <= 0.0) m.y_max = 1.0;

    std::string out = header();
    for (std::size_t i = 0; i < n; ++i) {
        double x = m.px(plot.bin_low[i]);
        double w = m.px(plot.bin_high[i]) - x;
        double y = m.py(plot.count[i]);
        double h = m.py(0.0) - y;
        if (h <= 0.0) continue;
        out += "<rect x=\"" + fmt_fixed(x, 2) + "\" y=\"" + fmt_fixed(y, 2) +
               "\" width=\"" + fmt_fixed(w, 2) + "\" height=\"" + fmt_fixed(h, 2) +
               "\" fill=\"#4878a8\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
    }
    if (plot.marker && *plot.marker >= m.x_min && *plot.marker <= m.x_max) {
        double x = m.px(*plot.marker);
        out += "<line x1=\"" + fmt_fixed(x, 2) + "\" y1=\"" +
               fmt_fixed(m.py(m.y_min), 2) + "\" x2=\"" + fmt_fixed(x, 2) +
               "\" y2=\"" + fmt_fixed(m.py(m.y_max), 2) +
               "\" stroke=\"#c0392b\" stroke-dasharray=\"5,3\"/>\n";
        out += "<text x=\"" + fmt_fixed(x + 4, 2) + "\" y=\"" +
               fmt_fixed(m.py(m.y_max) + 12, 2) +
               "\" font-size=\"11\" fill=\"#c0392b\">" + fmt_fixed(*plot.marker, 3) +
               "</text>\n";
    }
    axes(out, m, plot.x_label, plot.y_label, plot.title);
    out += "</svg>\n";
    return out;
}

std::string svg_line_chart(const LineChart& chart) {
    std::size_t n = chart.x.size();
    if (n == 0 || chart.y.size() != n) {
        throw std::invalid_argument("svg_line_chart: misaligned or empty series");
    }
    Mapper m;
    m.x_min = *std::min_element(chart.x.begin(), chart.x.end());
    m.x_max = *std::max_element(chart.x.begin(), chart.x.end());
    m.y_min = *std::min_element(chart.y.begin(), chart.y.end());
    m.y_max = *std::max_element(chart.y.begin(), chart.y.end());
    if (m.y_min == m.y_max) {
        m.y_min -= 0.5;
        m.y_max += 0.5;
    }

    std::string out = header();
    std::string points;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) points += ' ';
        points += fmt_fixed(m.px(chart.x[i]), 2) + "," + fmt_fixed(m.py(chart.y[i]), 2);
    }
    out += "<polyline points=\"" + points +
           "\" fill=\"none\" stroke=\"#4878a8\" stroke-width=\"1.5\"/>\n";
    for (std::size_t i = 0; i < n; ++i) {
        out += "<circle cx=\"" + fmt_fixed(m.px(chart.x[i]), 2) + "\" cy=\"" +
               fmt_fixed(m.py(chart.y[i]), 2) + "\" r=\"2.5\" fill=\"#4878a8\"/>\n";
    }
    if (chart.annotate_peak) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (chart.y[i] > chart.y[best]) best = i;
        }
        double cx = m.px(chart.x[best]);
        double cy = m.py(chart.y[best]);
        out += "<circle cx=\"" + fmt_fixed(cx, 2) + "\" cy=\"" + fmt_fixed(cy, 2) +
               "\" r=\"4\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>\n";
        out += "<text x=\"" + fmt_fixed(cx, 2) + "\" y=\"" + fmt_fixed(cy - 8, 2) +
               "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#c0392b\">" +
               fmt_fixed(chart.x[best], 0) + ": " + fmt_fixed(chart.y[best], 4) +
               "</text>\n";
    }
    axes(out, m, chart.x_label, chart.y_label, chart.title);
    out += "</svg>\n";
    return out;
}

}  // namespace tilesift
