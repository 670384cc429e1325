#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tilesift {

// Self-contained SVG emitters (no external assets, no timestamps), so
// regenerated plots are byte-identical for identical inputs.

struct HistogramPlot {
    std::vector<double> bin_low;
    std::vector<double> bin_high;
    std::vector<double> count;
    std::optional<double> marker;  // vertical reference line (image entropy)
    std::string x_label = "bits";
    std::string y_label = "count";
    std::string title;
};

struct LineChart {
    std::vector<double> x;
    std::vector<double> y;
    bool annotate_peak = true;
    std::string x_label = "x";
    std::string y_label = "y";
    std::string title;
};

std::string svg_histogram(const HistogramPlot& plot);
std::string svg_line_chart(const LineChart& chart);

}  // namespace tilesift
