#pragma once

#include <string>
#include <vector>

namespace swarmdoppler::svg {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string label;
    std::string color = "#1f77b4";
    bool dashed = false;
    bool markers = false;  // draw points instead of a polyline
};

struct Marker {
    double x = 0.0;
    std::string label;
    std::string color = "#888888";
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<Series> series;
    std::vector<Marker> vertical_lines;
    int width = 800;
    int height = 480;
};

/// Static SVG document. Output depends only on the input (no timestamps).
std::string render(const LinePlot& plot);

struct Heatmap {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;       // column centers, ascending
    std::vector<double> y;       // row centers, ascending
    std::vector<double> values;  // column-major: values[ix * y.size() + iy]
    double dynamic_range_db = 60.0;
    std::vector<double> horizontal_lines;
    int width = 800;
    int height = 480;
};

/// Values are shown in dB relative to the maximum, clipped at the dynamic range.
std::string render(const Heatmap& map);

}  // namespace swarmdoppler::svg
