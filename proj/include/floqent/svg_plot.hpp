// Minimal static SVG line plots and heatmaps.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace floqent::plot {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color;   // empty: taken from the default cycle
    bool dashed{false};
};

struct LinePlot {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool log_x{false};
    std::optional<std::pair<double, double>> y_range;
    std::vector<Series> series;
};

/// z is stored row by row: z[iy * x.size() + ix]. NaN cells are drawn grey.
struct Heatmap {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::string zlabel;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> z;
    bool log_x{false};
    double zmin{0.0};
    double zmax{1.0};
};

std::string render(const LinePlot& plot);
std::string render(const Heatmap& map);

/// Viridis-like colour for t in [0, 1], as "#rrggbb".
std::string colormap(double t);

void write_file(const std::string& path, const std::string& text);

} // namespace floqent::plot
