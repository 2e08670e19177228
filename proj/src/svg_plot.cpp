#include "floqent/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "floqent/errors.hpp"

namespace floqent::plot {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 40.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const std::array<const char*, 8> kCycle{"#1f77b4", "#d62728", "#2ca02c", "#000000",
                                        "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Range {
    double lo{0.0};
    double hi{1.0};
};

Range finite_range(const std::vector<double>& v, bool positive_only) {
    Range r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (double x : v) {
        if (!std::isfinite(x) || (positive_only && x <= 0.0)) continue;
        r.lo = std::min(r.lo, x);
        r.hi = std::max(r.hi, x);
    }
    if (!(r.lo <= r.hi)) return {positive_only ? 1.0 : 0.0, positive_only ? 10.0 : 1.0};
    if (r.lo == r.hi) {
        const double pad = r.lo == 0.0 ? 1.0 : 0.05 * std::abs(r.lo);
        r.lo -= positive_only ? 0.0 : pad;
        r.hi += pad;
    }
    return r;
}

// Roughly five round-valued ticks covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) {
        ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
    }
    return ticks;
}

struct Axes {
    Range x;
    Range y;
    bool log_x{false};
    double plot_w{kWidth - kLeft - kRight};
    double plot_h{kHeight - kTop - kBottom};

    double px(double v) const {
        const double t = log_x ? (std::log10(v) - std::log10(x.lo)) / (std::log10(x.hi) - std::log10(x.lo))
                               : (v - x.lo) / (x.hi - x.lo);
        return kLeft + t * plot_w;
    }
    double py(double v) const { return kTop + plot_h - (v - y.lo) / (y.hi - y.lo) * plot_h; }
};

void draw_frame(std::ostringstream& os, const Axes& ax, const std::string& title, const std::string& xlabel,
                const std::string& ylabel) {
    os << "<rect x='" << kLeft << "' y='" << kTop << "' width='" << ax.plot_w << "' height='" << ax.plot_h
       << "' fill='none' stroke='black'/>\n";
    if (ax.log_x) {
        for (int e = static_cast<int>(std::ceil(std::log10(ax.x.lo) - 1e-9));
             e <= static_cast<int>(std::floor(std::log10(ax.x.hi) + 1e-9)); ++e) {
            const double x = ax.px(std::pow(10.0, e));
            os << "<line x1='" << x << "' y1='" << kTop + ax.plot_h << "' x2='" << x << "' y2='" << kTop + ax.plot_h + 5
               << "' stroke='black'/>\n";
            os << "<text x='" << x << "' y='" << kTop + ax.plot_h + 20 << "' text-anchor='middle' font-size='12'>10"
               << "<tspan dy='-6' font-size='9'>" << e << "</tspan></text>\n";
        }
    } else {
        for (double t : linear_ticks(ax.x.lo, ax.x.hi)) {
            const double x = ax.px(t);
            os << "<line x1='" << x << "' y1='" << kTop + ax.plot_h << "' x2='" << x << "' y2='" << kTop + ax.plot_h + 5
               << "' stroke='black'/>\n";
            os << "<text x='" << x << "' y='" << kTop + ax.plot_h + 20 << "' text-anchor='middle' font-size='12'>"
               << fmt(t) << "</text>\n";
        }
    }
    for (double t : linear_ticks(ax.y.lo, ax.y.hi)) {
        const double y = ax.py(t);
        os << "<line x1='" << kLeft - 5 << "' y1='" << y << "' x2='" << kLeft << "' y2='" << y << "' stroke='black'/>\n";
        os << "<text x='" << kLeft - 8 << "' y='" << y + 4 << "' text-anchor='end' font-size='12'>" << fmt(t)
           << "</text>\n";
    }
    os << "<text x='" << kLeft + ax.plot_w / 2 << "' y='" << kHeight - 15
       << "' text-anchor='middle' font-size='14'>" << escape(xlabel) << "</text>\n";
    os << "<text x='20' y='" << kTop + ax.plot_h / 2 << "' text-anchor='middle' font-size='14' transform='rotate(-90 20 "
       << kTop + ax.plot_h / 2 << ")'>" << escape(ylabel) << "</text>\n";
    os << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' font-size='15'>" << escape(title) << "</text>\n";
}

std::string header(double width) {
    std::ostringstream os;
    os << "<?xml version='1.0' encoding='UTF-8'?>\n<svg xmlns='http://www.w3.org/2000/svg' width='" << width
       << "' height='" << kHeight << "' viewBox='0 0 " << width << ' ' << kHeight
       << "' font-family='sans-serif'>\n<rect width='100%' height='100%' fill='white'/>\n";
    return os.str();
}

} // namespace

std::string colormap(double t) {
    static const std::array<std::array<double, 3>, 6> anchors{{{0.267, 0.005, 0.329},
                                                              {0.254, 0.265, 0.530},
                                                              {0.164, 0.471, 0.558},
                                                              {0.134, 0.658, 0.518},
                                                              {0.478, 0.821, 0.318},
                                                              {0.993, 0.906, 0.144}}};
    if (!std::isfinite(t)) return "#bbbbbb";
    t = std::clamp(t, 0.0, 1.0) * (anchors.size() - 1);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), anchors.size() - 2);
    const double f = t - static_cast<double>(i);
    char buf[8];
    int rgb[3];
    for (int c = 0; c < 3; ++c) {
        rgb[c] = static_cast<int>(std::lround(255.0 * ((1.0 - f) * anchors[i][c] + f * anchors[i + 1][c])));
    }
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

std::string render(const LinePlot& plot) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& s : plot.series) {
        if (s.x.size() != s.y.size()) throw InvalidArgument("plot: series '" + s.label + "' has mismatched lengths");
        xs.insert(xs.end(), s.x.begin(), s.x.end());
        ys.insert(ys.end(), s.y.begin(), s.y.end());
    }
    Axes ax;
    ax.log_x = plot.log_x;
    ax.x = finite_range(xs, plot.log_x);
    if (plot.y_range) {
        ax.y = {plot.y_range->first, plot.y_range->second};
    } else {
        ax.y = finite_range(ys, false);
        const double pad = 0.05 * (ax.y.hi - ax.y.lo);
        ax.y.lo -= pad;
        ax.y.hi += pad;
    }

    std::ostringstream os;
    os << header(kWidth);
    draw_frame(os, ax, plot.title, plot.xlabel, plot.ylabel);
    os << "<clipPath id='frame'><rect x='" << kLeft << "' y='" << kTop << "' width='" << ax.plot_w << "' height='"
       << ax.plot_h << "'/></clipPath>\n";

    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const std::string color = s.color.empty() ? kCycle[k % kCycle.size()] : s.color;
        os << "<polyline clip-path='url(#frame)' fill='none' stroke='" << color << "' stroke-width='1.5'"
           << (s.dashed ? " stroke-dasharray='6,4'" : "") << " points='";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (plot.log_x && s.x[i] <= 0.0)) continue;
            os << ax.px(s.x[i]) << ',' << ax.py(s.y[i]) << ' ';
        }
        os << "'/>\n";
        const double ly = kTop + 16 + 18 * static_cast<double>(k);
        const double lx = kLeft + ax.plot_w - 150;
        os << "<line x1='" << lx << "' y1='" << ly << "' x2='" << lx + 24 << "' y2='" << ly << "' stroke='" << color
           << "' stroke-width='2'" << (s.dashed ? " stroke-dasharray='6,4'" : "") << "/>\n";
        os << "<text x='" << lx + 30 << "' y='" << ly + 4 << "' font-size='12'>" << escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string render(const Heatmap& map) {
    const std::size_t nx = map.x.size();
    const std::size_t ny = map.y.size();
    if (nx < 2 || ny < 2 || map.z.size() != nx * ny) throw InvalidArgument("heatmap: inconsistent grid");
    if (!(map.zmin < map.zmax)) throw InvalidArgument("heatmap: zmin must be below zmax");

    Axes ax;
    ax.log_x = map.log_x;
    ax.x = {map.x.front(), map.x.back()};
    ax.y = {map.y.front(), map.y.back()};

    // Cell edges at midpoints between samples, extended half a cell at the ends.
    auto edges = [](const std::vector<double>& c, bool logscale) {
        std::vector<double> e(c.size() + 1);
        for (std::size_t i = 1; i < c.size(); ++i)
            e[i] = logscale ? std::sqrt(c[i - 1] * c[i]) : 0.5 * (c[i - 1] + c[i]);
        e[0] = logscale ? c[0] * c[0] / e[1] : 2 * c[0] - e[1];
        e[c.size()] = logscale ? c.back() * c.back() / e[c.size() - 1] : 2 * c.back() - e[c.size() - 1];
        return e;
    };
    const auto ex = edges(map.x, map.log_x);
    const auto ey = edges(map.y, false);
    ax.x = {ex.front(), ex.back()};
    ax.y = {ey.front(), ey.back()};

    std::ostringstream os;
    os << header(kWidth + 90);
    os << "<g shape-rendering='crispEdges'>\n";
    for (std::size_t iy = 0; iy < ny; ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double z = map.z[iy * nx + ix];
            const double x0 = ax.px(ex[ix]);
            const double x1 = ax.px(ex[ix + 1]);
            const double y0 = ax.py(ey[iy + 1]);
            const double y1 = ax.py(ey[iy]);
            os << "<rect x='" << x0 << "' y='" << y0 << "' width='" << x1 - x0 + 0.3 << "' height='" << y1 - y0 + 0.3
               << "' fill='" << colormap((z - map.zmin) / (map.zmax - map.zmin)) << "'/>\n";
        }
    }
    os << "</g>\n";
    draw_frame(os, ax, map.title, map.xlabel, map.ylabel);

    // Colour bar.
    const double bx = kWidth - kRight + 25;
    const int steps = 64;
    for (int k = 0; k < steps; ++k) {
        const double h = ax.plot_h / steps;
        os << "<rect x='" << bx << "' y='" << kTop + ax.plot_h - (k + 1) * h << "' width='18' height='" << h + 0.3
           << "' fill='" << colormap((k + 0.5) / steps) << "'/>\n";
    }
    os << "<rect x='" << bx << "' y='" << kTop << "' width='18' height='" << ax.plot_h
       << "' fill='none' stroke='black'/>\n";
    for (double t : linear_ticks(map.zmin, map.zmax)) {
        const double y = kTop + ax.plot_h - (t - map.zmin) / (map.zmax - map.zmin) * ax.plot_h;
        os << "<text x='" << bx + 22 << "' y='" << y + 4 << "' font-size='11'>" << fmt(t) << "</text>\n";
    }
    os << "<text x='" << bx + 9 << "' y='" << kTop - 8 << "' text-anchor='middle' font-size='13'>"
       << escape(map.zlabel) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path);
    out << text;
}

} // namespace floqent::plot
