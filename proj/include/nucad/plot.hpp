#pragma once

#include <cstdint>
#include <sstream>

#include "nucad/tree.hpp"

namespace nucad {

struct PlotWindow {
    Rational x0{-2}, x1{2}, y0{-2}, y1{2};
};

namespace detail {

inline uint32_t fnv1a(const std::string& s) {
    uint32_t h = 2166136261u;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 16777619u;
    }
    return h;
}

inline void hsl_to_rgb(double h, double s, double l, int& r, int& g, int& b) {
    auto hue = [](double p, double q, double t) {
        if (t < 0) t += 1;
        if (t > 1) t -= 1;
        if (t < 1.0 / 6) return p + (q - p) * 6 * t;
        if (t < 1.0 / 2) return q;
        if (t < 2.0 / 3) return p + (q - p) * (2.0 / 3 - t) * 6;
        return p;
    };
    double q = l < 0.5 ? l * (1 + s) : l + s - l * s;
    double p = 2 * l - q;
    r = static_cast<int>(hue(p, q, h + 1.0 / 3) * 255.0 + 0.5);
    g = static_cast<int>(hue(p, q, h) * 255.0 + 0.5);
    b = static_cast<int>(hue(p, q, h - 1.0 / 3) * 255.0 + 0.5);
}

inline std::string cell_color(const std::string& label, bool truth) {
    double h = (fnv1a(label) % 360u) / 360.0;
    double s = truth ? 0.85 : 0.20;
    double l = truth ? 0.55 : 0.72;
    int r, g, b;
    hsl_to_rgb(h, s, l, r, g, b);
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace detail

// Rasterizes a two-dimensional tree by point location on a grid: each grid
// point is colored by its leaf label (hashed hue), with the truth value
// controlling saturation. Boundary hits are retried with small deterministic
// nudges; unresolved points render black. Output is SVG 1.1.
inline std::string render_svg(const NuCADTree& tree, const PlotWindow& w, int grid = 400) {
    if (tree.n != 2) throw std::invalid_argument("plot requires a two-variable tree");
    if (grid < 1) throw std::invalid_argument("grid resolution must be positive");
    Rational dx = (w.x1 - w.x0) / grid;
    Rational dy = (w.y1 - w.y0) / grid;
    if (sign_of(dx) <= 0 || sign_of(dy) <= 0) throw std::invalid_argument("degenerate plot window");
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << grid
       << "\" height=\"" << grid << "\" viewBox=\"0 0 " << grid << " " << grid
       << "\" shape-rendering=\"crispEdges\">\n";
    for (int col = 0; col < grid; ++col) {
        // One cache per column: the x coordinate (the only specialization
        // prefix in two variables) is fixed along it.
        IsolationCache cache;
        Rational x = w.x0 + dx * Rational(2 * col + 1) / 2;
        std::string run_color;
        int run_start = 0;
        auto flush = [&](int end_row) {
            if (run_color.empty() || end_row <= run_start) return;
            os << "<rect x=\"" << col << "\" y=\"" << run_start << "\" width=\"1\" height=\""
               << (end_row - run_start) << "\" fill=\"" << run_color << "\"/>\n";
        };
        for (int row = 0; row < grid; ++row) {
            Rational y = w.y1 - dy * Rational(2 * row + 1) / 2;
            std::string color = "#000000";
            for (int nudge = 0; nudge < 5; ++nudge) {
                Rational ex = x, ey = y;
                if (nudge > 0) {
                    Rational eps = dx / (7 * (nudge + 1));
                    ex += eps;
                    ey += eps / 3;
                }
                IsolationCache local;
                IsolationCache* c = nudge == 0 ? &cache : &local;
                LocateResult r = locate(tree, std::vector<Rational>{ex, ey}, c);
                if (!r.boundary) {
                    color = detail::cell_color(r.label, r.truth);
                    break;
                }
            }
            if (color != run_color) {
                flush(row);
                run_color = color;
                run_start = row;
            }
        }
        flush(grid);
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace nucad
