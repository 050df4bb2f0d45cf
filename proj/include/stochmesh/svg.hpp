// Level-curve plots of xi and eta over the physical domain.
#pragma once

#include "stochmesh/driver.hpp"
#include "stochmesh/geometry.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stochmesh {

using Polyline = std::vector<Point>;

/// Level curves f = level, extracted cell by cell with linear interpolation along
/// grid edges and chained into polylines. A node counts as above the level when
/// f > level, or f >= level when the level is the field maximum, so levels that
/// coincide with boundary values still produce a curve.
inline std::vector<Polyline> extract_contours(const ScalarField& f, double level) {
    const auto& g = f.grid();
    double fmax = f.values().front();
    for (double v : f.values()) fmax = std::max(fmax, v);
    auto above = [&](double v) { return v > level || (level >= fmax && v >= level); };

    // horizontal edge (i,j)-(i+1,j) has id 2*index(i,j), vertical (i,j)-(i,j+1) has id 2*index(i,j)+1
    auto crossing = [&](std::size_t i, std::size_t j, bool vertical) {
        const std::size_t i2 = vertical ? i : i + 1, j2 = vertical ? j + 1 : j;
        const double a = f(i, j), b = f(i2, j2);
        const double t = a == b ? 0.5 : std::clamp((level - a) / (b - a), 0.0, 1.0);
        return Point{g.x(i) + t * (g.x(i2) - g.x(i)), g.y(j) + t * (g.y(j2) - g.y(j))};
    };

    std::multimap<std::size_t, std::size_t> adjacency;  // edge id -> segment index
    std::vector<std::array<std::size_t, 2>> segments;
    std::map<std::size_t, Point> points;
    for (std::size_t j = 0; j + 1 < g.ny(); ++j) {
        for (std::size_t i = 0; i + 1 < g.nx(); ++i) {
            // cell edges: bottom, right, top, left
            const std::array<std::size_t, 4> ids{2 * g.index(i, j), 2 * g.index(i + 1, j) + 1,
                                                 2 * g.index(i, j + 1), 2 * g.index(i, j) + 1};
            const std::array<bool, 4> corner{above(f(i, j)), above(f(i + 1, j)), above(f(i + 1, j + 1)),
                                             above(f(i, j + 1))};
            std::vector<std::size_t> hits;
            for (int e = 0; e < 4; ++e) {
                if (corner[e] != corner[(e + 1) % 4]) hits.push_back(ids[e]);
            }
            if (hits.empty()) continue;
            for (int e = 0; e < 4; ++e) {
                if (corner[e] == corner[(e + 1) % 4]) continue;
                const std::size_t ci = e == 1 ? i + 1 : i, cj = e == 2 ? j + 1 : j;
                points.emplace(ids[e], crossing(ci, cj, e == 1 || e == 3));
            }
            auto add = [&](std::size_t a, std::size_t b) {
                segments.push_back({a, b});
                adjacency.emplace(a, segments.size() - 1);
                adjacency.emplace(b, segments.size() - 1);
            };
            if (hits.size() == 2) {
                add(hits[0], hits[1]);
            } else {
                // saddle: pair edges using the cell-centre value
                const double centre = 0.25 * (f(i, j) + f(i + 1, j) + f(i + 1, j + 1) + f(i, j + 1));
                if (above(centre) == corner[0]) {
                    add(hits[0], hits[1]);
                    add(hits[2], hits[3]);
                } else {
                    add(hits[0], hits[3]);
                    add(hits[1], hits[2]);
                }
            }
        }
    }

    std::vector<bool> used(segments.size(), false);
    auto next_segment = [&](std::size_t edge) -> std::ptrdiff_t {
        auto [lo, hi] = adjacency.equal_range(edge);
        for (auto it = lo; it != hi; ++it) {
            if (!used[it->second]) return static_cast<std::ptrdiff_t>(it->second);
        }
        return -1;
    };
    auto walk = [&](std::size_t edge, std::vector<std::size_t>& chain) {
        for (std::ptrdiff_t s = next_segment(edge); s >= 0; s = next_segment(edge)) {
            used[static_cast<std::size_t>(s)] = true;
            const auto& seg = segments[static_cast<std::size_t>(s)];
            edge = seg[0] == edge ? seg[1] : seg[0];
            chain.push_back(edge);
        }
    };

    std::vector<Polyline> lines;
    // start from open ends (edges with one segment) first, then close loops
    std::vector<std::size_t> starts;
    for (const auto& [edge, p] : points) {
        if (adjacency.count(edge) == 1) starts.push_back(edge);
    }
    for (const auto& [edge, p] : points) starts.push_back(edge);
    for (std::size_t start : starts) {
        if (next_segment(start) < 0) continue;
        std::vector<std::size_t> chain{start};
        walk(start, chain);
        Polyline pl;
        for (std::size_t e : chain) pl.push_back(points.at(e));
        lines.push_back(std::move(pl));
    }
    return lines;
}

/// Decoration for a mesh plot.
struct PlotOverlay {
    std::vector<std::size_t> x_splits;
    std::vector<std::size_t> y_splits;
    std::vector<Point> stochastic_points;
};

inline std::string mesh_svg(const MeshState& s, const PlotOverlay& overlay, double size_px = 600.0) {
    const auto& g = s.grid();
    const auto& d = g.domain();
    const double scale = size_px / std::max(d.width(), d.height());
    const double margin = 10.0;
    const double w = d.width() * scale + 2 * margin, h = d.height() * scale + 2 * margin;
    auto px = [&](Point p) {
        return std::pair{margin + (p.x - d.x_l) * scale, margin + (d.y_u - p.y) * scale};
    };
    char buf[128];
    std::string out;
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.1f\" height=\"%.1f\" viewBox=\"0 0 %.1f %.1f\">\n",
                  w, h, w, h);
    out += buf;
    std::snprintf(buf, sizeof buf, "<!-- t = %.6f -->\n", s.t);
    out += buf;
    out += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    auto emit_family = [&](const ScalarField& f, std::size_t levels, const char* cls, const char* colour) {
        out += std::string("<g class=\"") + cls + "\" fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"0.8\">\n";
        for (std::size_t l = 0; l < levels; ++l) {
            const double level = static_cast<double>(l) / static_cast<double>(levels - 1);
            for (const auto& line : extract_contours(f, level)) {
                std::snprintf(buf, sizeof buf, "<polyline data-level=\"%.6f\" points=\"", level);
                out += buf;
                for (std::size_t k = 0; k < line.size(); ++k) {
                    const auto [x, y] = px(line[k]);
                    std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", k ? " " : "", x, y);
                    out += buf;
                }
                out += "\"/>\n";
            }
        }
        out += "</g>\n";
    };
    emit_family(s.xi, g.nx(), "xi", "#1f4e9c");
    emit_family(s.eta, g.ny(), "eta", "#9c1f1f");

    out += "<g class=\"interfaces\" stroke=\"black\" stroke-width=\"3\">\n";
    for (std::size_t i : overlay.x_splits) {
        const auto [x0, y0] = px({g.x(i), d.y_l});
        const auto [x1, y1] = px({g.x(i), d.y_u});
        std::snprintf(buf, sizeof buf, "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\"/>\n", x0, y0, x1, y1);
        out += buf;
    }
    for (std::size_t j : overlay.y_splits) {
        const auto [x0, y0] = px({d.x_l, g.y(j)});
        const auto [x1, y1] = px({d.x_r, g.y(j)});
        std::snprintf(buf, sizeof buf, "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\"/>\n", x0, y0, x1, y1);
        out += buf;
    }
    out += "</g>\n<g class=\"stochastic\" fill=\"none\" stroke=\"black\" stroke-width=\"1.2\">\n";
    for (const Point& p : overlay.stochastic_points) {
        const auto [x, y] = px(p);
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"4\"/>\n", x, y);
        out += buf;
    }
    out += "</g>\n</svg>\n";
    return out;
}

inline void write_mesh_svg(const MeshSnapshot& snap, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << mesh_svg(snap.state, {snap.x_splits, snap.y_splits, snap.stochastic_points});
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace stochmesh
