// Mesh density w = 1/rho, its drift b = -grad(w)/w and bilinear interpolation.
#pragma once

#include "stochmesh/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace stochmesh {

struct RotatingRingParams {
    double alpha = 10.0;
    double beta = -50.0;
};

/// rho(t, x, y) of a ring of radius 1/10 whose centre circles (1/2, 1/2) with radius 1/4.
inline double rho(double t, Point p, const RotatingRingParams& params) {
    const double phase = 2.0 * std::numbers::pi * t;
    const double dx = p.x - 0.5 - 0.25 * std::cos(phase);
    const double dy = p.y - 0.5 - 0.25 * std::sin(phase);
    return 1.0 + params.alpha * std::exp(params.beta * std::abs(dx * dx + dy * dy - 0.01));
}

/// Time-dependent density rho(t, p) > 0; the monitor is w = 1/rho.
using DensityFunction = std::function<double(double, Point)>;

inline DensityFunction rotating_ring(RotatingRingParams params) {
    return [params](double t, Point p) { return rho(t, p, params); };
}

inline DensityFunction constant_density(double value = 1.0) {
    return [value](double, Point) { return value; };
}

/// w sampled at the nodes, held fixed over one time step.
struct MonitorField {
    double t_frozen;
    ScalarField w;

    /// rho = 1/w at the nodes.
    ScalarField density() const {
        ScalarField r(w.grid());
        for (std::size_t k = 0; k < r.values().size(); ++k) r.values()[k] = 1.0 / w.values()[k];
        return r;
    }
};

struct DriftField {
    ScalarField b1;
    ScalarField b2;
};

inline MonitorField sample_monitor(double t, const StructuredGrid& grid, const DensityFunction& density) {
    MonitorField m{t, ScalarField(grid)};
    for (std::size_t j = 0; j < grid.ny(); ++j) {
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            const double r = density(t, node_coords(grid, i, j));
            if (!(r > 0.0) || !std::isfinite(r)) {
                throw std::domain_error("sample_monitor: density must be positive and finite");
            }
            m.w(i, j) = 1.0 / r;
        }
    }
    return m;
}

inline MonitorField sample_monitor(double t, const StructuredGrid& grid, const RotatingRingParams& params) {
    return sample_monitor(t, grid, rotating_ring(params));
}

namespace detail {

// Centred difference in the interior, first-order one-sided on the end nodes.
inline double diff_along(const ScalarField& f, std::size_t i, std::size_t j, bool along_x) {
    const auto& g = f.grid();
    const std::size_t n = along_x ? g.nx() : g.ny();
    const std::size_t k = along_x ? i : j;
    const double h = along_x ? g.hx() : g.hy();
    auto at = [&](std::size_t m) { return along_x ? f(m, j) : f(i, m); };
    if (k == 0) return (at(1) - at(0)) / h;
    if (k + 1 == n) return (at(n - 1) - at(n - 2)) / h;
    return (at(k + 1) - at(k - 1)) / (2.0 * h);
}

}  // namespace detail

inline DriftField drift_from_monitor(const MonitorField& monitor) {
    const ScalarField& w = monitor.w;
    const auto& g = w.grid();
    for (double v : w.values()) {
        if (!(v > 0.0)) throw std::domain_error("drift_from_monitor: monitor values must be positive");
    }
    DriftField b{ScalarField(g), ScalarField(g)};
    for (std::size_t j = 0; j < g.ny(); ++j) {
        for (std::size_t i = 0; i < g.nx(); ++i) {
            b.b1(i, j) = -detail::diff_along(w, i, j, true) / w(i, j);
            b.b2(i, j) = -detail::diff_along(w, i, j, false) / w(i, j);
        }
    }
    return b;
}

/// Bilinear interpolation on the cell containing p. Points on the outer edges are allowed.
inline double interp_bilinear(const ScalarField& f, Point p) {
    const auto& g = f.grid();
    const auto& d = g.domain();
    if (!(p.x >= d.x_l && p.x <= d.x_r && p.y >= d.y_l && p.y <= d.y_u)) {
        throw std::out_of_range("interp_bilinear: point outside grid rectangle");
    }
    const double sx = (p.x - d.x_l) / g.hx();
    const double sy = (p.y - d.y_l) / g.hy();
    const auto i = std::min(static_cast<std::size_t>(sx), g.nx() - 2);
    const auto j = std::min(static_cast<std::size_t>(sy), g.ny() - 2);
    const double tx = std::clamp(sx - static_cast<double>(i), 0.0, 1.0);
    const double ty = std::clamp(sy - static_cast<double>(j), 0.0, 1.0);
    const double f00 = f(i, j);
    const double f10 = f(i + 1, j);
    const double f01 = f(i, j + 1);
    const double f11 = f(i + 1, j + 1);
    return (1.0 - ty) * ((1.0 - tx) * f00 + tx * f10) + ty * ((1.0 - tx) * f01 + tx * f11);
}

}  // namespace stochmesh
