// Mesh diagnostics: fold detection, mesh distances, Monte Carlo rate fits.
#pragma once

#include "stochmesh/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>

namespace stochmesh {

/// Minimum over interior nodes of xi_x eta_y - xi_y eta_x (centred differences).
inline double discrete_jacobian(const MeshState& s) {
    const auto& g = s.grid();
    if (g.nx() < 3 || g.ny() < 3) throw std::invalid_argument("discrete_jacobian: need nx, ny >= 3");
    const double ihx = 1.0 / (2.0 * g.hx()), ihy = 1.0 / (2.0 * g.hy());
    double jmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j + 1 < g.ny(); ++j) {
        for (std::size_t i = 1; i + 1 < g.nx(); ++i) {
            const double xi_x = (s.xi(i + 1, j) - s.xi(i - 1, j)) * ihx;
            const double xi_y = (s.xi(i, j + 1) - s.xi(i, j - 1)) * ihy;
            const double eta_x = (s.eta(i + 1, j) - s.eta(i - 1, j)) * ihx;
            const double eta_y = (s.eta(i, j + 1) - s.eta(i, j - 1)) * ihy;
            jmin = std::min(jmin, xi_x * eta_y - xi_y * eta_x);
        }
    }
    return jmin;
}

struct QualityReport {
    double min_jacobian = 0.0;
    double max_node_displacement_from_uniform = 0.0;
    bool fold_free = false;
    double min_value = 0.0;  // smallest xi or eta value
    double max_value = 0.0;  // largest xi or eta value
};

inline QualityReport assess(const MeshState& s) {
    QualityReport q;
    q.min_jacobian = discrete_jacobian(s);
    q.fold_free = q.min_jacobian > 0.0;
    const MeshState u = initial_mesh(s.grid());
    double dev = 0.0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t k = 0; k < s.grid().size(); ++k) {
        dev = std::max(dev, std::abs(s.xi.values()[k] - u.xi.values()[k]));
        dev = std::max(dev, std::abs(s.eta.values()[k] - u.eta.values()[k]));
        lo = std::min({lo, s.xi.values()[k], s.eta.values()[k]});
        hi = std::max({hi, s.xi.values()[k], s.eta.values()[k]});
    }
    q.max_node_displacement_from_uniform = dev;
    q.min_value = lo;
    q.max_value = hi;
    return q;
}

/// Largest |xi - xi_uniform| over all nodes.
inline double max_xi_deviation(const MeshState& s) {
    const MeshState u = initial_mesh(s.grid());
    double dev = 0.0;
    for (std::size_t k = 0; k < s.grid().size(); ++k) {
        dev = std::max(dev, std::abs(s.xi.values()[k] - u.xi.values()[k]));
    }
    return dev;
}

struct MeshDistance {
    double l_inf = 0.0;
    double l_2 = 0.0;  // RMS over both fields and all nodes
};

inline MeshDistance mesh_distance(const MeshState& a, const MeshState& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("mesh_distance: grids differ");
    MeshDistance d;
    double sum = 0.0;
    const std::size_t n = a.grid().size();
    for (std::size_t k = 0; k < n; ++k) {
        const double ex = std::abs(a.xi.values()[k] - b.xi.values()[k]);
        const double ee = std::abs(a.eta.values()[k] - b.eta.values()[k]);
        d.l_inf = std::max({d.l_inf, ex, ee});
        sum += ex * ex + ee * ee;
    }
    d.l_2 = std::sqrt(sum / static_cast<double>(2 * n));
    return d;
}

/// Least-squares slope of log(error) against log(N).
inline double mc_rate(std::span<const std::pair<double, double>> samples) {
    if (samples.size() < 3) throw std::invalid_argument("mc_rate: need at least 3 samples");
    double sx = 0.0, sy = 0.0;
    for (const auto& [n, e] : samples) {
        if (!(n > 0.0) || !(e > 0.0)) throw std::invalid_argument("mc_rate: N and error must be positive");
        sx += std::log(n);
        sy += std::log(e);
    }
    const double m = static_cast<double>(samples.size());
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [n, e] : samples) {
        const double dx = std::log(n) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(e) - my);
    }
    if (sxx <= 0.0) throw std::invalid_argument("mc_rate: N values must be distinct");
    return sxy / sxx;
}

}  // namespace stochmesh
