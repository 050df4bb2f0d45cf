// Dirichlet data for xi and eta on the physical boundary.
//
// xi is 0 on the left edge and 1 on the right edge, eta is 0 on the bottom and
// 1 on the top. The remaining edges carry the solution of the 1D Winslow
// equation ((1/w) u_s)_s = 0 with u = 0, 1 at the edge ends, recomputed from
// the frozen monitor every time step.
#pragma once

#include "stochmesh/geometry.hpp"
#include "stochmesh/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace stochmesh {

inline constexpr double kBoundaryProjectionTol = 1e-12;

/// Three-point conservative discretisation of ((1/w) u_s)_s = 0, u(0) = 0, u(1) = 1.
/// Face coefficients are the arithmetic mean of 1/w at the adjacent nodes; the
/// tridiagonal system is solved with the Thomas algorithm.
inline std::vector<double> solve_edge_1d(std::span<const double> w_edge) {
    const std::size_t n = w_edge.size();
    if (n < 2) throw std::invalid_argument("solve_edge_1d: need at least 2 nodes");
    for (double w : w_edge) {
        if (!(w > 0.0)) throw std::domain_error("solve_edge_1d: weights must be positive");
    }
    std::vector<double> u(n, 0.0);
    u[n - 1] = 1.0;
    if (n == 2) return u;

    // face[k] couples nodes k and k+1
    std::vector<double> face(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) face[k] = 0.5 * (1.0 / w_edge[k] + 1.0 / w_edge[k + 1]);

    // Unknowns u_1..u_{n-2}: -face[k-1] u_{k-1} + (face[k-1]+face[k]) u_k - face[k] u_{k+1} = 0
    const std::size_t m = n - 2;
    std::vector<double> c_prime(m), d_prime(m);
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t k = r + 1;
        const double lower = -face[k - 1];
        const double diag = face[k - 1] + face[k];
        const double upper = -face[k];
        double rhs = 0.0;
        if (k + 1 == n - 1) rhs += face[k] * u[n - 1];
        const double denom = r == 0 ? diag : diag - lower * c_prime[r - 1];
        c_prime[r] = upper / denom;
        d_prime[r] = (r == 0 ? rhs : rhs - lower * d_prime[r - 1]) / denom;
    }
    u[m] = d_prime[m - 1];
    for (std::size_t r = m - 1; r-- > 0;) u[r + 1] = d_prime[r] - c_prime[r] * u[r + 2];
    return u;
}

struct BoundaryData {
    double t;
    StructuredGrid grid;
    std::vector<double> xi_bottom;  // along y = y_l, indexed by i
    std::vector<double> xi_top;     // along y = y_u, indexed by i
    std::vector<double> eta_left;   // along x = x_l, indexed by j
    std::vector<double> eta_right;  // along x = x_r, indexed by j

    /// Boundary value of a field at boundary node (i, j).
    double node_value(Field f, std::size_t i, std::size_t j) const {
        const std::size_t nx = grid.nx(), ny = grid.ny();
        if (f == Field::Xi) {
            if (i == 0) return 0.0;
            if (i + 1 == nx) return 1.0;
            if (j == 0) return xi_bottom[i];
            if (j + 1 == ny) return xi_top[i];
        } else {
            if (j == 0) return 0.0;
            if (j + 1 == ny) return 1.0;
            if (i == 0) return eta_left[j];
            if (i + 1 == nx) return eta_right[j];
        }
        throw std::invalid_argument("BoundaryData::node_value: node is not on the boundary");
    }

    /// Writes the boundary rows and columns of both fields.
    void apply(MeshState& s) const {
        const std::size_t nx = grid.nx(), ny = grid.ny();
        for (std::size_t i = 0; i < nx; ++i) {
            for (std::size_t j : {std::size_t{0}, ny - 1}) {
                s.xi(i, j) = node_value(Field::Xi, i, j);
                s.eta(i, j) = node_value(Field::Eta, i, j);
            }
        }
        for (std::size_t j = 0; j < ny; ++j) {
            for (std::size_t i : {std::size_t{0}, nx - 1}) {
                s.xi(i, j) = node_value(Field::Xi, i, j);
                s.eta(i, j) = node_value(Field::Eta, i, j);
            }
        }
    }
};

inline BoundaryData build_boundary_data(const MonitorField& monitor) {
    const ScalarField& w = monitor.w;
    const auto& g = w.grid();
    const std::size_t nx = g.nx(), ny = g.ny();
    std::vector<double> bottom(nx), top(nx), left(ny), right(ny);
    for (std::size_t i = 0; i < nx; ++i) {
        bottom[i] = w(i, 0);
        top[i] = w(i, ny - 1);
    }
    for (std::size_t j = 0; j < ny; ++j) {
        left[j] = w(0, j);
        right[j] = w(nx - 1, j);
    }
    return BoundaryData{monitor.t_frozen, g, solve_edge_1d(bottom), solve_edge_1d(top),
                        solve_edge_1d(left), solve_edge_1d(right)};
}

namespace detail {

inline double interp_edge(const std::vector<double>& u, double s, double lo, double h) {
    const double r = (s - lo) / h;
    const std::size_t n = u.size();
    const auto k = std::min(static_cast<std::size_t>(std::max(r, 0.0)), n - 2);
    const double t = std::clamp(r - static_cast<double>(k), 0.0, 1.0);
    return (1.0 - t) * u[k] + t * u[k + 1];
}

}  // namespace detail

/// Evaluates f (for xi) or g (for eta) at a point of the boundary. Points within
/// kBoundaryProjectionTol of an edge are projected onto it.
inline double eval_boundary(const BoundaryData& bd, Field which, Point p) {
    const auto& d = bd.grid.domain();
    const double tol = kBoundaryProjectionTol;
    if (p.x < d.x_l - tol || p.x > d.x_r + tol || p.y < d.y_l - tol || p.y > d.y_u + tol) {
        throw std::domain_error("eval_boundary: point outside the physical domain");
    }
    const double x = std::clamp(p.x, d.x_l, d.x_r);
    const double y = std::clamp(p.y, d.y_l, d.y_u);
    const bool left = x - d.x_l <= tol, right = d.x_r - x <= tol;
    const bool bottom = y - d.y_l <= tol, top = d.y_u - y <= tol;
    if (!(left || right || bottom || top)) {
        throw std::domain_error("eval_boundary: point is not on the boundary");
    }
    if (which == Field::Xi) {
        if (left) return 0.0;
        if (right) return 1.0;
        return detail::interp_edge(bottom ? bd.xi_bottom : bd.xi_top, x, d.x_l, bd.grid.hx());
    }
    if (bottom) return 0.0;
    if (top) return 1.0;
    return detail::interp_edge(left ? bd.eta_left : bd.eta_right, y, d.y_l, bd.grid.hy());
}

}  // namespace stochmesh
