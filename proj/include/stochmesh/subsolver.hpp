// Backward-Euler finite-difference solves of xi_t = L xi, eta_t = L eta with
// L u = lap(u) + b . grad(u), on an index rectangle with Dirichlet edges.
#pragma once

#include "stochmesh/boundary.hpp"
#include "stochmesh/ddlayout.hpp"
#include "stochmesh/geometry.hpp"
#include "stochmesh/monitor.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace stochmesh {

/// (I - dt L_h) restricted to the interior nodes of a rectangle.
struct LinearSystem {
    IndexRect rect;
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;

    std::size_t interior_nx() const { return rect.width() - 2; }
    std::size_t interior_ny() const { return rect.height() - 2; }
    std::size_t unknown(std::size_t i, std::size_t j) const {
        return (j - rect.j0 - 1) * interior_nx() + (i - rect.i0 - 1);
    }
};

namespace detail {

inline void check_rect(const IndexRect& r, const StructuredGrid& g) {
    if (r.i1 >= g.nx() || r.j1 >= g.ny() || r.width() < 3 || r.height() < 3) {
        throw std::invalid_argument("subsolver: rectangle must lie in the grid with >= 3 nodes per axis");
    }
}

inline void check_dirichlet(const IndexRect& r, const ScalarField& dirichlet) {
    for (std::size_t i = r.i0; i <= r.i1; ++i) {
        for (std::size_t j = r.j0; j <= r.j1; ++j) {
            if (r.on_edge(i, j) && !std::isfinite(dirichlet(i, j))) {
                throw std::invalid_argument("subsolver: missing Dirichlet value at node (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
}

struct Stencil {
    double centre, west, east, south, north;
};

// Coefficients of (I - dt L_h) at node (i, j): 5-point Laplacian, centred drift.
inline Stencil stencil_at(const DriftField& drift, std::size_t i, std::size_t j, double dt) {
    const auto& g = drift.b1.grid();
    const double ihx2 = 1.0 / (g.hx() * g.hx()), ihy2 = 1.0 / (g.hy() * g.hy());
    const double cx = drift.b1(i, j) / (2.0 * g.hx()), cy = drift.b2(i, j) / (2.0 * g.hy());
    return {1.0 + 2.0 * dt * (ihx2 + ihy2), -dt * (ihx2 - cx), -dt * (ihx2 + cx), -dt * (ihy2 - cy),
            -dt * (ihy2 + cy)};
}

}  // namespace detail

/// Assembles (I - dt L_h) u^{n+1} = u^n on the interior of `rect`, with edge
/// values taken from `dirichlet` (NaN marks a missing value).
inline LinearSystem assemble(const IndexRect& rect, const ScalarField& field_n, const DriftField& drift,
                             double dt, const ScalarField& dirichlet) {
    const auto& g = field_n.grid();
    detail::check_rect(rect, g);
    if (!(dt > 0.0)) throw std::invalid_argument("assemble: dt must be positive");
    detail::check_dirichlet(rect, dirichlet);

    LinearSystem sys{rect, {}, {}};
    const std::size_t n = sys.interior_nx() * sys.interior_ny();
    sys.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(5 * n);
    for (std::size_t j = rect.j0 + 1; j < rect.j1; ++j) {
        for (std::size_t i = rect.i0 + 1; i < rect.i1; ++i) {
            const auto row = static_cast<Eigen::Index>(sys.unknown(i, j));
            const auto s = detail::stencil_at(drift, i, j, dt);
            double rhs = field_n(i, j);
            triplets.emplace_back(row, row, s.centre);
            auto couple = [&](std::size_t ni, std::size_t nj, double coeff) {
                if (rect.on_edge(ni, nj)) {
                    rhs -= coeff * dirichlet(ni, nj);
                } else {
                    triplets.emplace_back(row, static_cast<Eigen::Index>(sys.unknown(ni, nj)), coeff);
                }
            };
            couple(i - 1, j, s.west);
            couple(i + 1, j, s.east);
            couple(i, j - 1, s.south);
            couple(i, j + 1, s.north);
            sys.rhs[row] = rhs;
        }
    }
    sys.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
    sys.matrix.makeCompressed();
    return sys;
}

/// Sparse LU factorisation of an assembled operator, reusable for several right-hand sides.
class Factorization {
public:
    explicit Factorization(const Eigen::SparseMatrix<double>& a) : a_(a) {
        lu_.analyzePattern(a_);
        lu_.factorize(a_);
        if (lu_.info() != Eigen::Success) throw std::runtime_error("subsolver: singular system");
    }

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
        Eigen::VectorXd x = lu_.solve(rhs);
        if (lu_.info() != Eigen::Success) throw std::runtime_error("subsolver: LU solve failed");
        const double scale = std::max(rhs.norm(), 1e-300);
        if ((a_ * x - rhs).norm() > 1e-10 * scale) {
            throw std::runtime_error("subsolver: residual above tolerance");
        }
        return x;
    }

private:
    Eigen::SparseMatrix<double> a_;
    mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
};

inline Eigen::VectorXd solve(const LinearSystem& sys) {
    return Factorization(sys.matrix).solve(sys.rhs);
}

/// Writes the solved interior values of `sys.rect` into `out`; edge nodes are left alone.
inline void scatter_interior(const LinearSystem& sys, const Eigen::VectorXd& x, ScalarField& out) {
    const auto& r = sys.rect;
    for (std::size_t j = r.j0 + 1; j < r.j1; ++j) {
        for (std::size_t i = r.i0 + 1; i < r.i1; ++i) {
            out(i, j) = x[static_cast<Eigen::Index>(sys.unknown(i, j))];
        }
    }
}

/// One backward-Euler step of both fields on `rect`; both share one factorisation.
/// Only the interior nodes of `rect` in `out` are written, so disjoint
/// subdomains may be stepped concurrently into the same state.
inline void step_subdomain(const IndexRect& rect, const MeshState& state, const DriftField& drift,
                           double dt, const ScalarField& dirichlet_xi, const ScalarField& dirichlet_eta,
                           MeshState& out) {
    const LinearSystem sx = assemble(rect, state.xi, drift, dt, dirichlet_xi);
    const LinearSystem se = assemble(rect, state.eta, drift, dt, dirichlet_eta);
    const Factorization lu(sx.matrix);
    scatter_interior(sx, lu.solve(sx.rhs), out.xi);
    scatter_interior(se, lu.solve(se.rhs), out.eta);
}

/// Full-rectangle step with the physical boundary data as Dirichlet values.
inline MeshState step_single_domain(const MeshState& state, const DriftField& drift, double dt,
                                    const BoundaryData& bd) {
    const auto& g = state.grid();
    MeshState out = state;
    bd.apply(out);
    out.t = state.t + dt;
    step_subdomain({0, g.nx() - 1, 0, g.ny() - 1}, state, drift, dt, out.xi, out.eta, out);
    return out;
}

}  // namespace stochmesh
