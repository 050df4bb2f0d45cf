// Physical domain, structured node grid and the mesh-state containers.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace stochmesh {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned rectangle [x_l, x_r] x [y_l, y_u].
struct PhysicalDomain {
    double x_l = 0.0;
    double x_r = 1.0;
    double y_l = 0.0;
    double y_u = 1.0;

    PhysicalDomain() = default;
    PhysicalDomain(double xl, double xr, double yl, double yu)
        : x_l(xl), x_r(xr), y_l(yl), y_u(yu) {
        if (!(x_l < x_r) || !(y_l < y_u)) {
            throw std::invalid_argument("PhysicalDomain: need x_l < x_r and y_l < y_u");
        }
    }

    static PhysicalDomain unit_square() { return {}; }

    double width() const { return x_r - x_l; }
    double height() const { return y_u - y_l; }

    friend bool operator==(const PhysicalDomain&, const PhysicalDomain&) = default;
};

/// Open-rectangle membership: points on the boundary count as exited.
inline bool contains(const PhysicalDomain& d, Point p) {
    return d.x_l < p.x && p.x < d.x_r && d.y_l < p.y && p.y < d.y_u;
}

/// Node-centred grid, boundary nodes included.
class StructuredGrid {
public:
    StructuredGrid(const PhysicalDomain& domain, std::size_t nx, std::size_t ny)
        : domain_(domain), nx_(nx), ny_(ny) {
        if (nx < 2 || ny < 2) {
            throw std::invalid_argument("StructuredGrid: need nx >= 2 and ny >= 2");
        }
        hx_ = domain.width() / static_cast<double>(nx - 1);
        hy_ = domain.height() / static_cast<double>(ny - 1);
    }

    const PhysicalDomain& domain() const { return domain_; }
    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    std::size_t size() const { return nx_ * ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }

    std::size_t index(std::size_t i, std::size_t j) const { return j * nx_ + i; }

    // std::lerp is exact at both ends, so the last node sits on x_r / y_u.
    double x(std::size_t i) const {
        return std::lerp(domain_.x_l, domain_.x_r,
                         static_cast<double>(i) / static_cast<double>(nx_ - 1));
    }
    double y(std::size_t j) const {
        return std::lerp(domain_.y_l, domain_.y_u,
                         static_cast<double>(j) / static_cast<double>(ny_ - 1));
    }

    bool is_boundary(std::size_t i, std::size_t j) const {
        return i == 0 || j == 0 || i + 1 == nx_ || j + 1 == ny_;
    }

    friend bool operator==(const StructuredGrid& a, const StructuredGrid& b) {
        return a.domain_ == b.domain_ && a.nx_ == b.nx_ && a.ny_ == b.ny_;
    }

private:
    PhysicalDomain domain_;
    std::size_t nx_;
    std::size_t ny_;
    double hx_;
    double hy_;
};

inline Point node_coords(const StructuredGrid& grid, std::size_t i, std::size_t j) {
    if (i >= grid.nx() || j >= grid.ny()) {
        throw std::out_of_range("node_coords: index (" + std::to_string(i) + "," +
                                std::to_string(j) + ") outside grid");
    }
    return {grid.x(i), grid.y(j)};
}

/// Nodal values on a StructuredGrid, stored row-major with j outer.
class ScalarField {
public:
    explicit ScalarField(const StructuredGrid& grid, double fill = 0.0)
        : grid_(grid), values_(grid.size(), fill) {}

    ScalarField(const StructuredGrid& grid, std::vector<double> values)
        : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size()) {
            throw std::invalid_argument("ScalarField: value count does not match grid");
        }
    }

    const StructuredGrid& grid() const { return grid_; }

    double operator()(std::size_t i, std::size_t j) const { return values_[grid_.index(i, j)]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[grid_.index(i, j)]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    bool all_finite() const {
        for (double v : values_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

private:
    StructuredGrid grid_;
    std::vector<double> values_;
};

enum class Field { Xi, Eta };

inline const char* to_string(Field f) { return f == Field::Xi ? "xi" : "eta"; }

/// Computational coordinates xi(t, x, y), eta(t, x, y) sampled on the grid.
struct MeshState {
    double t = 0.0;
    ScalarField xi;
    ScalarField eta;

    const StructuredGrid& grid() const { return xi.grid(); }
    const ScalarField& field(Field f) const { return f == Field::Xi ? xi : eta; }
    ScalarField& field(Field f) { return f == Field::Xi ? xi : eta; }
};

/// Uniform mesh: xi, eta are the affine normalisation of x, y.
inline MeshState initial_mesh(const StructuredGrid& grid) {
    const auto& d = grid.domain();
    MeshState s{0.0, ScalarField(grid), ScalarField(grid)};
    for (std::size_t j = 0; j < grid.ny(); ++j) {
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            s.xi(i, j) = (grid.x(i) - d.x_l) / d.width();
            s.eta(i, j) = (grid.y(j) - d.y_l) / d.height();
        }
    }
    return s;
}

}  // namespace stochmesh
