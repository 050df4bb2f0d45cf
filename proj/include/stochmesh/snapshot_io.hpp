// Snapshot CSV files.
//
// Header `i,j,x,y,xi,eta`, one row per node with j as the outer loop, values
// printed with 17 significant digits (integral values keep a trailing `.0`),
// LF line endings. Reading a file back reproduces the doubles exactly.
#pragma once

#include "stochmesh/driver.hpp"
#include "stochmesh/geometry.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace stochmesh {

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

inline std::string snapshot_csv(const MeshState& s) {
    const auto& g = s.grid();
    std::string out = "i,j,x,y,xi,eta\n";
    out.reserve(g.size() * 90);
    for (std::size_t j = 0; j < g.ny(); ++j) {
        for (std::size_t i = 0; i < g.nx(); ++i) {
            out += std::to_string(i) + ',' + std::to_string(j) + ',' + format_real(g.x(i)) + ',' +
                   format_real(g.y(j)) + ',' + format_real(s.xi(i, j)) + ',' + format_real(s.eta(i, j)) + '\n';
        }
    }
    return out;
}

inline void write_snapshot_csv(const MeshState& s, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << snapshot_csv(s);
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

/// Reads a snapshot CSV. The grid is recovered from the node coordinates.
inline MeshState read_snapshot_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(f, line) || line != "i,j,x,y,xi,eta") {
        throw std::runtime_error(path + ": missing or wrong CSV header");
    }
    struct Row {
        std::size_t i, j;
        double x, y, xi, eta;
    };
    std::vector<Row> rows;
    std::size_t nx = 0, ny = 0;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        Row r{};
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 6) throw std::runtime_error(path + ": line " + std::to_string(lineno) + " needs 6 columns");
        char* end = nullptr;
        r.i = std::strtoull(cells[0].c_str(), &end, 10);
        r.j = std::strtoull(cells[1].c_str(), &end, 10);
        r.x = std::strtod(cells[2].c_str(), &end);
        r.y = std::strtod(cells[3].c_str(), &end);
        r.xi = std::strtod(cells[4].c_str(), &end);
        r.eta = std::strtod(cells[5].c_str(), &end);
        nx = std::max(nx, r.i + 1);
        ny = std::max(ny, r.j + 1);
        rows.push_back(r);
    }
    if (nx < 2 || ny < 2 || rows.size() != nx * ny) throw std::runtime_error(path + ": incomplete grid");
    double xl = 0, xr = 0, yl = 0, yu = 0;
    for (const auto& r : rows) {
        if (r.i == 0 && r.j == 0) {
            xl = r.x;
            yl = r.y;
        }
        if (r.i == nx - 1 && r.j == ny - 1) {
            xr = r.x;
            yu = r.y;
        }
    }
    const StructuredGrid g(PhysicalDomain(xl, xr, yl, yu), nx, ny);
    MeshState s{0.0, ScalarField(g), ScalarField(g)};
    for (const auto& r : rows) {
        s.xi(r.i, r.j) = r.xi;
        s.eta(r.i, r.j) = r.eta;
    }
    return s;
}

}  // namespace stochmesh
