#include "stochmesh/geometry.hpp"

#include <gtest/gtest.h>

using namespace stochmesh;

namespace {

StructuredGrid unit_grid(std::size_t n) { return StructuredGrid(PhysicalDomain::unit_square(), n, n); }

}  // namespace

TEST(Geometry, NodeCoordsExamples) {
    EXPECT_EQ(node_coords(unit_grid(3), 1, 1), (Point{0.5, 0.5}));
    EXPECT_EQ(node_coords(unit_grid(41), 1, 0), (Point{0.025, 0.0}));
    EXPECT_EQ(node_coords(StructuredGrid(PhysicalDomain::unit_square(), 2, 2), 1, 0), (Point{1.0, 0.0}));
}

TEST(Geometry, NodeCoordsOutOfRange) {
    const auto g = unit_grid(5);
    EXPECT_THROW(node_coords(g, 5, 0), std::out_of_range);
    EXPECT_THROW(node_coords(g, 0, 5), std::out_of_range);
}

TEST(Geometry, LastNodeIsExactCorner) {
    for (std::size_t n : {2u, 3u, 7u, 41u, 97u}) {
        const StructuredGrid g(PhysicalDomain(-0.3, 1.7, 0.1, 2.9), n, n + 3);
        EXPECT_EQ(node_coords(g, n - 1, n + 2), (Point{1.7, 2.9}));
    }
}

TEST(Geometry, NodeCoordsAffine) {
    const StructuredGrid g(PhysicalDomain(-1.0, 3.0, 2.0, 5.0), 9, 13);
    for (std::size_t j = 0; j < g.ny(); ++j) {
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const Point p = node_coords(g, i, j);
            EXPECT_NEAR(p.x, -1.0 + static_cast<double>(i) * g.hx(), 1e-14);
            EXPECT_NEAR(p.y, 2.0 + static_cast<double>(j) * g.hy(), 1e-14);
        }
    }
}

TEST(Geometry, InvalidDomainAndGrid) {
    EXPECT_THROW(PhysicalDomain(1.0, 1.0, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(PhysicalDomain(0.0, 1.0, 2.0, 1.0), std::invalid_argument);
    EXPECT_THROW(StructuredGrid(PhysicalDomain::unit_square(), 1, 5), std::invalid_argument);
}

TEST(Geometry, InitialMeshExamples) {
    const auto g = unit_grid(3);
    const MeshState s = initial_mesh(g);
    EXPECT_EQ(s.t, 0.0);
    EXPECT_EQ(s.xi(1, 1), 0.5);
    EXPECT_EQ(s.eta(1, 1), 0.5);
    EXPECT_EQ(s.xi(2, 0), 1.0);
    EXPECT_EQ(s.eta(2, 0), 0.0);

    const StructuredGrid wide(PhysicalDomain(0.0, 2.0, 0.0, 1.0), 5, 3);
    EXPECT_EQ(initial_mesh(wide).xi(2, 1), 0.5);  // x = 1
}

TEST(Geometry, InitialMeshRangeAndBoundaryValues) {
    const StructuredGrid g(PhysicalDomain(-0.7, 2.3, 1.0, 1.9), 17, 11);
    const MeshState s = initial_mesh(g);
    for (std::size_t j = 0; j < g.ny(); ++j) {
        for (std::size_t i = 0; i < g.nx(); ++i) {
            EXPECT_GE(s.xi(i, j), 0.0);
            EXPECT_LE(s.xi(i, j), 1.0);
            EXPECT_GE(s.eta(i, j), 0.0);
            EXPECT_LE(s.eta(i, j), 1.0);
        }
        EXPECT_EQ(s.xi(0, j), 0.0);
        EXPECT_EQ(s.xi(g.nx() - 1, j), 1.0);
    }
    for (std::size_t i = 0; i < g.nx(); ++i) {
        EXPECT_EQ(s.eta(i, 0), 0.0);
        EXPECT_EQ(s.eta(i, g.ny() - 1), 1.0);
    }
}

TEST(Geometry, ContainsIsOpenRectangle) {
    const auto d = PhysicalDomain::unit_square();
    EXPECT_TRUE(contains(d, {0.5, 0.5}));
    EXPECT_FALSE(contains(d, {1.0, 0.5}));
    EXPECT_FALSE(contains(d, {-0.1, 0.5}));
    EXPECT_FALSE(contains(d, {0.5, 0.0}));
    EXPECT_TRUE(contains(d, {1e-300, 1.0 - 1e-16}));
}

TEST(Geometry, ScalarFieldSizeChecked) {
    const auto g = unit_grid(3);
    EXPECT_THROW(ScalarField(g, std::vector<double>(8, 0.0)), std::invalid_argument);
    ScalarField f(g, 2.0);
    EXPECT_TRUE(f.all_finite());
    f(1, 2) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_FALSE(f.all_finite());
}
