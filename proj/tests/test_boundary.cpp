#include "stochmesh/boundary.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace stochmesh;

namespace {

StructuredGrid unit_grid(std::size_t n) { return StructuredGrid(PhysicalDomain::unit_square(), n, n); }

}  // namespace

TEST(Boundary, UniformWeightIsLinear) {
    const std::vector<double> w(5, 1.0);
    const auto u = solve_edge_1d(w);
    const std::vector<double> expected{0.0, 0.25, 0.5, 0.75, 1.0};
    for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(u[k], expected[k], 1e-15);
}

TEST(Boundary, HandWorkedWeights) {
    // increments are proportional to the harmonic means 4/3, 4/5, 8/9, 8/5
    const std::vector<double> w{1.0, 2.0, 0.5, 4.0, 1.0};
    const auto u = solve_edge_1d(w);
    EXPECT_NEAR(u[1], 15.0 / 52.0, 1e-15);
    EXPECT_NEAR(u[2], 6.0 / 13.0, 1e-15);
    EXPECT_NEAR(u[3], 17.0 / 26.0, 1e-15);
}

TEST(Boundary, TwoNodes) {
    const std::vector<double> w{3.0, 0.1};
    const auto u = solve_edge_1d(w);
    ASSERT_EQ(u.size(), 2u);
    EXPECT_EQ(u[0], 0.0);
    EXPECT_EQ(u[1], 1.0);
}

TEST(Boundary, SymmetricWeightGivesHalfAtMidpoint) {
    std::vector<double> w(21);
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double s = static_cast<double>(k) / 20.0;
        w[k] = 1.0 + 3.0 * std::exp(-40.0 * (s - 0.5) * (s - 0.5));
    }
    EXPECT_NEAR(solve_edge_1d(w)[10], 0.5, 1e-14);
}

TEST(Boundary, MonotoneEndpointsExactScaleInvariant) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> w(3 + static_cast<std::size_t>(trial) * 7);
        for (auto& v : w) v = u(gen);
        const auto a = solve_edge_1d(w);
        EXPECT_EQ(a.front(), 0.0);
        EXPECT_EQ(a.back(), 1.0);
        for (std::size_t k = 0; k + 1 < a.size(); ++k) EXPECT_LT(a[k], a[k + 1]);

        std::vector<double> scaled = w;
        for (auto& v : scaled) v *= 37.5;
        const auto b = solve_edge_1d(scaled);
        // rounding in the elimination grows with length and weight contrast
        for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-10);

        // constant discrete flux: u_k is the normalised running sum of 1 / face coefficient
        std::vector<double> sum(w.size(), 0.0);
        for (std::size_t k = 1; k < w.size(); ++k) sum[k] = sum[k - 1] + 2.0 / (1.0 / w[k - 1] + 1.0 / w[k]);
        for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], sum[k] / sum.back(), 1e-10);
    }
}

TEST(Boundary, RejectsBadWeights) {
    EXPECT_THROW(solve_edge_1d(std::vector<double>{1.0, 0.0, 1.0}), std::domain_error);
    EXPECT_THROW(solve_edge_1d(std::vector<double>{1.0, -2.0}), std::domain_error);
    EXPECT_THROW(solve_edge_1d(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Boundary, RingRightEdgeAgainstQuadrature) {
    // w = 1/rho(0, 1, y); quadrature u(0.25) = 0.283657150739814 (adaptive Gauss-Kronrod),
    // discrete value at n = 41 from an independent banded solve
    const auto g = unit_grid(41);
    const BoundaryData bd = build_boundary_data(sample_monitor(0.0, g, RotatingRingParams{}));
    EXPECT_NEAR(bd.eta_right[10], 0.28370574606990406, 1e-13);
    EXPECT_NEAR(bd.eta_right[10], 0.28365715073981418, 1e-4);
    EXPECT_NEAR(bd.eta_right[20], 0.5, 1e-13);
    // the bottom edge is far from the ring at t = 0 and nearly uniform
    EXPECT_NEAR(bd.xi_bottom[10], 0.25000382541675681, 1e-13);
    EXPECT_NEAR(bd.xi_bottom[30], 0.75000377585118061, 1e-13);
}

TEST(Boundary, UniformMonitorGivesLinearEdges) {
    const auto g = unit_grid(11);
    const BoundaryData bd = build_boundary_data(sample_monitor(0.3, g, constant_density(2.0)));
    for (std::size_t k = 0; k < 11; ++k) {
        const double s = static_cast<double>(k) / 10.0;
        EXPECT_NEAR(bd.xi_bottom[k], s, 1e-15);
        EXPECT_NEAR(bd.xi_top[k], s, 1e-15);
        EXPECT_NEAR(bd.eta_left[k], s, 1e-15);
        EXPECT_NEAR(bd.eta_right[k], s, 1e-15);
    }
    EXPECT_EQ(bd.t, 0.3);
}

TEST(Boundary, CornerConsistency) {
    const auto g = unit_grid(41);
    const BoundaryData bd = build_boundary_data(sample_monitor(0.6, g, RotatingRingParams{}));
    EXPECT_EQ(bd.xi_bottom.front(), 0.0);
    EXPECT_EQ(bd.eta_left.front(), 0.0);
    EXPECT_EQ(bd.xi_top.back(), 1.0);
    EXPECT_EQ(bd.eta_right.back(), 1.0);
    EXPECT_EQ(bd.node_value(Field::Xi, 0, 0), 0.0);
    EXPECT_EQ(bd.node_value(Field::Eta, 40, 40), 1.0);
    EXPECT_EQ(bd.node_value(Field::Xi, 40, 0), 1.0);
    EXPECT_EQ(bd.node_value(Field::Eta, 40, 0), 0.0);
    EXPECT_THROW(bd.node_value(Field::Xi, 3, 3), std::invalid_argument);
}

TEST(Boundary, EvalConstantEdges) {
    const BoundaryData bd = build_boundary_data(sample_monitor(0.0, unit_grid(41), RotatingRingParams{}));
    EXPECT_EQ(eval_boundary(bd, Field::Xi, {1.0, 0.3}), 1.0);
    EXPECT_EQ(eval_boundary(bd, Field::Xi, {0.0, 0.3}), 0.0);
    EXPECT_EQ(eval_boundary(bd, Field::Eta, {0.3, 0.0}), 0.0);
    EXPECT_EQ(eval_boundary(bd, Field::Eta, {0.3, 1.0}), 1.0);
}

TEST(Boundary, EvalInterpolatesLinearly) {
    const BoundaryData flat = build_boundary_data(sample_monitor(0.0, unit_grid(41), constant_density(1.0)));
    EXPECT_NEAR(eval_boundary(flat, Field::Xi, {0.3, 0.0}), 0.3, 1e-14);
    EXPECT_NEAR(eval_boundary(flat, Field::Eta, {1.0, 0.6180339887}), 0.6180339887, 1e-14);

    const BoundaryData bd = build_boundary_data(sample_monitor(0.0, unit_grid(41), RotatingRingParams{}));
    const double mid = eval_boundary(bd, Field::Eta, {1.0, 0.2625});  // halfway between nodes 10 and 11
    EXPECT_NEAR(mid, 0.5 * (bd.eta_right[10] + bd.eta_right[11]), 1e-15);
}

TEST(Boundary, EvalProjectsNearbyPointsAndRejectsOthers) {
    const BoundaryData bd = build_boundary_data(sample_monitor(0.0, unit_grid(41), constant_density(1.0)));
    EXPECT_EQ(eval_boundary(bd, Field::Xi, {1.0 + 5e-13, 0.4}), 1.0);
    EXPECT_NEAR(eval_boundary(bd, Field::Xi, {0.7, -5e-13}), 0.7, 1e-12);
    EXPECT_THROW(eval_boundary(bd, Field::Xi, {0.5, 0.5}), std::domain_error);
    EXPECT_THROW(eval_boundary(bd, Field::Xi, {1.1, 0.5}), std::domain_error);
    EXPECT_THROW(eval_boundary(bd, Field::Eta, {0.5, 1e-9}), std::domain_error);
}
