#include "stochmesh/subsolver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace stochmesh;

namespace {

StructuredGrid unit_grid(std::size_t n) { return StructuredGrid(PhysicalDomain::unit_square(), n, n); }

DriftField zero_drift(const StructuredGrid& g) { return {ScalarField(g, 0.0), ScalarField(g, 0.0)}; }

ScalarField sampled(const StructuredGrid& g, auto fn) {
    ScalarField f(g);
    for (std::size_t j = 0; j < g.ny(); ++j) {
        for (std::size_t i = 0; i < g.nx(); ++i) f(i, j) = fn(g.x(i), g.y(j));
    }
    return f;
}

IndexRect whole(const StructuredGrid& g) { return {0, g.nx() - 1, 0, g.ny() - 1}; }

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.values().size(); ++k) m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
    return m;
}

// u_t = lap u on the unit square, u = 0 on the boundary, u0 = sin(pi x) sin(pi y):
// a single Fourier mode decaying like exp(-2 pi^2 t)
double heat_error(std::size_t n, double dt, double t_end) {
    const auto g = unit_grid(n);
    const double pi = std::numbers::pi;
    ScalarField u = sampled(g, [&](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
    const ScalarField zero(g, 0.0);
    const auto drift = zero_drift(g);
    const auto steps = static_cast<int>(std::llround(t_end / dt));
    for (int k = 0; k < steps; ++k) {
        const LinearSystem sys = assemble(whole(g), u, drift, dt, zero);
        ScalarField next = zero;
        scatter_interior(sys, solve(sys), next);
        u = next;
    }
    const double decay = std::exp(-2.0 * pi * pi * t_end);
    const ScalarField exact = sampled(g, [&](double x, double y) { return decay * std::sin(pi * x) * std::sin(pi * y); });
    return max_abs_diff(u, exact);
}

}  // namespace

TEST(Assemble, HandStencilZeroDrift) {
    const auto g = unit_grid(5);  // h = 0.25, 3x3 interior
    const LinearSystem sys = assemble(whole(g), ScalarField(g, 0.0), zero_drift(g), 0.01, ScalarField(g, 0.0));
    ASSERT_EQ(sys.matrix.rows(), 9);
    const auto c = static_cast<Eigen::Index>(sys.unknown(2, 2));
    EXPECT_NEAR(sys.matrix.coeff(c, c), 1.64, 1e-14);
    for (auto [i, j] : {std::pair{1, 2}, std::pair{3, 2}, std::pair{2, 1}, std::pair{2, 3}}) {
        EXPECT_NEAR(sys.matrix.coeff(c, static_cast<Eigen::Index>(sys.unknown(i, j))), -0.16, 1e-14);
    }
    EXPECT_EQ(sys.matrix.coeff(c, static_cast<Eigen::Index>(sys.unknown(1, 1))), 0.0);
    EXPECT_EQ(sys.matrix.nonZeros(), 9 + 2 * 12);
}

TEST(Assemble, CentredDriftCoefficients) {
    const auto g = unit_grid(5);
    const DriftField drift{ScalarField(g, 2.0), ScalarField(g, -4.0)};
    const LinearSystem sys = assemble(whole(g), ScalarField(g, 0.0), drift, 0.01, ScalarField(g, 0.0));
    const auto c = static_cast<Eigen::Index>(sys.unknown(2, 2));
    auto at = [&](std::size_t i, std::size_t j) { return sys.matrix.coeff(c, static_cast<Eigen::Index>(sys.unknown(i, j))); };
    EXPECT_NEAR(at(3, 2), -0.01 * (16.0 + 4.0), 1e-14);   // east: 1/h^2 + b1/(2h)
    EXPECT_NEAR(at(1, 2), -0.01 * (16.0 - 4.0), 1e-14);   // west
    EXPECT_NEAR(at(2, 3), -0.01 * (16.0 - 8.0), 1e-14);   // north: 1/h^2 + b2/(2h)
    EXPECT_NEAR(at(2, 1), -0.01 * (16.0 + 8.0), 1e-14);   // south
}

TEST(Assemble, DirichletEliminatedIntoRhs) {
    const auto g = unit_grid(5);
    ScalarField dir(g, 0.0);
    dir(0, 2) = 1.0;  // west neighbour of unknown (1, 2)
    const LinearSystem sys = assemble(whole(g), ScalarField(g, 0.5), zero_drift(g), 0.01, dir);
    EXPECT_NEAR(sys.rhs[static_cast<Eigen::Index>(sys.unknown(1, 2))], 0.5 + 0.16, 1e-14);
    EXPECT_NEAR(sys.rhs[static_cast<Eigen::Index>(sys.unknown(2, 2))], 0.5, 1e-15);
}

TEST(Assemble, Errors) {
    const auto g = unit_grid(5);
    ScalarField dir(g, 0.0);
    dir(4, 3) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(assemble(whole(g), ScalarField(g, 0.0), zero_drift(g), 0.01, dir), std::invalid_argument);
    EXPECT_THROW(assemble(whole(g), ScalarField(g, 0.0), zero_drift(g), 0.0, ScalarField(g, 0.0)),
                 std::invalid_argument);
    // an interior NaN is not a Dirichlet value and is ignored
    ScalarField inner(g, 0.0);
    inner(2, 2) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_NO_THROW(assemble(whole(g), ScalarField(g, 0.0), zero_drift(g), 0.01, inner));
}

TEST(Solve, IdentitySystemReturnsRhs) {
    LinearSystem sys{{0, 3, 0, 3}, {}, {}};
    sys.matrix.resize(4, 4);
    sys.matrix.setIdentity();
    sys.rhs = Eigen::VectorXd::LinSpaced(4, 1.0, 4.0);
    const Eigen::VectorXd x = solve(sys);
    for (int k = 0; k < 4; ++k) EXPECT_EQ(x[k], k + 1.0);
}

TEST(Solve, TinyStepReturnsPreviousField) {
    const auto g = unit_grid(11);
    const ScalarField f = sampled(g, [](double x, double y) { return std::cos(3 * x) * y; });
    const LinearSystem sys = assemble(whole(g), f, zero_drift(g), 1e-14, f);
    ScalarField out = f;
    scatter_interior(sys, solve(sys), out);
    EXPECT_LT(max_abs_diff(out, f), 1e-11);
}

TEST(Solve, ConstantsAreExact) {
    const auto g = unit_grid(21);
    const MonitorField m = sample_monitor(0.2, g, RotatingRingParams{});
    const DriftField drift = drift_from_monitor(m);
    const ScalarField c(g, 0.37);
    const LinearSystem sys = assemble(whole(g), c, drift, 1e-3, c);
    ScalarField out(g, 0.0);
    scatter_interior(sys, solve(sys), out);
    for (std::size_t j = 1; j + 1 < g.ny(); ++j) {
        for (std::size_t i = 1; i + 1 < g.nx(); ++i) EXPECT_NEAR(out(i, j), 0.37, 1e-12);
    }
}

TEST(Solve, LinearFieldIsSteadyWithoutDrift) {
    const auto g = unit_grid(41);
    const MeshState s = initial_mesh(g);
    const LinearSystem sys = assemble(whole(g), s.xi, zero_drift(g), 1e-3, s.xi);
    ScalarField out = s.xi;
    scatter_interior(sys, solve(sys), out);
    EXPECT_LT(max_abs_diff(out, s.xi), 1e-10);
}

TEST(Solve, HeatModeConvergence) {
    // h halves and dt quarters: O(h^2) + O(dt) error drops about fourfold per level
    const double e1 = heat_error(11, 4e-3, 0.04);
    const double e2 = heat_error(21, 1e-3, 0.04);
    const double e3 = heat_error(41, 2.5e-4, 0.04);
    EXPECT_GT(e1 / e2, 3.5);
    EXPECT_GT(e2 / e3, 3.5);
    // leading terms: (lambda^2 dt t / 2 + lambda t pi^2 h^2 / 12) exp(-lambda t), lambda = 2 pi^2
    const double pi = std::numbers::pi, lambda = 2.0 * pi * pi, h = 1.0 / 40.0;
    const double predicted = (lambda * lambda * 2.5e-4 * 0.04 / 2.0 + lambda * 0.04 * pi * pi * h * h / 12.0) *
                             std::exp(-lambda * 0.04);
    EXPECT_NEAR(e3 / predicted, 1.0, 0.05);
}

TEST(Solve, SineModeDecaysByDiscreteEigenvalue) {
    // sin(pi x) sin(pi y) is an eigenvector of the 5-point Laplacian
    const auto g = unit_grid(21);
    const double pi = std::numbers::pi, h = 0.05, dt = 2e-3;
    const double lambda_h = 2.0 * 4.0 / (h * h) * std::pow(std::sin(pi * h / 2.0), 2);
    const ScalarField u0 = sampled(g, [&](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
    const LinearSystem sys = assemble(whole(g), u0, zero_drift(g), dt, ScalarField(g, 0.0));
    ScalarField u1(g, 0.0);
    scatter_interior(sys, solve(sys), u1);
    for (std::size_t k = 0; k < u0.values().size(); ++k) {
        EXPECT_NEAR(u1.values()[k], u0.values()[k] / (1.0 + dt * lambda_h), 1e-13);
    }
}

TEST(Solve, MaximumPrincipleWithoutDrift) {
    const auto g = unit_grid(31);
    const ScalarField f = sampled(g, [](double x, double y) { return std::sin(20 * x * y) * std::exp(x); });
    const LinearSystem sys = assemble(whole(g), f, zero_drift(g), 5e-3, f);
    ScalarField out = f;
    scatter_interior(sys, solve(sys), out);
    double lo = f.values()[0], hi = lo;
    for (double v : f.values()) lo = std::min(lo, v), hi = std::max(hi, v);
    for (double v : out.values()) {
        EXPECT_GE(v, lo - 1e-12);
        EXPECT_LE(v, hi + 1e-12);
    }
}

TEST(Step, UniformMonitorKeepsUniformMesh) {
    const auto g = unit_grid(41);
    const MonitorField m = sample_monitor(0.0, g, constant_density(1.0));
    const MeshState s = initial_mesh(g);
    const MeshState out = step_single_domain(s, drift_from_monitor(m), 1e-3, build_boundary_data(m));
    EXPECT_LT(max_abs_diff(out.xi, s.xi), 1e-10);
    EXPECT_LT(max_abs_diff(out.eta, s.eta), 1e-10);
    EXPECT_DOUBLE_EQ(out.t, 1e-3);
}

TEST(Step, PinnedSubdomainsReproduceSingleDomain) {
    const auto g = unit_grid(41);
    const MonitorField m = sample_monitor(0.0, g, RotatingRingParams{});
    const DriftField drift = drift_from_monitor(m);
    const BoundaryData bd = build_boundary_data(m);
    MeshState s = initial_mesh(g);
    for (int k = 0; k < 3; ++k) s = step_single_domain(s, drift, 1e-3, bd);
    const MeshState full = step_single_domain(s, drift, 1e-3, bd);

    // interface and boundary nodes copied from the full solve, interiors recomputed per subdomain
    const Partition p = partition_grid(g, 2, 2);
    MeshState dd = full;
    for (std::size_t j = 1; j + 1 < g.ny(); ++j) {
        for (std::size_t i = 1; i + 1 < g.nx(); ++i) {
            if (i != 20 && j != 20) dd.xi(i, j) = dd.eta(i, j) = -1.0;
        }
    }
    const MeshState pinned = dd;
    for (const auto& r : p.subdomains) step_subdomain(r, s, drift, 1e-3, pinned.xi, pinned.eta, dd);
    EXPECT_LT(max_abs_diff(dd.xi, full.xi), 1e-10);
    EXPECT_LT(max_abs_diff(dd.eta, full.eta), 1e-10);
}

TEST(Step, RingFirstStepIsFiniteAndOrdered) {
    const auto g = unit_grid(41);
    const MonitorField m = sample_monitor(0.0, g, RotatingRingParams{});
    const MeshState out = step_single_domain(initial_mesh(g), drift_from_monitor(m), 1e-3, build_boundary_data(m));
    EXPECT_TRUE(out.xi.all_finite());
    EXPECT_TRUE(out.eta.all_finite());
    for (std::size_t j = 0; j < g.ny(); ++j) {
        for (std::size_t i = 0; i + 1 < g.nx(); ++i) EXPECT_LT(out.xi(i, j), out.xi(i + 1, j));
    }
}

TEST(Step, BackwardEulerLocalOrder) {
    // one step of dt against two steps of dt/2 from smooth data that matches its Dirichlet values:
    // the gap shrinks like dt^2 once dt is small against h^2
    const auto g = unit_grid(21);
    const DriftField drift = drift_from_monitor(sample_monitor(0.0, g, RotatingRingParams{}));
    const double pi = std::numbers::pi;
    MeshState s0 = initial_mesh(g);
    s0.xi = sampled(g, [&](double x, double y) { return x + 0.1 * std::sin(pi * x) * std::sin(2 * pi * y); });
    auto step = [&](const MeshState& s, double dt) {
        MeshState out = s;
        step_subdomain(whole(g), s, drift, dt, s0.xi, s0.eta, out);
        return out;
    };
    auto gap = [&](double dt) { return max_abs_diff(step(s0, dt).xi, step(step(s0, dt / 2), dt / 2).xi); };
    const double ratio = gap(2e-5) / gap(1e-5);
    EXPECT_GT(ratio, 3.5);
    EXPECT_LT(ratio, 4.5);
}
