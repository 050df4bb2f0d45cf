// Euler-Maruyama paths of dX = b(X) dt + sqrt(2) dW over one mesh time step.
#pragma once

#include "stochmesh/geometry.hpp"
#include "stochmesh/monitor.hpp"
#include "stochmesh/rng.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace stochmesh {

struct PathConfig {
    double dt = 1e-3;
    int n_sub = 20;

    double dt_sub() const { return dt / n_sub; }

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("PathConfig: dt must be positive");
        if (n_sub < 1) throw std::invalid_argument("PathConfig: n_sub must be >= 1");
    }
};

struct PathOutcome {
    enum class Kind { Interior, Exited };
    Kind kind;
    Point endpoint;
    int substeps = 0;  // sub-steps taken, including the one that exited

    bool exited() const { return kind == Kind::Exited; }
};

/// Anything that yields the next Brownian increment for a given sub-step size.
template <class S>
concept IncrementSource = requires(S& s, double dt) {
    { s(dt) } -> std::convertible_to<Vec2>;
};

/// Adapts an RngStream to IncrementSource.
struct BrownianIncrements {
    RngStream& rng;
    Vec2 operator()(double dt_sub) { return brownian_increment(rng, dt_sub); }
};

/// Both drift components at p.
inline Vec2 interp_drift(const DriftField& drift, Point p) {
    return {interp_bilinear(drift.b1, p), interp_bilinear(drift.b2, p)};
}

inline Point em_substep(Point x, const DriftField& drift, double dt_sub, Vec2 dW) {
    const Vec2 b = interp_drift(drift, x);
    return {x.x + b.x * dt_sub + std::numbers::sqrt2 * dW.x,
            x.y + b.y * dt_sub + std::numbers::sqrt2 * dW.y};
}

/// First crossing of the segment from `inside` (strictly interior) to `outside`
/// with the rectangle boundary, snapped onto the boundary.
inline Point exit_point(const PhysicalDomain& d, Point inside, Point outside) {
    const double dx = outside.x - inside.x;
    const double dy = outside.y - inside.y;
    double s = 1.0;
    int edge = -1;  // 0 left, 1 right, 2 bottom, 3 top
    auto consider = [&](double frac, int e) {
        if (frac < s || edge < 0) {
            s = std::clamp(frac, 0.0, 1.0);
            edge = e;
        }
    };
    if (outside.x <= d.x_l) consider((d.x_l - inside.x) / dx, 0);
    if (outside.x >= d.x_r) consider((d.x_r - inside.x) / dx, 1);
    if (outside.y <= d.y_l) consider((d.y_l - inside.y) / dy, 2);
    if (outside.y >= d.y_u) consider((d.y_u - inside.y) / dy, 3);
    Point p{inside.x + s * dx, inside.y + s * dy};
    p.x = std::clamp(p.x, d.x_l, d.x_r);
    p.y = std::clamp(p.y, d.y_l, d.y_u);
    switch (edge) {
        case 0: p.x = d.x_l; break;
        case 1: p.x = d.x_r; break;
        case 2: p.y = d.y_l; break;
        case 3: p.y = d.y_u; break;
        default: break;
    }
    return p;
}

/// Runs cfg.n_sub Euler-Maruyama sub-steps from `start`, testing for exit after each.
template <IncrementSource Source>
PathOutcome simulate_path(Point start, const DriftField& drift, const PathConfig& cfg,
                          Source&& increments) {
    const auto& domain = drift.b1.grid().domain();
    if (!contains(domain, start)) {
        throw std::domain_error("simulate_path: start point must be strictly inside the domain");
    }
    const double dt_sub = cfg.dt_sub();
    Point x = start;
    for (int k = 1; k <= cfg.n_sub; ++k) {
        const Point next = em_substep(x, drift, dt_sub, increments(dt_sub));
        if (!contains(domain, next)) {
            return {PathOutcome::Kind::Exited, exit_point(domain, x, next), k};
        }
        x = next;
    }
    return {PathOutcome::Kind::Interior, x, cfg.n_sub};
}

inline PathOutcome simulate_path(Point start, const DriftField& drift, const PathConfig& cfg,
                                 RngStream& rng) {
    return simulate_path(start, drift, cfg, BrownianIncrements{rng});
}

}  // namespace stochmesh
