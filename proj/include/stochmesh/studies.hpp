// Monte Carlo convergence experiment on the driftless problem.
#pragma once

#include "stochmesh/boundary.hpp"
#include "stochmesh/fk.hpp"
#include "stochmesh/monitor.hpp"
#include "stochmesh/quality.hpp"

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace stochmesh {

struct McStudyConfig {
    std::size_t n_grid = 41;
    PathConfig path{1e-3, 20};
    Point point{0.5, 0.5};
    std::vector<std::size_t> path_counts{100, 1000, 10000};
    std::size_t seeds = 32;
    std::uint64_t base_seed = 1;
};

struct McStudyRow {
    std::size_t n_paths;
    double rms_error;        // over seeds, against the exact value point.x
    double mean_std_error;   // average reported standard error
};

struct McStudyResult {
    std::vector<McStudyRow> rows;
    double slope;
};

/// With w = 1 and xi^n = x the single-step estimator is unbiased for point.x.
inline McStudyResult run_mc_study(const McStudyConfig& cfg) {
    const StructuredGrid grid(PhysicalDomain::unit_square(), cfg.n_grid, cfg.n_grid);
    const MonitorField w = sample_monitor(0.0, grid, constant_density(1.0));
    const DriftField drift = drift_from_monitor(w);
    const BoundaryData bd = build_boundary_data(w);
    const MeshState uniform = initial_mesh(grid);

    McStudyResult res{{}, 0.0};
    std::vector<std::pair<double, double>> samples;
    for (std::size_t idx = 0; idx < cfg.path_counts.size(); ++idx) {
        const std::size_t n = cfg.path_counts[idx];
        double sq = 0.0, se = 0.0;
        for (std::size_t s = 0; s < cfg.seeds; ++s) {
            const EstimationContext ctx{drift, bd, cfg.path, cfg.base_seed + idx * cfg.seeds + s, 0};
            const PointEstimate e = estimate_point(cfg.point, uniform.xi, Field::Xi, ctx, n);
            sq += (e.mean - cfg.point.x) * (e.mean - cfg.point.x);
            se += e.std_error;
        }
        const double rms = std::sqrt(sq / static_cast<double>(cfg.seeds));
        res.rows.push_back({n, rms, se / static_cast<double>(cfg.seeds)});
        samples.emplace_back(static_cast<double>(n), rms);
    }
    res.slope = mc_rate(samples);
    return res;
}

}  // namespace stochmesh
