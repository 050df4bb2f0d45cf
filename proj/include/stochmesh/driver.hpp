// Time stepping of the hybrid stochastic / deterministic mesh generator.
//
// One step from t^n:
//   1. freeze the monitor w at t^n (or t^{n+1}) and form the drift
//   2. rebuild the boundary data from the frozen monitor
//   3. pick stochastic points on every interface from the frozen rho
//   4. Monte Carlo estimates of xi, eta at those points
//   5. monotone Hermite fill of the remaining interface nodes
//   6. independent backward-Euler solves on every subdomain
#pragma once

#include "stochmesh/boundary.hpp"
#include "stochmesh/ddlayout.hpp"
#include "stochmesh/fk.hpp"
#include "stochmesh/geometry.hpp"
#include "stochmesh/monitor.hpp"
#include "stochmesh/parallel.hpp"
#include "stochmesh/subsolver.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace stochmesh {

enum class FreezeEpoch { Start, End };
enum class RunMode { DomainDecomposition, SingleDomain };

struct RunConfig {
    PhysicalDomain domain{};
    std::size_t nx = 41;
    std::size_t ny = 41;
    std::size_t sub_x = 2;  // subdomains along x
    std::size_t sub_y = 2;  // subdomains along y
    RotatingRingParams ring{};
    double dt = 1e-3;
    double t_end = 0.75;
    int n_sub = 20;
    std::size_t n_paths = 10000;
    std::size_t points_per_interface = 8;
    std::uint64_t seed = 42;
    FreezeEpoch freeze = FreezeEpoch::Start;
    std::vector<double> output_times{0.25, 0.5, 0.75};
    RunMode mode = RunMode::DomainDecomposition;
    bool shared_paths = false;
    HermiteKind hermite = HermiteKind::Monotone;
    unsigned workers = 1;
    /// Overrides the rotating ring when set (not part of the fingerprint).
    DensityFunction density;

    StructuredGrid grid() const { return StructuredGrid(domain, nx, ny); }
    DensityFunction density_function() const { return density ? density : rotating_ring(ring); }
    PathConfig path() const { return {dt, n_sub}; }

    std::size_t step_count() const {
        return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const {
        auto fail = [](const std::string& key, const std::string& why) {
            throw std::invalid_argument(key + ": " + why);
        };
        if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt", "must be positive");
        if (!(t_end >= 0.0) || !std::isfinite(t_end)) fail("t_end", "must be non-negative");
        if (nx < 3) fail("nx", "must be >= 3");
        if (ny < 3) fail("ny", "must be >= 3");
        if (sub_x < 1 || sub_y < 1) fail("subdomains", "counts must be >= 1");
        if (n_sub < 1) fail("n_sub", "must be >= 1");
        if (n_paths < 1) fail("n_paths", "must be >= 1");
        if (points_per_interface < 2) fail("points_per_interface", "must be >= 2");
        if (ring.alpha < 0.0) fail("alpha", "must be >= 0");
        for (double t : output_times) {
            const double k = t / dt;
            if (t < 0.0 || t > t_end + 1e-12 || std::abs(k - std::round(k)) > 1e-6) {
                fail("snapshot_times", "entries must be multiples of dt within [0, t_end]");
            }
        }
    }
};

/// Stable 64-bit FNV-1a fingerprint of the numerical configuration, as hex.
inline std::string config_fingerprint(const RunConfig& c) {
    std::ostringstream s;
    s.precision(17);
    s << c.domain.x_l << ',' << c.domain.x_r << ',' << c.domain.y_l << ',' << c.domain.y_u << ';' << c.nx
      << ',' << c.ny << ';' << c.sub_x << ',' << c.sub_y << ';' << c.ring.alpha << ',' << c.ring.beta << ';'
      << c.dt << ',' << c.t_end << ',' << c.n_sub << ',' << c.n_paths << ',' << c.points_per_interface
      << ';' << c.seed << ';' << static_cast<int>(c.freeze) << static_cast<int>(c.mode)
      << static_cast<int>(c.shared_paths) << static_cast<int>(c.hermite);
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char ch : s.str()) {
        h ^= ch;
        h *= 0x100000001B3ull;
    }
    std::ostringstream hex;
    hex << std::hex;
    hex.width(16);
    hex.fill('0');
    hex << h;
    return hex.str();
}

/// Error raised by a pipeline stage, carrying the stage name.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

struct StageTimings {
    std::map<std::string, double> seconds;
    void add(const StageTimings& o) {
        for (const auto& [k, v] : o.seconds) seconds[k] += v;
    }
};

struct StepResult {
    MeshState state;
    std::vector<Point> stochastic_points;
    double max_std_error = 0.0;
    StageTimings timings;
};

struct MeshSnapshot {
    MeshState state;
    std::vector<Point> stochastic_points;
    std::vector<std::size_t> x_splits;
    std::vector<std::size_t> y_splits;
    std::uint64_t seed = 0;
    std::string config_hash;
};

struct RunResult {
    std::vector<MeshSnapshot> snapshots;
    double max_std_error = 0.0;
    std::size_t steps = 0;
    StageTimings timings;
};

class MeshGenerator {
public:
    explicit MeshGenerator(RunConfig cfg)
        : cfg_(validated(std::move(cfg))), grid_(cfg_.grid()), density_(cfg_.density_function()),
          partition_(make_partition()) {}

    const RunConfig& config() const { return cfg_; }
    const StructuredGrid& grid() const { return grid_; }
    const Partition& partition() const { return partition_; }

    /// Monitor, drift and boundary data frozen for the step starting at time t.
    struct Frozen {
        MonitorField monitor;
        DriftField drift;
        BoundaryData boundary;
    };

    Frozen freeze(double t) const {
        const double tf = cfg_.freeze == FreezeEpoch::Start ? t : t + cfg_.dt;
        MonitorField m = sample_monitor(tf, grid_, density_);
        DriftField b = drift_from_monitor(m);
        BoundaryData bd = build_boundary_data(m);
        return {std::move(m), std::move(b), std::move(bd)};
    }

    /// Advances `state` by one time step; `step_index` selects the random streams.
    StepResult step(const MeshState& state, std::uint64_t step_index) const {
        return advance(state, step_index, nullptr);
    }

    /// As step(), but interface values are copied from `pinned` instead of being estimated.
    StepResult step_pinned(const MeshState& state, const MeshState& pinned) const {
        return advance(state, 0, &pinned);
    }

    /// Runs from the uniform mesh to t_end; `on_snapshot` sees each snapshot as it is taken.
    RunResult run(const std::function<void(const MeshSnapshot&)>& on_snapshot = {}) const {
        RunResult result;
        const std::string hash = config_fingerprint(cfg_);
        auto capture = [&](const MeshState& s, const std::vector<Point>& pts) {
            MeshSnapshot snap{s, pts, partition_.x_splits, partition_.y_splits, cfg_.seed, hash};
            if (on_snapshot) on_snapshot(snap);
            result.snapshots.push_back(std::move(snap));
        };
        auto wanted = [&](std::size_t k) {
            for (double t : cfg_.output_times) {
                if (std::llround(t / cfg_.dt) == static_cast<long long>(k)) return true;
            }
            return false;
        };

        MeshState state = initial_mesh(grid_);
        const std::size_t steps = cfg_.step_count();
        if (steps == 0 || wanted(0)) capture(state, {});
        for (std::size_t k = 1; k <= steps; ++k) {
            StepResult r = step(state, k - 1);
            r.state.t = static_cast<double>(k) * cfg_.dt;
            state = std::move(r.state);
            result.max_std_error = std::max(result.max_std_error, r.max_std_error);
            result.timings.add(r.timings);
            if (wanted(k)) capture(state, r.stochastic_points);
        }
        result.steps = steps;
        return result;
    }

private:
    static RunConfig validated(RunConfig c) {
        c.validate();
        return c;
    }

    Partition make_partition() const {
        if (cfg_.mode == RunMode::SingleDomain) return partition_grid(grid_, 1, 1);
        return partition_grid(grid_, cfg_.sub_x, cfg_.sub_y);
    }

    template <class F>
    static auto timed(StageTimings& tm, const char* stage, F&& f) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            if constexpr (std::is_void_v<decltype(f())>) {
                f();
                tm.seconds[stage] += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            } else {
                auto r = f();
                tm.seconds[stage] += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                return r;
            }
        } catch (const StageError&) {
            throw;
        } catch (const std::exception& e) {
            throw StageError(stage, e.what());
        }
    }

    StepResult advance(const MeshState& state, std::uint64_t step_index, const MeshState* pinned) const {
        StepResult res{state, {}, 0.0, {}};
        auto& tm = res.timings;
        const Frozen fr = timed(tm, "monitor", [&] { return freeze(state.t); });

        if (partition_.interfaces.empty()) {
            res.state = timed(tm, "solve", [&] {
                return step_single_domain(state, fr.drift, cfg_.dt, fr.boundary);
            });
            return res;
        }

        std::vector<Interface> ifaces = partition_.interfaces;
        timed(tm, "select", [&] {
            const ScalarField rho_field = fr.monitor.density();
            for (auto& f : ifaces) select_stochastic_points(f, rho_field, cfg_.points_per_interface);
        });

        // stochastic points owned by some interface, in interface order
        std::vector<InterfacePoint*> owned;
        for (auto& f : ifaces) {
            for (auto& p : f.points) {
                if (p.owned && p.kind == InterfacePoint::Kind::Stochastic) owned.push_back(&p);
            }
        }
        for (const auto* p : owned) res.stochastic_points.push_back(p->coord);

        timed(tm, "stochastic", [&] {
            if (pinned != nullptr) {
                for (auto* p : owned) {
                    p->value_xi = pinned->xi(p->i, p->j);
                    p->value_eta = pinned->eta(p->i, p->j);
                }
                return;
            }
            const EstimationContext ctx{fr.drift, fr.boundary, cfg_.path(), cfg_.seed, step_index};
            std::vector<EstimateTarget> tx, te;
            for (const auto* p : owned) {
                const std::uint64_t node = grid_.index(p->i, p->j);
                tx.push_back({p->coord, 2 * node});
                te.push_back({p->coord, 2 * node + 1});
            }
            std::vector<PointEstimate> ex, ee;
            if (cfg_.shared_paths) {
                for (const auto& pe : estimate_many_shared(tx, state.xi, state.eta, ctx, cfg_.n_paths, cfg_.workers)) {
                    ex.push_back(pe.xi);
                    ee.push_back(pe.eta);
                }
            } else {
                ex = estimate_many(tx, state.xi, Field::Xi, ctx, cfg_.n_paths, cfg_.workers);
                ee = estimate_many(te, state.eta, Field::Eta, ctx, cfg_.n_paths, cfg_.workers);
            }
            for (std::size_t k = 0; k < owned.size(); ++k) {
                owned[k]->value_xi = ex[k].mean;
                owned[k]->value_eta = ee[k].mean;
                res.max_std_error = std::max({res.max_std_error, ex[k].std_error, ee[k].std_error});
            }
        });

        MeshState target = state;
        timed(tm, "fill", [&] {
            // cross points: copy the owner's values into the other interfaces
            std::map<std::size_t, std::pair<double, double>> owner_values;
            for (const auto* p : owned) owner_values[grid_.index(p->i, p->j)] = {p->value_xi, p->value_eta};
            for (auto& f : ifaces) {
                for (auto& p : f.points) {
                    if (!p.owned) {
                        const auto& v = owner_values.at(grid_.index(p.i, p.j));
                        p.value_xi = v.first;
                        p.value_eta = v.second;
                    }
                }
            }
            const std::size_t nx = grid_.nx(), ny = grid_.ny();
            for (auto& f : ifaces) {
                LineEnds ends{};
                const bool h = f.orientation == Orientation::Horizontal;
                const std::size_t lo_i = h ? 0 : f.fixed, lo_j = h ? f.fixed : 0;
                const std::size_t hi_i = h ? nx - 1 : f.fixed, hi_j = h ? f.fixed : ny - 1;
                ends.xi_lo = fr.boundary.node_value(Field::Xi, lo_i, lo_j);
                ends.xi_hi = fr.boundary.node_value(Field::Xi, hi_i, hi_j);
                ends.eta_lo = fr.boundary.node_value(Field::Eta, lo_i, lo_j);
                ends.eta_hi = fr.boundary.node_value(Field::Eta, hi_i, hi_j);
                if (pinned == nullptr) {
                    fill_interface(f, grid_, ends, cfg_.hermite);
                } else {
                    for (auto& p : f.points) {
                        p.value_xi = pinned->xi(p.i, p.j);
                        p.value_eta = pinned->eta(p.i, p.j);
                    }
                }
            }
            fr.boundary.apply(target);
            for (const auto& f : ifaces) {
                for (const auto& p : f.points) {
                    target.xi(p.i, p.j) = p.value_xi;
                    target.eta(p.i, p.j) = p.value_eta;
                }
            }
        });

        res.state = target;
        res.state.t = state.t + cfg_.dt;
        timed(tm, "solve", [&] {
            parallel_for(partition_.subdomains.size(), cfg_.workers, [&](std::size_t s) {
                step_subdomain(partition_.subdomains[s], state, fr.drift, cfg_.dt, target.xi, target.eta,
                               res.state);
            });
        });
        return res;
    }

    RunConfig cfg_;
    StructuredGrid grid_;
    DensityFunction density_;
    Partition partition_;
};

}  // namespace stochmesh
