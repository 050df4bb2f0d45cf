// Monte Carlo evaluation of the single-step Feynman-Kac representation
//
//   u^{n+1}(p) = E[ u^n(X(t^{n+1})) 1{no exit} ] + E[ f(X(tau)) 1{exit} ]
//
// where X solves dX = b dt + sqrt(2) dW from p over one time step, u^n is
// evaluated by bilinear interpolation and f is the boundary data.
#pragma once

#include "stochmesh/boundary.hpp"
#include "stochmesh/geometry.hpp"
#include "stochmesh/monitor.hpp"
#include "stochmesh/parallel.hpp"
#include "stochmesh/rng.hpp"
#include "stochmesh/sde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace stochmesh {

struct PointEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::size_t n_exited = 0;
    double sample_min = 0.0;
    double sample_max = 0.0;
};

/// Read-only inputs shared by every path of one time step.
struct EstimationContext {
    const DriftField& drift;
    const BoundaryData& boundary;
    PathConfig path;
    std::uint64_t seed = 0;
    std::uint64_t step = 0;
};

/// Paths are simulated and reduced in fixed blocks of this size.
inline constexpr std::size_t kPathBlock = 512;

namespace detail {

/// Welford accumulator with Chan's pairwise merge.
struct Moments {
    std::size_t n = 0;
    std::size_t exited = 0;
    double mean = 0.0;
    double m2 = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        ++n;
        const double delta = v - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (v - mean);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    void merge(const Moments& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
        const double delta = o.mean - mean;
        const double total = na + nb;
        mean += delta * nb / total;
        m2 += o.m2 + delta * delta * na * nb / total;
        n += o.n;
        exited += o.exited;
        lo = std::min(lo, o.lo);
        hi = std::max(hi, o.hi);
    }

    PointEstimate finish() const {
        PointEstimate e;
        e.n_paths = n;
        e.n_exited = exited;
        // keep the mean inside the sample range despite rounding in the running update
        e.mean = std::clamp(mean, lo, hi);
        e.std_error = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
        e.sample_min = lo;
        e.sample_max = hi;
        return e;
    }
};

/// Contribution of one path outcome to the estimate of `field_n`.
inline double contribution(const PathOutcome& out, const ScalarField& field_n, Field which,
                           const BoundaryData& bd) {
    return out.exited() ? eval_boundary(bd, which, out.endpoint)
                        : interp_bilinear(field_n, out.endpoint);
}

/// Simulates paths [begin, end) of stream `stream` and accumulates one or two fields.
inline void accumulate_block(Point p, std::uint64_t stream, std::size_t begin, std::size_t end,
                             const EstimationContext& ctx, const ScalarField& field_a, Field which_a,
                             Moments& acc_a, const ScalarField* field_b, Field which_b, Moments* acc_b) {
    for (std::size_t path = begin; path < end; ++path) {
        RngStream rng(ctx.seed, ctx.step, StreamId{stream, static_cast<std::uint32_t>(path)});
        const PathOutcome out = simulate_path(p, ctx.drift, ctx.path, rng);
        acc_a.add(contribution(out, field_a, which_a, ctx.boundary));
        if (out.exited()) ++acc_a.exited;
        if (acc_b != nullptr) {
            acc_b->add(contribution(out, *field_b, which_b, ctx.boundary));
            if (out.exited()) ++acc_b->exited;
        }
    }
}

inline std::size_t block_count(std::size_t n_paths) { return (n_paths + kPathBlock - 1) / kPathBlock; }

inline void check_paths(std::size_t n_paths) {
    if (n_paths == 0) throw std::invalid_argument("Monte Carlo estimate needs n_paths >= 1");
}

}  // namespace detail

/// A point to estimate together with the id of its random stream.
struct EstimateTarget {
    Point p;
    std::uint64_t stream = 0;
};

/// Estimates every target for one field. Work is split into (target, path block)
/// tasks and reduced in block order, so the result is independent of `workers`.
inline std::vector<PointEstimate> estimate_many(std::span<const EstimateTarget> targets,
                                                const ScalarField& field_n, Field which,
                                                const EstimationContext& ctx, std::size_t n_paths,
                                                unsigned workers = 1) {
    detail::check_paths(n_paths);
    ctx.path.validate();
    const std::size_t blocks = detail::block_count(n_paths);
    std::vector<detail::Moments> partial(targets.size() * blocks);
    parallel_for(partial.size(), workers, [&](std::size_t task) {
        const std::size_t t = task / blocks, b = task % blocks;
        const std::size_t begin = b * kPathBlock, end = std::min(n_paths, begin + kPathBlock);
        detail::accumulate_block(targets[t].p, targets[t].stream, begin, end, ctx, field_n, which,
                                 partial[task], nullptr, which, nullptr);
    });
    std::vector<PointEstimate> out;
    out.reserve(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t) {
        detail::Moments total;
        for (std::size_t b = 0; b < blocks; ++b) total.merge(partial[t * blocks + b]);
        out.push_back(total.finish());
    }
    return out;
}

inline PointEstimate estimate_point(Point p, const ScalarField& field_n, Field which,
                                    const EstimationContext& ctx, std::size_t n_paths,
                                    std::uint64_t stream = 0) {
    const EstimateTarget target{p, stream};
    return estimate_many(std::span(&target, 1), field_n, which, ctx, n_paths, 1).front();
}

/// Estimate from `n_paths` outcomes produced by `simulate(path_index)`, reduced
/// in blocks exactly as estimate_many does.
template <class Simulate>
PointEstimate estimate_point_with(const ScalarField& field_n, Field which, const BoundaryData& bd,
                                  std::size_t n_paths, Simulate&& simulate) {
    detail::check_paths(n_paths);
    detail::Moments total;
    for (std::size_t begin = 0; begin < n_paths; begin += kPathBlock) {
        detail::Moments block;
        for (std::size_t path = begin; path < std::min(n_paths, begin + kPathBlock); ++path) {
            const PathOutcome out = simulate(path);
            block.add(detail::contribution(out, field_n, which, bd));
            if (out.exited()) ++block.exited;
        }
        total.merge(block);
    }
    return total.finish();
}

struct PairEstimate {
    PointEstimate xi;
    PointEstimate eta;
};

/// Estimates xi and eta from one shared path ensemble per target.
inline std::vector<PairEstimate> estimate_many_shared(std::span<const EstimateTarget> targets,
                                                      const ScalarField& xi_n, const ScalarField& eta_n,
                                                      const EstimationContext& ctx, std::size_t n_paths,
                                                      unsigned workers = 1) {
    detail::check_paths(n_paths);
    ctx.path.validate();
    const std::size_t blocks = detail::block_count(n_paths);
    std::vector<detail::Moments> part_xi(targets.size() * blocks), part_eta(targets.size() * blocks);
    parallel_for(part_xi.size(), workers, [&](std::size_t task) {
        const std::size_t t = task / blocks, b = task % blocks;
        const std::size_t begin = b * kPathBlock, end = std::min(n_paths, begin + kPathBlock);
        detail::accumulate_block(targets[t].p, targets[t].stream, begin, end, ctx, xi_n, Field::Xi,
                                 part_xi[task], &eta_n, Field::Eta, &part_eta[task]);
    });
    std::vector<PairEstimate> out;
    out.reserve(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t) {
        detail::Moments mx, me;
        for (std::size_t b = 0; b < blocks; ++b) {
            mx.merge(part_xi[t * blocks + b]);
            me.merge(part_eta[t * blocks + b]);
        }
        out.push_back({mx.finish(), me.finish()});
    }
    return out;
}

}  // namespace stochmesh
