// Subdomain layout, stochastic interface-point selection and interface filling.
//
// Interfaces are whole grid lines at the split indices. The two line nodes on
// the physical boundary are not part of an interface's span: their values come
// from the boundary data and act as interpolation anchors. Where a vertical and
// a horizontal interface cross, the vertical interface owns the node.
#pragma once

#include "stochmesh/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stochmesh {

/// Inclusive node ranges [i0, i1] x [j0, j1]. Neighbours share one node line.
struct IndexRect {
    std::size_t i0, i1, j0, j1;

    std::size_t width() const { return i1 - i0 + 1; }
    std::size_t height() const { return j1 - j0 + 1; }
    bool on_edge(std::size_t i, std::size_t j) const { return i == i0 || i == i1 || j == j0 || j == j1; }

    friend bool operator==(const IndexRect&, const IndexRect&) = default;
};

enum class Orientation { Horizontal, Vertical };

struct InterfacePoint {
    enum class Kind { Stochastic, Interpolated };

    std::size_t i, j;
    Point coord;
    Kind kind = Kind::Interpolated;
    bool cross = false;  // lies on a perpendicular interface too
    bool owned = true;   // false for a cross point held by the vertical interface
    double value_xi = 0.0;
    double value_eta = 0.0;
};

struct Interface {
    Orientation orientation;
    std::size_t fixed;                 // j for horizontal lines, i for vertical lines
    std::size_t run_begin, run_end;    // running index span, inclusive, boundary nodes excluded
    std::vector<InterfacePoint> points;

    std::size_t line_length() const { return run_end + 2; }  // nodes including both boundary ends
};

struct Partition {
    std::size_t m, n;
    std::vector<std::size_t> x_splits;  // interior split indices along x (vertical lines)
    std::vector<std::size_t> y_splits;  // along y (horizontal lines)
    std::vector<IndexRect> subdomains;
    std::vector<Interface> interfaces;
};

namespace detail {

inline std::vector<std::size_t> split_points(std::size_t nodes, std::size_t parts, const char* axis) {
    std::vector<std::size_t> cuts{0};
    for (std::size_t k = 1; k < parts; ++k) {
        cuts.push_back(static_cast<std::size_t>(std::llround(static_cast<double>(k * (nodes - 1)) /
                                                             static_cast<double>(parts))));
    }
    cuts.push_back(nodes - 1);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (cuts[k + 1] - cuts[k] < 2) {
            throw std::invalid_argument(std::string("partition_grid: too few nodes along ") + axis +
                                        " for the requested split");
        }
    }
    return cuts;
}

}  // namespace detail

inline Partition partition_grid(const StructuredGrid& grid, std::size_t m, std::size_t n) {
    if (m < 1 || n < 1) throw std::invalid_argument("partition_grid: need m, n >= 1");
    const auto xc = detail::split_points(grid.nx(), m, "x");
    const auto yc = detail::split_points(grid.ny(), n, "y");

    Partition part{m, n, {}, {}, {}, {}};
    part.x_splits.assign(xc.begin() + 1, xc.end() - 1);
    part.y_splits.assign(yc.begin() + 1, yc.end() - 1);
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t a = 0; a < m; ++a) {
            part.subdomains.push_back({xc[a], xc[a + 1], yc[b], yc[b + 1]});
        }
    }

    auto is_x_split = [&](std::size_t i) {
        return std::find(part.x_splits.begin(), part.x_splits.end(), i) != part.x_splits.end();
    };
    auto is_y_split = [&](std::size_t j) {
        return std::find(part.y_splits.begin(), part.y_splits.end(), j) != part.y_splits.end();
    };

    for (std::size_t i : part.x_splits) {
        Interface f{Orientation::Vertical, i, 1, grid.ny() - 2, {}};
        for (std::size_t j = 1; j + 1 < grid.ny(); ++j) {
            InterfacePoint p{i, j, node_coords(grid, i, j)};
            p.cross = is_y_split(j);
            f.points.push_back(p);
        }
        part.interfaces.push_back(std::move(f));
    }
    for (std::size_t j : part.y_splits) {
        Interface f{Orientation::Horizontal, j, 1, grid.nx() - 2, {}};
        for (std::size_t i = 1; i + 1 < grid.nx(); ++i) {
            InterfacePoint p{i, j, node_coords(grid, i, j)};
            p.cross = is_x_split(i);
            p.owned = !p.cross;
            f.points.push_back(p);
        }
        part.interfaces.push_back(std::move(f));
    }
    return part;
}

/// Values of a field along an interface line, both boundary ends included.
inline std::vector<double> line_values(const Interface& iface, const ScalarField& f) {
    const auto& g = f.grid();
    std::vector<double> v;
    if (iface.orientation == Orientation::Horizontal) {
        for (std::size_t i = 0; i < g.nx(); ++i) v.push_back(f(i, iface.fixed));
    } else {
        for (std::size_t j = 0; j < g.ny(); ++j) v.push_back(f(iface.fixed, j));
    }
    return v;
}

namespace detail {

/// Indices k of strict local extrema of a[k] (sign change of the first difference).
inline std::vector<std::size_t> strict_extrema(std::span<const double> a) {
    std::vector<std::size_t> out;
    for (std::size_t k = 1; k + 1 < a.size(); ++k) {
        const double left = a[k] - a[k - 1];
        const double right = a[k + 1] - a[k];
        if ((left > 0.0 && right < 0.0) || (left < 0.0 && right > 0.0)) out.push_back(k);
    }
    return out;
}

}  // namespace detail

/// Minimum node separation between two stochastic points on one interface.
inline constexpr std::size_t kMinStochasticSpacing = 2;

/// Labels interface points as Stochastic or Interpolated.
///
/// The two span ends next to the physical boundary and all cross points are
/// always Stochastic. Further candidates are the nodes at strict local extrema of
/// the centred first and second derivatives of rho along the line, ranked by
/// |derivative| relative to that derivative's maximum on the line, until k points
/// are chosen. Candidates closer than kMinStochasticSpacing to a kept point are
/// dropped; a shortfall is filled with equispaced span nodes.
inline void select_stochastic_points(Interface& iface, const ScalarField& rho_field, std::size_t k) {
    if (k < 2) throw std::invalid_argument("select_stochastic_points: need k >= 2");
    const auto& g = rho_field.grid();
    const std::vector<double> r = line_values(iface, rho_field);
    const std::size_t len = r.size();
    const double h = iface.orientation == Orientation::Horizontal ? g.hx() : g.hy();

    // derivative arrays on line nodes 1..len-2 (stored at the same index)
    std::vector<double> d1(len, 0.0), d2(len, 0.0);
    for (std::size_t q = 1; q + 1 < len; ++q) {
        d1[q] = (r[q + 1] - r[q - 1]) / (2.0 * h);
        d2[q] = (r[q + 1] - 2.0 * r[q] + r[q - 1]) / (h * h);
    }

    struct Candidate {
        std::size_t node;
        double score;
        bool mandatory;
    };
    std::vector<Candidate> cands;
    if (len >= 3) {
        // span ends next to the physical boundary
        cands.push_back({1, 0.0, true});
        cands.push_back({len - 2, 0.0, true});
    }
    for (const auto& p : iface.points) {
        if (p.cross) {
            const std::size_t q = iface.orientation == Orientation::Horizontal ? p.i : p.j;
            cands.push_back({q, 0.0, true});
        }
    }
    auto add_extrema = [&](const std::vector<double>& d) {
        const std::span<const double> interior(d.data() + 1, len - 2);
        double dmax = 0.0;
        for (double v : interior) dmax = std::max(dmax, std::abs(v));
        if (dmax == 0.0) return;
        for (std::size_t e : detail::strict_extrema(interior)) {
            cands.push_back({e + 1, std::abs(d[e + 1]) / dmax, false});
        }
    };
    add_extrema(d1);
    add_extrema(d2);

    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.mandatory != b.mandatory) return a.mandatory;
        if (a.score != b.score) return a.score > b.score;
        return a.node < b.node;
    });

    std::vector<std::size_t> kept;
    auto far_enough = [&](std::size_t q) {
        for (std::size_t o : kept) {
            if ((q > o ? q - o : o - q) < kMinStochasticSpacing) return false;
        }
        return true;
    };
    for (const auto& c : cands) {
        if (c.mandatory) {
            if (std::find(kept.begin(), kept.end(), c.node) == kept.end()) kept.push_back(c.node);
            continue;
        }
        if (kept.size() >= k) break;
        if (c.node >= 1 && c.node + 1 < len && far_enough(c.node)) kept.push_back(c.node);
    }

    // pad with equispaced span nodes, then by bisecting the widest gap
    if (kept.size() < k && len >= 3) {
        const std::size_t span = len - 3;
        for (std::size_t l = 1; l + 1 < k && kept.size() < k; ++l) {
            const auto q = 1 + static_cast<std::size_t>(std::llround(static_cast<double>(l * span) /
                                                                     static_cast<double>(k - 1)));
            if (far_enough(q)) kept.push_back(q);
        }
        while (kept.size() < k) {
            std::vector<std::size_t> sorted = kept;
            std::sort(sorted.begin(), sorted.end());
            std::size_t best = 0, best_gap = 0;
            for (std::size_t a = 0; a + 1 < sorted.size(); ++a) {
                const std::size_t gap = sorted[a + 1] - sorted[a];
                if (gap > best_gap) {
                    best_gap = gap;
                    best = sorted[a] + gap / 2;
                }
            }
            if (best_gap < 2 * kMinStochasticSpacing) break;
            kept.push_back(best);
        }
    }

    for (auto& p : iface.points) {
        const std::size_t q = iface.orientation == Orientation::Horizontal ? p.i : p.j;
        const bool stochastic = std::find(kept.begin(), kept.end(), q) != kept.end();
        p.kind = stochastic ? InterfacePoint::Kind::Stochastic : InterfacePoint::Kind::Interpolated;
    }
}

enum class HermiteKind { Monotone, Classical };

/// Piecewise cubic Hermite interpolant through (xs, ys), xs strictly increasing.
/// Monotone slopes follow Fritsch-Butland with shape-preserving end slopes
/// (the PCHIP construction); classical slopes are centred secant averages.
class CubicHermite {
public:
    CubicHermite(std::vector<double> xs, std::vector<double> ys, HermiteKind kind = HermiteKind::Monotone)
        : xs_(std::move(xs)), ys_(std::move(ys)), slopes_(xs_.size(), 0.0) {
        const std::size_t n = xs_.size();
        if (n < 2 || ys_.size() != n) throw std::invalid_argument("CubicHermite: need >= 2 anchors");
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (!(xs_[k + 1] > xs_[k])) throw std::invalid_argument("CubicHermite: abscissae must increase");
        }
        std::vector<double> h(n - 1), del(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            h[k] = xs_[k + 1] - xs_[k];
            del[k] = (ys_[k + 1] - ys_[k]) / h[k];
        }
        if (n == 2) {
            slopes_[0] = slopes_[1] = del[0];
            return;
        }
        if (kind == HermiteKind::Classical) {
            for (std::size_t k = 1; k + 1 < n; ++k) {
                slopes_[k] = (h[k] * del[k - 1] + h[k - 1] * del[k]) / (h[k - 1] + h[k]);
            }
            slopes_[0] = del[0];
            slopes_[n - 1] = del[n - 2];
            return;
        }
        for (std::size_t k = 1; k + 1 < n; ++k) {
            if (del[k - 1] * del[k] <= 0.0) {
                slopes_[k] = 0.0;
            } else {
                const double w1 = 2.0 * h[k] + h[k - 1];
                const double w2 = h[k] + 2.0 * h[k - 1];
                slopes_[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
            }
        }
        slopes_[0] = end_slope(h[0], h[1], del[0], del[1]);
        slopes_[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    }

    double operator()(double x) const {
        const std::size_t n = xs_.size();
        auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        std::size_t k = it == xs_.begin() ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
        k = std::min(k, n - 2);
        const double h = xs_[k + 1] - xs_[k];
        const double t = (x - xs_[k]) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        const double h10 = t3 - 2.0 * t2 + t;
        const double h01 = -2.0 * t3 + 3.0 * t2;
        const double h11 = t3 - t2;
        return h00 * ys_[k] + h10 * h * slopes_[k] + h01 * ys_[k + 1] + h11 * h * slopes_[k + 1];
    }

    const std::vector<double>& slopes() const { return slopes_; }

private:
    static double end_slope(double h0, double h1, double del0, double del1) {
        double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
        if (d * del0 <= 0.0) {
            d = 0.0;
        } else if (del0 * del1 <= 0.0 && std::abs(d) > std::abs(3.0 * del0)) {
            d = 3.0 * del0;
        }
        return d;
    }

    std::vector<double> xs_, ys_, slopes_;
};

/// Anchor values at the two boundary ends of an interface line.
struct LineEnds {
    double xi_lo, xi_hi;
    double eta_lo, eta_hi;
};

/// Fills Interpolated points from the Stochastic ones and the two boundary ends.
/// Non-owned cross points must already carry the owner's values.
inline void fill_interface(Interface& iface, const StructuredGrid& grid, const LineEnds& ends,
                           HermiteKind kind = HermiteKind::Monotone) {
    const bool horizontal = iface.orientation == Orientation::Horizontal;
    const auto& d = grid.domain();
    std::vector<double> xs{horizontal ? d.x_l : d.y_l};
    std::vector<double> vx{ends.xi_lo}, ve{ends.eta_lo};
    for (const auto& p : iface.points) {
        if (p.kind != InterfacePoint::Kind::Stochastic) continue;
        xs.push_back(horizontal ? p.coord.x : p.coord.y);
        vx.push_back(p.value_xi);
        ve.push_back(p.value_eta);
    }
    xs.push_back(horizontal ? d.x_r : d.y_u);
    vx.push_back(ends.xi_hi);
    ve.push_back(ends.eta_hi);

    const CubicHermite fx(xs, vx, kind), fe(xs, ve, kind);
    for (auto& p : iface.points) {
        if (p.kind == InterfacePoint::Kind::Stochastic) continue;
        const double s = horizontal ? p.coord.x : p.coord.y;
        p.value_xi = fx(s);
        p.value_eta = fe(s);
    }
}

}  // namespace stochmesh
