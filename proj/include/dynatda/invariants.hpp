#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "complexes.hpp"
#include "dms.hpp"
#include "grid_function.hpp"
#include "interval_min.hpp"
#include "parallel.hpp"
#include "persistence_diagram.hpp"
#include "scale_axis.hpp"
#include "union_find.hpp"

namespace dynatda {

/// Single-linkage merge heights (minimum spanning tree edge weights), ascending.
inline std::vector<double> merge_heights(const DistanceMatrix& d) {
    const std::size_t n = d.size();
    std::vector<double> out;
    if (n < 2) return out;
    out.reserve(n - 1);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(n, inf);
    std::vector<char> done(n, 0);
    std::size_t cur = 0;
    done[0] = 1;
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t next = n;
        for (std::size_t v = 0; v < n; ++v) {
            if (done[v]) continue;
            best[v] = std::min(best[v], d(cur, v));
            if (next == n || best[v] < best[next]) next = v;
        }
        out.push_back(best[next]);
        done[next] = 1;
        cur = next;
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Component counts at every grid scale from sorted merge heights.
inline void betti0_from_heights(const std::vector<double>& heights, std::size_t n, const ScaleAxis& scale,
                                ExtCount* out) {
    std::size_t merged = 0;
    for (std::size_t m = 0; m < scale.count; ++m) {
        const double th = scale.threshold(std::ptrdiff_t(m));
        while (merged < heights.size() && heights[merged] <= th) ++merged;
        out[m] = ExtCount(ExtCount::value_type(th < 0.0 ? 0 : n - merged));
    }
}

struct Betti0Options {
    double unit_ratio = 2.0;
    std::size_t threads = 0;
    IndexOptions index;
};

namespace detail {

inline void check_unit_ratio(const TimeGrid& g, const ScaleAxis& s, double ratio) {
    if (!(ratio > 0.0)) throw config_error("unit ratio must be positive");
    if (std::abs(s.step - ratio * g.step) > 1e-9 * s.step) {
        std::ostringstream os;
        os.precision(17);
        os << "scale step " << s.step << " must equal unit ratio " << ratio << " times time step " << g.step;
        throw config_error(os.str());
    }
}

inline double max_slice_merge_height(const SampledDMS& dms) {
    double h = 0.0;
    for (std::size_t k = 0; k < dms.count(); ++k) {
        auto hs = merge_heights(dms.slice(k));
        if (!hs.empty()) h = std::max(h, hs.back());
    }
    return h;
}

inline std::vector<GridAxis> interval_axes(const TimeGrid& g, double ratio) {
    GridAxis left{"t_start", g.t0, g.step, g.count, Orientation::decreasing, ratio, Extension::clamp};
    GridAxis right{"t_end", g.t0, g.step, g.count, Orientation::increasing, ratio, Extension::clamp};
    return {left, right};
}

}  // namespace detail

/// Number of connected components of the Rips complex on the interval-min
/// semi-metric, on cells (k1 <= k2, m). Axes: t_start (decreasing), t_end, delta.
inline GridFunction betti0_grid(const SampledDMS& dms, const ScaleAxis& scale, const Betti0Options& opts = {}) {
    scale.validate();
    detail::check_unit_ratio(dms.grid(), scale, opts.unit_ratio);
    if (scale.origin != 0.0) throw config_error("betti0 scale axis must start at 0");
    const double reach = detail::max_slice_merge_height(dms);
    if (!(reach <= scale.threshold(std::ptrdiff_t(scale.count) - 1))) {
        std::ostringstream os;
        os << "scale axis tops out at " << scale.top() << " but single-sample merges reach " << reach;
        throw config_error(os.str());
    }
    const std::size_t T = dms.count(), S = scale.count, n = dms.size();
    auto axes = detail::interval_axes(dms.grid(), opts.unit_ratio);
    axes.push_back(GridAxis{"delta", scale.origin, scale.step, S, Orientation::increasing, 1.0, Extension::clamp});
    GridFunction g(std::move(axes));
    g.set_interval_domain(0, 1);
    g.metadata = {{"invariant", "betti0"}, {"unit_ratio", opts.unit_ratio}, {"points", n}};

    IntervalMinIndex index(dms, opts.index);
    const std::size_t P = index.pair_count();
    ExtCount* base = &g.at_flat(0);
    parallel_for(T, opts.threads, [&](std::size_t k1) {
        DistanceMatrix m(n);
        std::vector<double> mins(P), single(P);
        for (std::size_t k2 = k1; k2 < T; ++k2) {
            if (index.streaming()) {
                index.pair_minima(k2, k2, single);
                if (k2 == k1)
                    mins = single;
                else
                    for (std::size_t p = 0; p < P; ++p) mins[p] = std::min(mins[p], single[p]);
            } else {
                index.pair_minima(k1, k2, mins);
            }
            std::size_t p = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, mins[p++]);
            betti0_from_heights(merge_heights(m), n, scale, base + (k1 * T + k2) * S);
        }
    });
    return g;
}

/// Betti numbers of single-sample Rips complexes on the time x scale plane.
inline GridFunction crocker(const SampledDMS& dms, std::size_t k, const ScaleAxis& scale, std::size_t threads = 0) {
    scale.validate();
    const std::size_t T = dms.count(), S = scale.count, n = dms.size();
    const auto& tg = dms.grid();
    GridFunction g({GridAxis{"t", tg.t0, tg.step, T, Orientation::increasing, 1.0, Extension::clamp},
                    GridAxis{"delta", scale.origin, scale.step, S, Orientation::increasing, 1.0, Extension::clamp}});
    g.metadata = {{"invariant", "crocker"}, {"k", k}, {"order_reversing", false}};
    ExtCount* base = &g.at_flat(0);
    parallel_for(T, threads, [&](std::size_t t) {
        const DistanceMatrix s = dms.slice(t);
        if (k == 0) {
            betti0_from_heights(merge_heights(s), n, scale, base + t * S);
            return;
        }
        for (std::size_t m = 0; m < S; ++m) {
            auto c = rips_slice(s, scale.threshold(std::ptrdiff_t(m)), k);
            base[t * S + m] = ExtCount(ExtCount::value_type(betti(c, k)));
        }
    });
    return g;
}

struct Merge {
    double height = 0.0;
    std::vector<std::size_t> left, right;
};

struct SlhcResult {
    DistanceMatrix ultrametric;
    std::vector<Merge> merges;
    PersistenceDiagram diagram;
};

/// Single-linkage clustering: ultrametric, merge sequence and H0 diagram.
inline SlhcResult slhc(const DistanceMatrix& d) {
    d.validate();
    const std::size_t n = d.size();
    struct Edge {
        double w;
        std::size_t i, j;
    };
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({d(i, j), i, j});
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.w != b.w) return a.w < b.w;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    SlhcResult out{DistanceMatrix(n), {}, {}};
    DisjointSet ds(n);
    std::vector<std::vector<std::size_t>> members(n);
    for (std::size_t i = 0; i < n; ++i) members[i] = {i};
    if (n > 0) out.diagram.points.push_back({0.0, std::numeric_limits<double>::infinity()});
    for (const auto& e : edges) {
        std::size_t a = ds.find(e.i), b = ds.find(e.j);
        if (a == b) continue;
        for (auto u : members[a])
            for (auto v : members[b]) out.ultrametric.set(u, v, e.w);
        Merge mg{e.w, members[a], members[b]};
        if (mg.left.front() > mg.right.front()) std::swap(mg.left, mg.right);
        ds.unite(a, b);
        std::size_t r = ds.find(a);
        std::vector<std::size_t> joined;
        std::merge(members[a].begin(), members[a].end(), members[b].begin(), members[b].end(),
                   std::back_inserter(joined));
        members[a].clear();
        members[b].clear();
        members[r] = std::move(joined);
        out.merges.push_back(std::move(mg));
        out.diagram.points.push_back({0.0, e.w});
    }
    return out;
}

/// Component counts of the Rips filtration of one metric.
inline GridFunction static_betti0(const DistanceMatrix& d, const ScaleAxis& scale) {
    scale.validate();
    d.validate();
    if (scale.origin != 0.0) throw config_error("betti0 scale axis must start at 0");
    auto hs = merge_heights(d);
    if (!hs.empty() && !(hs.back() <= scale.threshold(std::ptrdiff_t(scale.count) - 1)))
        throw config_error("scale axis does not reach the last merge");
    GridFunction g({GridAxis{"delta", scale.origin, scale.step, scale.count, Orientation::increasing, 1.0,
                             Extension::clamp}});
    g.metadata = {{"invariant", "betti0"}};
    betti0_from_heights(hs, d.size(), scale, &g.at_flat(0));
    return g;
}

/// rank(H_k(R_delta) -> H_k(R_delta')) on the (delta decreasing, delta' increasing) plane;
/// infinite where delta > delta', zero where delta < 0.
inline GridFunction static_rank(const DistanceMatrix& d, std::size_t k, const ScaleAxis& scale) {
    scale.validate();
    d.validate();
    const auto m0 = scale.zero_index();
    const std::size_t S = scale.count;
    const double need = k == 0 ? (d.size() > 1 ? merge_heights(d).back() : 0.0) : d.max_entry();
    if (!(need <= scale.threshold(std::ptrdiff_t(S) - 1))) throw config_error("scale axis does not cover the metric");
    GridFunction g({GridAxis{"delta", scale.origin, scale.step, S, Orientation::decreasing, 1.0, Extension::zero},
                    GridAxis{"delta_prime", scale.origin, scale.step, S, Orientation::increasing, 1.0,
                             Extension::clamp}});
    g.metadata = {{"invariant", "rank"}, {"k", k}};
    std::vector<SimplicialComplexSlice> cx;
    for (std::size_t m = 0; m < S; ++m) cx.push_back(rips_slice(d, scale.threshold(std::ptrdiff_t(m)), k));
    for (std::size_t i = 0; i < S; ++i)
        for (std::size_t j = 0; j < S; ++j) {
            ExtCount v;
            if (i > j)
                v = ExtCount::infinity();
            else if (std::ptrdiff_t(i) < m0)
                v = ExtCount(0);
            else
                v = ExtCount(ExtCount::value_type(rank_of_inclusion(cx[i], cx[j], k)));
            g.set({i, j}, v);
        }
    return g;
}

enum class R6Class { admissible, trivially_non_admissible, other_non_admissible };

inline const char* to_string(R6Class c) {
    switch (c) {
        case R6Class::admissible: return "admissible";
        case R6Class::trivially_non_admissible: return "trivially_non_admissible";
        case R6Class::other_non_admissible: return "other_non_admissible";
    }
    return "?";
}

/// a = (t1, t2, delta, t1', t2', delta') ordered as R x R^op x R^op x R^op x R x R.
template <class T>
R6Class classify_r6(const std::array<T, 6>& a) {
    const T zero{};
    const bool admissible = a[0] <= a[1] && a[2] >= zero && a[3] <= a[4] && a[5] >= zero && a[3] <= a[0] &&
                            a[1] <= a[4] && a[2] <= a[5];
    if (admissible) return R6Class::admissible;
    // some admissible b below a exists
    const bool below = a[3] <= a[0] && a[1] <= a[4] && a[3] <= a[4] && std::max(a[2], zero) <= a[5];
    return below ? R6Class::other_non_admissible : R6Class::trivially_non_admissible;
}

/// Partitions of the points at (interval, scale) cells, computed on demand.
class SpatioTemporalDendrogram {
public:
    explicit SpatioTemporalDendrogram(const SampledDMS& dms, IndexOptions opts = {}) : index_(dms, opts) {}

    std::vector<std::vector<std::size_t>> partition(std::size_t k1, std::size_t k2, double delta) const {
        return connected_components(index_.matrix(k1, k2), delta);
    }

    std::vector<double> heights(std::size_t k1, std::size_t k2) const { return merge_heights(index_.matrix(k1, k2)); }

    /// Fixed-scale slice over single samples.
    std::vector<std::vector<std::vector<std::size_t>>> formigram_slice(double delta) const {
        std::vector<std::vector<std::vector<std::size_t>>> out;
        for (std::size_t t = 0; t < index_.count(); ++t) out.push_back(partition(t, t, delta));
        return out;
    }

    const IntervalMinIndex& index() const { return index_; }

private:
    IntervalMinIndex index_;
};

}  // namespace dynatda
