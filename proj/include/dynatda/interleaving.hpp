#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <sstream>
#include <vector>

#include "error.hpp"
#include "grid_function.hpp"
#include "parallel.hpp"

namespace dynatda {

template <GridView A, GridView B>
void check_shared_axes(const A& f, const B& g) {
    if (f.dim() != g.dim()) throw config_error("grid functions have different dimensions");
    for (std::size_t i = 0; i < f.dim(); ++i) {
        const auto& a = f.axes()[i];
        const auto& b = g.axes()[i];
        if (a.count != b.count || a.orientation != b.orientation) {
            std::ostringstream os;
            os << "axis " << i << " differs in count or orientation";
            throw config_error(os.str());
        }
    }
}

/// True iff F(a) >= G(a + k) for every stored cell a of F, where the shift
/// moves k grid steps upward along every axis.
template <GridView A, GridView B>
bool dominates_shifted(const A& f, const B& g, std::size_t k, std::size_t threads = 1) {
    const std::size_t d = f.dim();
    std::vector<std::ptrdiff_t> dir(d);
    for (std::size_t i = 0; i < d; ++i) dir[i] = f.axes()[i].direction() * std::ptrdiff_t(k);
    const std::size_t total = f.size();
    const std::size_t chunk = 4096;
    const std::size_t chunks = (total + chunk - 1) / chunk;
    std::atomic<bool> violated{false};
    parallel_for(chunks, threads, [&](std::size_t c) {
        if (violated.load(std::memory_order_relaxed)) return;
        std::vector<std::size_t> idx(d);
        std::vector<std::ptrdiff_t> shifted(d);
        const std::size_t end = std::min(total, (c + 1) * chunk);
        for (std::size_t flat = c * chunk; flat < end; ++flat) {
            f.unravel(flat, idx);
            if (!f.in_domain(std::span<const std::size_t>(idx))) continue;
            const ExtCount fv = f.at_flat(flat);
            if (fv.is_infinite()) continue;
            for (std::size_t i = 0; i < d; ++i) shifted[i] = std::ptrdiff_t(idx[i]) + dir[i];
            if (g.extended(std::span<const std::ptrdiff_t>(shifted)) > fv) {
                violated.store(true, std::memory_order_relaxed);
                return;
            }
        }
    });
    return !violated.load();
}

/// Both directions of the shifted domination test.
template <GridView A, GridView B>
bool k_test(const A& f, const B& g, std::size_t k, std::size_t threads = 1) {
    check_shared_axes(f, g);
    return dominates_shifted(f, g, k, threads) && dominates_shifted(g, f, k, threads);
}

struct InterleavingResult {
    std::size_t grid_units = 0;
    double physical = 0.0;
    double step = 0.0;
};

enum class SearchMode { binary, linear };

/// Smallest k in [0, n-1] passing `test`, where n is the largest axis count.
template <class Test>
std::size_t minimal_passing_shift(std::size_t n, Test&& test, SearchMode mode) {
    const std::size_t top = n == 0 ? 0 : n - 1;
    if (mode == SearchMode::linear) {
        for (std::size_t k = 0; k <= top; ++k)
            if (test(k)) return k;
        throw config_error("no shift up to the grid size passes; extend the grid or use clamp extension");
    }
    // equal invariants are common and a passing test is the expensive case
    if (test(0)) return 0;
    if (!test(top)) throw config_error("no shift up to the grid size passes; extend the grid or use clamp extension");
    std::size_t lo = 1, hi = top;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (test(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

template <GridView A>
std::size_t largest_count(const A& f) {
    std::size_t n = 0;
    for (const auto& a : f.axes()) n = std::max(n, a.count);
    return n;
}

template <GridView A, GridView B>
InterleavingResult interleaving(const A& f, const B& g, SearchMode mode = SearchMode::binary,
                                std::size_t threads = 1) {
    check_shared_axes(f, g);
    const double unit = common_step(f.axes());
    const std::size_t k = minimal_passing_shift(
        largest_count(f), [&](std::size_t s) { return k_test(f, g, s, threads); }, mode);
    return {k, double(k) * unit, unit};
}

/// Interleaving restricted to the upper triangle delta <= delta' of the
/// (decreasing, increasing) scale plane.
inline double erosion(GridFunction y1, GridFunction y2, SearchMode mode = SearchMode::binary) {
    if (y1.dim() != 2 || y2.dim() != 2) throw config_error("erosion needs 2-D functions");
    y1.set_interval_domain(0, 1);
    y2.set_interval_domain(0, 1);
    return interleaving(y1, y2, mode).physical;
}

}  // namespace dynatda
