#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include <json.hpp>

#include "dms.hpp"
#include "error.hpp"
#include "grid_function.hpp"
#include "interleaving.hpp"
#include "invariants.hpp"
#include "rank_grid.hpp"
#include "scale_axis.hpp"

namespace dynatda {

struct GridSpec {
    std::optional<ScaleAxis> scale;  // derived from the data when absent
    double unit_ratio = 2.0;
    std::size_t threads = 0;
    IndexOptions index;
    bool generic_rank0 = false;  // evaluate rank-0 through the 6-D grid instead of the reduction
};

struct ComparisonReport {
    std::size_t d_I_grid_units = 0;
    double d_I_physical = 0.0;
    double step = 0.0;
    double unit_ratio = 2.0;
    double lipschitz = 0.0;
    double alpha = 0.0;
    double d_dyn_lower_bound = 0.0;
    std::string invariant;
    std::size_t k = 0;
    nlohmann::json metadata = nlohmann::json::object();

    nlohmann::json to_json() const {
        return {{"d_I_grid_units", d_I_grid_units},
                {"d_I_physical", d_I_physical},
                {"step", step},
                {"unit_ratio", unit_ratio},
                {"lipschitz", lipschitz},
                {"alpha", alpha},
                {"d_dyn_lower_bound", d_dyn_lower_bound},
                {"invariant", invariant},
                {"k", k},
                {"metadata", metadata}};
    }
};

/// Both DMSs must sit on the same time samples.
inline void check_aligned(const SampledDMS& a, const SampledDMS& b) {
    const auto& x = a.grid();
    const auto& y = b.grid();
    if (x.count != y.count || std::abs(x.step - y.step) > 1e-9 * x.step ||
        std::abs(x.t0 - y.t0) > 1e-9 * x.step)
        throw config_error("DMSs are not sampled on the same time grid");
}

/// Scale axis from 0 with step unit_ratio * time step, reaching every value in `reach`.
inline ScaleAxis default_scale_axis(const TimeGrid& g, double unit_ratio, double reach) {
    ScaleAxis s{0.0, unit_ratio * g.step, 1};
    s.count = std::size_t(std::max<std::ptrdiff_t>(s.index_reaching(reach), 0)) + 1;
    return s;
}

namespace detail {

inline ScaleAxis resolve_scale(const SampledDMS& a, const SampledDMS& b, const GridSpec& spec, bool all_pairs) {
    if (spec.scale) return *spec.scale;
    double reach = 0.0;
    if (all_pairs) {
        for (double v : a.tensor()) reach = std::max(reach, v);
        for (double v : b.tensor()) reach = std::max(reach, v);
    } else {
        reach = std::max(max_slice_merge_height(a), max_slice_merge_height(b));
    }
    return default_scale_axis(a.grid(), spec.unit_ratio, reach);
}

/// Scale-unit slack of a grid shift relative to 2 * d_dyn.
inline double shift_slack(double ratio, double step) {
    if (ratio >= 2.0) return 0.0;
    const double q = 2.0 / ratio;
    return std::abs(q - std::round(q)) < 1e-9 ? 0.0 : step;
}

inline void finish_report(ComparisonReport& r, const SampledDMS& a, const SampledDMS& b, double ratio,
                          const ScaleAxis& s) {
    r.step = s.step;
    r.unit_ratio = ratio;
    r.lipschitz = std::max(lipschitz_of(a), lipschitz_of(b));
    r.alpha = a.grid().step;
    r.d_dyn_lower_bound = std::max(
        0.0, (r.d_I_physical - shift_slack(ratio, s.step)) / std::max(ratio, 2.0) - 2.0 * r.lipschitz * r.alpha);
    r.metadata["scale"] = {{"origin", s.origin}, {"step", s.step}, {"count", s.count}};
    r.metadata["time"] = {{"t0", a.grid().t0}, {"step", a.grid().step}, {"count", a.grid().count}};
    r.metadata["resolution"] = s.step;
}

}  // namespace detail

/// d_I between Betti-0 grids plus the implied lower bound on d_dyn.
inline ComparisonReport compare_betti0(const SampledDMS& a, const SampledDMS& b, const GridSpec& spec = {}) {
    check_aligned(a, b);
    const ScaleAxis s = detail::resolve_scale(a, b, spec, false);
    Betti0Options opts{spec.unit_ratio, spec.threads, spec.index};
    const GridFunction fa = betti0_grid(a, s, opts);
    const GridFunction fb = betti0_grid(b, s, opts);
    const auto res = interleaving(fa, fb, SearchMode::binary, spec.threads);
    ComparisonReport r;
    r.d_I_grid_units = res.grid_units;
    r.d_I_physical = double(res.grid_units) * s.step;
    r.invariant = "betti0";
    detail::finish_report(r, a, b, spec.unit_ratio, s);
    return r;
}

/// k-test for degree-0 rank invariants, read off the Betti-0 grids: rk_0 at an
/// admissible cell is the component count of its super cell, and a shifted cell
/// stays admissible exactly when the super interval spans at least 2k samples and
/// its scale index is at least k above zero. Cells that are not admissible never
/// violate the test.
inline bool rank0_k_test(const GridFunction& fa, const GridFunction& fb, std::size_t k, std::size_t threads = 1) {
    check_shared_axes(fa, fb);
    auto one_way = [&](const GridFunction& f, const GridFunction& g) {
        const std::size_t T = f.axes()[0].count, S = f.axes()[2].count;
        std::atomic<bool> bad{false};
        parallel_for(T, threads, [&](std::size_t k1) {
            const auto kk = std::ptrdiff_t(k);
            for (std::size_t k2 = k1 + 2 * k; k2 < T && !bad.load(std::memory_order_relaxed); ++k2)
                for (std::size_t m = k; m < S; ++m) {
                    const std::ptrdiff_t shifted[3] = {std::ptrdiff_t(k1) - kk, std::ptrdiff_t(k2) + kk,
                                                       std::ptrdiff_t(m) + kk};
                    if (g.extended(shifted) > f.at({k1, k2, m})) {
                        bad.store(true);
                        return;
                    }
                }
        });
        return !bad.load();
    };
    return one_way(fa, fb) && one_way(fb, fa);
}

/// d_I between adapted rank invariants of degree k.
inline ComparisonReport compare_rank(const SampledDMS& a, const SampledDMS& b, std::size_t k,
                                     const GridSpec& spec = {}) {
    check_aligned(a, b);
    const ScaleAxis s = detail::resolve_scale(a, b, spec, k > 0);
    ComparisonReport r;
    r.invariant = "rank_k";
    r.k = k;
    const std::size_t T = a.count();
    std::size_t units = 0;
    if (k == 0 && !spec.generic_rank0) {
        Betti0Options opts{spec.unit_ratio, spec.threads, spec.index};
        const GridFunction fa = betti0_grid(a, s, opts);
        const GridFunction fb = betti0_grid(b, s, opts);
        units = minimal_passing_shift(
            std::max(T, s.count), [&](std::size_t kk) { return rank0_k_test(fa, fb, kk, spec.threads); },
            SearchMode::binary);
    } else {
        RankGridSpec rs{s, spec.unit_ratio, spec.threads, spec.index};
        const RankInvariantGrid ga(a, k, rs), gb(b, k, rs);
        units = interleaving(ga, gb, SearchMode::binary, spec.threads).grid_units;
    }
    r.d_I_grid_units = units;
    r.d_I_physical = double(units) * s.step;
    // sub intervals must keep 2k samples, so shifts beyond this are not witnessed
    r.metadata["time_truncation_cap_grid_units"] = (T - 1) / 2;
    detail::finish_report(r, a, b, spec.unit_ratio, s);
    return r;
}

}  // namespace dynatda
