#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "complexes.hpp"
#include "dms.hpp"
#include "grid_function.hpp"
#include "interval_min.hpp"
#include "invariants.hpp"
#include "parallel.hpp"
#include "scale_axis.hpp"

namespace dynatda {

struct RankGridSpec {
    ScaleAxis scale;
    double unit_ratio = 2.0;
    std::size_t threads = 0;
    IndexOptions index;
};

/// Adapted rank invariant on the 6-D grid
/// (t1, t2, delta, t1', t2', delta') in R x R^op x R^op x R^op x R x R.
/// Cells are evaluated on demand; lookups off the grid use the exact value,
/// with time windows clipped to the sampled range.
class RankInvariantGrid {
public:
    RankInvariantGrid(const SampledDMS& dms, std::size_t k, const RankGridSpec& spec)
        : index_(dms, spec.index), n_(dms.size()), T_(dms.count()), k_(k), scale_(spec.scale) {
        scale_.validate();
        detail::check_unit_ratio(dms.grid(), scale_, spec.unit_ratio);
        m0_ = scale_.zero_index();
        double dmax = 0.0;
        for (double v : dms.tensor()) dmax = std::max(dmax, v);
        m_cap_ = std::max(scale_.index_reaching(dmax), m0_);
        const double reach = k == 0 ? detail::max_slice_merge_height(dms) : dmax;
        if (!(reach <= scale_.threshold(std::ptrdiff_t(scale_.count) - 1)))
            throw config_error("rank grid scale axis does not cover the data");

        const auto& g = dms.grid();
        const double r = spec.unit_ratio;
        auto time_axis = [&](const char* name, Orientation o) {
            return GridAxis{name, g.t0, g.step, T_, o, r, Extension::clamp};
        };
        auto scale_axis = [&](const char* name, Orientation o, Extension e) {
            return GridAxis{name, scale_.origin, scale_.step, scale_.count, o, 1.0, e};
        };
        axes_ = {time_axis("sub_start", Orientation::increasing),
                 time_axis("sub_end", Orientation::decreasing),
                 scale_axis("sub_delta", Orientation::decreasing, Extension::zero),
                 time_axis("sup_start", Orientation::decreasing),
                 time_axis("sup_end", Orientation::increasing),
                 scale_axis("sup_delta", Orientation::increasing, Extension::clamp)};
        common_step(axes_);
        strides_.assign(6, 1);
        for (std::size_t i = 6; i-- > 1;) strides_[i - 1] = strides_[i] * axes_[i].count;
        size_ = strides_[0] * axes_[0].count;

        intervals_ = T_ * (T_ + 1) / 2 + 1;
        for (std::size_t l = 0; l < T_; ++l) starts_.push_back(l * T_ - l * (l - 1) / 2);
        scales_ = std::size_t(m_cap_ - m0_) + 1;
        betti_ = std::vector<std::atomic<std::int64_t>>(intervals_ * scales_);
        for (auto& b : betti_) b.store(-1, std::memory_order_relaxed);
    }

    std::size_t dim() const { return 6; }
    const std::vector<GridAxis>& axes() const { return axes_; }
    std::size_t size() const { return size_; }
    std::size_t homology_degree() const { return k_; }
    const ScaleAxis& scale() const { return scale_; }

    template <class I>
    bool in_domain(std::span<const I>) const {
        return true;
    }

    void unravel(std::size_t flat, std::span<std::size_t> out) const {
        for (std::size_t i = 0; i < 6; ++i) {
            out[i] = flat / strides_[i];
            flat %= strides_[i];
        }
    }

    ExtCount at_flat(std::size_t flat) const {
        std::array<std::ptrdiff_t, 6> a;
        for (std::size_t i = 0; i < 6; ++i) {
            a[i] = std::ptrdiff_t(flat / strides_[i]);
            flat %= strides_[i];
        }
        return value(a);
    }

    ExtCount extended(std::span<const std::ptrdiff_t> idx) const {
        std::array<std::ptrdiff_t, 6> a;
        std::copy_n(idx.begin(), 6, a.begin());
        return value(a);
    }

    /// Value at any integer index vector (grid coordinates, not clipped).
    ExtCount value(const std::array<std::ptrdiff_t, 6>& a) const {
        std::array<std::ptrdiff_t, 6> c = a;
        c[2] -= m0_;
        c[5] -= m0_;
        switch (classify_r6(c)) {
            case R6Class::trivially_non_admissible: return ExtCount::infinity();
            case R6Class::other_non_admissible: return ExtCount(0);
            case R6Class::admissible: break;
        }
        const std::size_t sub = cell(a[0], a[1], a[2]);
        const std::size_t sup = cell(a[3], a[4], a[5]);
        if (k_ == 0) return ExtCount(ExtCount::value_type(betti_of(sup)));
        return ExtCount(ExtCount::value_type(rank(sub, sup)));
    }

    /// Dense copy of the stored grid for export.
    GridFunction materialize(std::size_t max_cells = std::size_t{1} << 26, std::size_t threads = 0) const {
        if (size_ > max_cells) throw size_cap_error("rank grid too large to materialize");
        GridFunction g(axes_);
        ExtCount* base = &g.at_flat(0);
        const std::size_t rows = axes_[0].count;
        parallel_for(rows, threads, [&](std::size_t r) {
            for (std::size_t f = r * strides_[0]; f < (r + 1) * strides_[0]; ++f) base[f] = at_flat(f);
        });
        g.metadata = {{"invariant", "rank"}, {"k", k_}};
        return g;
    }

    std::size_t computed_ranks() const {
        std::lock_guard lock(memo_mutex_);
        return memo_.size();
    }

private:
    // (clipped interval, scale) cell id
    std::size_t cell(std::ptrdiff_t lo, std::ptrdiff_t hi, std::ptrdiff_t m) const {
        lo = std::max<std::ptrdiff_t>(lo, 0);
        hi = std::min<std::ptrdiff_t>(hi, std::ptrdiff_t(T_) - 1);
        std::size_t iv = intervals_ - 1;
        if (lo <= hi) iv = starts_[std::size_t(lo)] + std::size_t(hi - lo);
        m = std::min(m, m_cap_);
        return iv * scales_ + std::size_t(m - m0_);
    }

    DistanceMatrix cell_matrix(std::size_t id) const {
        const std::size_t iv = id / scales_;
        if (iv == intervals_ - 1) return DistanceMatrix(n_, std::numeric_limits<double>::infinity());
        const std::size_t l = std::size_t(std::upper_bound(starts_.begin(), starts_.end(), iv) - starts_.begin()) - 1;
        return index_.matrix(l, l + (iv - starts_[l]));
    }

    double cell_scale(std::size_t id) const { return scale_.threshold(m0_ + std::ptrdiff_t(id % scales_)); }

    SimplicialComplexSlice complex(std::size_t id) const { return rips_slice(cell_matrix(id), cell_scale(id), k_); }

    std::size_t betti_of(std::size_t id) const {
        std::int64_t b = betti_[id].load(std::memory_order_relaxed);
        if (b >= 0) return std::size_t(b);
        std::size_t v;
        if (k_ == 0) {
            auto hs = merge_heights(cell_matrix(id));
            const double th = cell_scale(id);
            v = n_ - std::size_t(std::upper_bound(hs.begin(), hs.end(), th) - hs.begin());
        } else {
            v = betti(complex(id), k_);
        }
        betti_[id].store(std::int64_t(v), std::memory_order_relaxed);
        return v;
    }

    std::size_t rank(std::size_t sub, std::size_t sup) const {
        if (sub == sup) return betti_of(sub);
        if (betti_of(sub) == 0 || betti_of(sup) == 0) return 0;
        const std::uint64_t key = std::uint64_t(sub) * betti_.size() + sup;
        {
            std::lock_guard lock(memo_mutex_);
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        const std::size_t v = rank_of_inclusion(complex(sub), complex(sup), k_);
        std::lock_guard lock(memo_mutex_);
        memo_.emplace(key, std::uint32_t(v));
        return v;
    }

    IntervalMinIndex index_;
    std::size_t n_, T_, k_;
    ScaleAxis scale_;
    std::ptrdiff_t m0_ = 0, m_cap_ = 0;
    std::vector<GridAxis> axes_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 0;
    std::size_t intervals_ = 0, scales_ = 0;
    std::vector<std::size_t> starts_;
    mutable std::vector<std::atomic<std::int64_t>> betti_;
    mutable std::mutex memo_mutex_;
    mutable std::unordered_map<std::uint64_t, std::uint32_t> memo_;
};

}  // namespace dynatda
