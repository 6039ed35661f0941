#pragma once

#include <bit>
#include <cstddef>
#include <deque>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "distance_matrix.hpp"
#include "dms.hpp"

namespace dynatda {

/// Minimum of every length-`width` window of `series` (monotone deque).
template <class T>
std::vector<T> sliding_window_min(std::span<const T> series, std::size_t width) {
    if (width == 0 || width > series.size()) throw std::out_of_range("bad window width");
    std::vector<T> out;
    out.reserve(series.size() - width + 1);
    std::deque<std::size_t> dq;
    for (std::size_t i = 0; i < series.size(); ++i) {
        while (!dq.empty() && series[dq.back()] >= series[i]) dq.pop_back();
        dq.push_back(i);
        if (dq.front() + width <= i) dq.pop_front();
        if (i + 1 >= width) out.push_back(series[dq.front()]);
    }
    return out;
}

struct IndexOptions {
    std::size_t memory_cap_bytes = std::size_t{1} << 30;
};

/// O(1) range-minimum over time for every unordered pair, via doubling tables.
/// Above the memory cap only the raw series is kept and queries scan.
class IntervalMinIndex {
public:
    explicit IntervalMinIndex(const SampledDMS& dms, IndexOptions opts = {})
        : n_(dms.size()), count_(dms.count()), pairs_(n_ * (n_ - 1) / 2) {
        const std::size_t levels = std::size_t(std::bit_width(count_));
        const std::size_t full_bytes = levels * count_ * pairs_ * sizeof(double);
        levels_ = full_bytes <= opts.memory_cap_bytes ? levels : 1;
        table_.resize(levels_ * count_ * pairs_);
        for (std::size_t k = 0; k < count_; ++k) {
            double* row = table_.data() + k * pairs_;
            std::size_t p = 0;
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t j = i + 1; j < n_; ++j) row[p++] = dms(k, i, j);
        }
        for (std::size_t l = 1; l < levels_; ++l) {
            const std::size_t half = std::size_t{1} << (l - 1);
            for (std::size_t k = 0; k + (std::size_t{1} << l) <= count_; ++k) {
                const double* a = level_row(l - 1, k);
                const double* b = level_row(l - 1, k + half);
                double* out = table_.data() + (l * count_ + k) * pairs_;
                for (std::size_t p = 0; p < pairs_; ++p) out[p] = a[p] < b[p] ? a[p] : b[p];
            }
        }
    }

    std::size_t size() const { return n_; }
    std::size_t count() const { return count_; }
    std::size_t pair_count() const { return pairs_; }
    bool streaming() const { return levels_ == 1 && count_ > 1; }

    std::size_t pair_index(std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        return i * n_ - i * (i + 1) / 2 + (j - i - 1);
    }

    double query(std::size_t i, std::size_t j, std::size_t k1, std::size_t k2) const {
        check_window(k1, k2);
        if (i >= n_ || j >= n_) throw std::out_of_range("point index out of range");
        if (i == j) return 0.0;
        const std::size_t p = pair_index(i, j);
        if (streaming()) {
            double m = std::numeric_limits<double>::infinity();
            for (std::size_t k = k1; k <= k2; ++k) m = std::min(m, table_[k * pairs_ + p]);
            return m;
        }
        const std::size_t l = std::size_t(std::bit_width(k2 - k1 + 1)) - 1;
        double a = level_row(l, k1)[p];
        double b = level_row(l, k2 + 1 - (std::size_t{1} << l))[p];
        return a < b ? a : b;
    }

    /// Writes the interval-min semi-metric over [k1, k2] into `out`.
    void fill(std::size_t k1, std::size_t k2, DistanceMatrix& out) const {
        check_window(k1, k2);
        if (out.size() != n_) out = DistanceMatrix(n_);
        std::vector<double> mins(pairs_);
        pair_minima(k1, k2, mins);
        std::size_t p = 0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j) out.set(i, j, mins[p++]);
    }

    DistanceMatrix matrix(std::size_t k1, std::size_t k2) const {
        DistanceMatrix m(n_);
        fill(k1, k2, m);
        return m;
    }

    /// Pair minima in pair_index order.
    void pair_minima(std::size_t k1, std::size_t k2, std::span<double> out) const {
        check_window(k1, k2);
        if (streaming()) {
            std::copy_n(table_.data() + k1 * pairs_, pairs_, out.begin());
            for (std::size_t k = k1 + 1; k <= k2; ++k) {
                const double* row = table_.data() + k * pairs_;
                for (std::size_t p = 0; p < pairs_; ++p) out[p] = std::min(out[p], row[p]);
            }
            return;
        }
        const std::size_t l = std::size_t(std::bit_width(k2 - k1 + 1)) - 1;
        const double* a = level_row(l, k1);
        const double* b = level_row(l, k2 + 1 - (std::size_t{1} << l));
        for (std::size_t p = 0; p < pairs_; ++p) out[p] = a[p] < b[p] ? a[p] : b[p];
    }

    /// Minima of all windows [k - radius, k + radius] clipped to the grid, for one pair.
    std::vector<double> centered_window_minima(std::size_t i, std::size_t j, std::size_t radius) const {
        std::vector<double> series(count_ + 2 * radius, std::numeric_limits<double>::infinity());
        if (i != j) {
            const std::size_t p = pair_index(i, j);
            for (std::size_t k = 0; k < count_; ++k) series[radius + k] = table_[k * pairs_ + p];
        } else {
            for (std::size_t k = 0; k < count_; ++k) series[radius + k] = 0.0;
        }
        return sliding_window_min<double>(series, 2 * radius + 1);
    }

private:
    const double* level_row(std::size_t l, std::size_t k) const { return table_.data() + (l * count_ + k) * pairs_; }

    void check_window(std::size_t k1, std::size_t k2) const {
        if (k1 > k2 || k2 >= count_) {
            std::ostringstream os;
            os << "window [" << k1 << "," << k2 << "] outside 0.." << count_ - 1;
            throw std::out_of_range(os.str());
        }
    }

    std::size_t n_;
    std::size_t count_;
    std::size_t pairs_;
    std::size_t levels_ = 1;
    std::vector<double> table_;  // [level][k][pair]
};

}  // namespace dynatda
