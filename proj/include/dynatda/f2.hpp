#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace dynatda {

/// Bit vector over the two-element field, packed into 64-bit words.
class F2Vector {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    F2Vector() = default;
    explicit F2Vector(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

    std::size_t size() const { return bits_; }

    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }

    F2Vector& operator^=(const F2Vector& o) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
        return *this;
    }

    bool none() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    std::size_t highest() const {
        for (std::size_t w = words_.size(); w-- > 0;)
            if (words_[w]) return w * 64 + 63 - std::size_t(std::countl_zero(words_[w]));
        return npos;
    }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto w : words_) c += std::size_t(std::popcount(w));
        return c;
    }

    friend bool operator==(const F2Vector&, const F2Vector&) = default;

private:
    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Row-echelon basis keyed by highest set bit; grows one vector at a time.
class F2Echelon {
public:
    explicit F2Echelon(std::size_t dim) : dim_(dim), pivot_(dim, none) {}

    /// Reduces v against the basis; keeps it if independent. Returns true if kept.
    bool insert(F2Vector v) {
        for (std::size_t p = v.highest(); p != F2Vector::npos; p = v.highest()) {
            if (pivot_[p] == none) {
                pivot_[p] = rows_.size();
                rows_.push_back(std::move(v));
                return true;
            }
            v ^= rows_[pivot_[p]];
        }
        return false;
    }

    std::size_t rank() const { return rows_.size(); }
    std::size_t dim() const { return dim_; }

private:
    static constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::size_t dim_;
    std::vector<std::size_t> pivot_;
    std::vector<F2Vector> rows_;
};

/// Rank of the span of `columns` (each of length `rows`).
inline std::size_t f2_rank(const std::vector<F2Vector>& columns, std::size_t rows) {
    F2Echelon e(rows);
    for (const auto& c : columns) e.insert(c);
    return e.rank();
}

/// Basis of the null space of the matrix whose columns are given,
/// expressed as combinations of column indices.
inline std::vector<F2Vector> f2_kernel(const std::vector<F2Vector>& columns, std::size_t rows) {
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    const std::size_t m = columns.size();
    std::vector<std::size_t> pivot(rows, none);
    std::vector<F2Vector> reduced, combos, kernel;
    for (std::size_t j = 0; j < m; ++j) {
        F2Vector v = columns[j];
        F2Vector c(m);
        c.set(j);
        bool kept = false;
        for (std::size_t p = v.highest(); p != F2Vector::npos; p = v.highest()) {
            if (pivot[p] == none) {
                pivot[p] = reduced.size();
                reduced.push_back(std::move(v));
                combos.push_back(std::move(c));
                kept = true;
                break;
            }
            v ^= reduced[pivot[p]];
            c ^= combos[pivot[p]];
        }
        if (!kept) kernel.push_back(std::move(c));
    }
    return kernel;
}

}  // namespace dynatda
