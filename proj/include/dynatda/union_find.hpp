#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

namespace dynatda {

/// Disjoint sets with path halving and union by size.
class DisjointSet {
public:
    explicit DisjointSet(std::size_t n = 0) : parent_(n), size_(n, 1), blocks_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // returns false if already joined
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        --blocks_;
        return true;
    }

    std::size_t block_count() const { return blocks_; }
    std::size_t element_count() const { return parent_.size(); }

    /// Blocks with sorted members, ordered by smallest member.
    std::vector<std::vector<std::size_t>> blocks() {
        const std::size_t n = parent_.size();
        std::vector<std::size_t> slot(n, n);
        std::vector<std::vector<std::size_t>> out;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = find(i);
            if (slot[r] == n) {
                slot[r] = out.size();
                out.emplace_back();
            }
            out[slot[r]].push_back(i);
        }
        return out;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
    std::size_t blocks_;
};

}  // namespace dynatda
