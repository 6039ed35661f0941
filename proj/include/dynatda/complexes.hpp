#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "distance_matrix.hpp"
#include "error.hpp"
#include "f2.hpp"
#include "union_find.hpp"

namespace dynatda {

using Simplex = std::vector<std::uint32_t>;

/// Rips complex of a semi-metric at one scale, stored up to dimension K+1.
class SimplicialComplexSlice {
public:
    SimplicialComplexSlice(std::size_t vertices, double scale, std::size_t max_homology,
                           std::vector<std::vector<Simplex>> simplices)
        : n_(vertices), scale_(scale), cap_(max_homology), by_dim_(std::move(simplices)) {
        by_dim_.resize(cap_ + 2);
    }

    std::size_t vertex_count() const { return n_; }
    double scale() const { return scale_; }
    std::size_t max_homology() const { return cap_; }
    std::size_t top_dimension() const { return cap_ + 1; }

    const std::vector<Simplex>& simplices(std::size_t dim) const {
        static const std::vector<Simplex> empty;
        return dim < by_dim_.size() ? by_dim_[dim] : empty;
    }

    std::size_t count(std::size_t dim) const { return simplices(dim).size(); }

    std::optional<std::size_t> index_of(const Simplex& s) const {
        if (s.empty()) return std::nullopt;
        const auto& list = simplices(s.size() - 1);
        auto it = std::lower_bound(list.begin(), list.end(), s);
        if (it == list.end() || *it != s) return std::nullopt;
        return std::size_t(it - list.begin());
    }

    bool contains(const Simplex& s) const { return index_of(s).has_value(); }

    /// One simplex per line, vertices space separated, dimension then lexicographic.
    std::string dump() const {
        std::ostringstream os;
        for (const auto& list : by_dim_)
            for (const auto& s : list) {
                for (std::size_t i = 0; i < s.size(); ++i) os << (i ? " " : "") << s[i];
                os << '\n';
            }
        return os.str();
    }

private:
    std::size_t n_;
    double scale_;
    std::size_t cap_;
    std::vector<std::vector<Simplex>> by_dim_;
};

/// All simplices of dimension <= K+1 whose vertices are pairwise within delta.
inline SimplicialComplexSlice rips_slice(const DistanceMatrix& d, double delta, std::size_t max_dim = 2) {
    d.validate();
    const std::size_t n = d.size();
    const std::size_t top = max_dim + 1;
    std::vector<std::vector<Simplex>> out(top + 1);
    if (delta < 0.0) return SimplicialComplexSlice(n, delta, max_dim, std::move(out));

    std::vector<std::vector<std::uint32_t>> nbr(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (d(i, j) <= delta) nbr[i].push_back(std::uint32_t(j));

    Simplex cur;
    // candidates: common higher neighbours of cur
    auto extend = [&](auto&& self, const std::vector<std::uint32_t>& cand) -> void {
        out[cur.size() - 1].push_back(cur);
        if (cur.size() == top + 1) return;
        for (std::size_t a = 0; a < cand.size(); ++a) {
            std::uint32_t v = cand[a];
            std::vector<std::uint32_t> next;
            for (std::size_t b = a + 1; b < cand.size(); ++b)
                if (d(v, cand[b]) <= delta) next.push_back(cand[b]);
            cur.push_back(v);
            self(self, next);
            cur.pop_back();
        }
    };
    for (std::uint32_t v = 0; v < n; ++v) {
        cur.assign(1, v);
        extend(extend, nbr[v]);
    }
    for (auto& list : out) std::sort(list.begin(), list.end());
    return SimplicialComplexSlice(n, delta, max_dim, std::move(out));
}

/// Boundary map from k-simplices to (k-1)-simplices over F2, column per k-simplex.
struct BoundaryMatrix {
    std::size_t dim = 0;
    std::size_t rows = 0;
    std::vector<F2Vector> columns;

    std::size_t cols() const { return columns.size(); }
    std::size_t rank() const { return f2_rank(columns, rows); }
};

inline BoundaryMatrix boundary_matrix(const SimplicialComplexSlice& c, std::size_t k) {
    BoundaryMatrix b;
    b.dim = k;
    b.rows = k == 0 ? 0 : c.count(k - 1);
    for (const auto& s : c.simplices(k)) {
        F2Vector col(b.rows);
        if (k > 0) {
            Simplex face(s.size() - 1);
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                std::copy(s.begin(), s.begin() + std::ptrdiff_t(drop), face.begin());
                std::copy(s.begin() + std::ptrdiff_t(drop) + 1, s.end(), face.begin() + std::ptrdiff_t(drop));
                auto idx = c.index_of(face);
                if (!idx) throw invariant_violation("complex is not closed under faces");
                col.flip(*idx);
            }
        }
        b.columns.push_back(std::move(col));
    }
    return b;
}

/// dim H_k = dim C_k - rank d_k - rank d_{k+1}.
inline std::size_t betti(const SimplicialComplexSlice& c, std::size_t k) {
    if (k > c.max_homology()) {
        std::ostringstream os;
        os << "homology degree " << k << " exceeds cap " << c.max_homology();
        throw config_error(os.str());
    }
    return c.count(k) - boundary_matrix(c, k).rank() - boundary_matrix(c, k + 1).rank();
}

/// Rank of H_k(sub) -> H_k(sup) induced by inclusion:
/// dim Z_k(sub) - dim(Z_k(sub) cap B_k(sup)) = rank[B | Z] - rank B.
inline std::size_t rank_of_inclusion(const SimplicialComplexSlice& sub, const SimplicialComplexSlice& sup,
                                     std::size_t k) {
    if (k > sub.max_homology() || k > sup.max_homology()) {
        std::ostringstream os;
        os << "homology degree " << k << " exceeds cap";
        throw config_error(os.str());
    }
    if (sub.vertex_count() != sup.vertex_count()) throw validation_error("complexes on different vertex sets");
    const std::size_t shared = std::min(sub.top_dimension(), sup.top_dimension());
    std::vector<std::size_t> to_sup;
    for (std::size_t dim = 0; dim <= shared; ++dim)
        for (const auto& s : sub.simplices(dim)) {
            auto idx = sup.index_of(s);
            if (!idx) {
                std::ostringstream os;
                os << "simplex {";
                for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
                os << "} of the subcomplex is missing from the supercomplex";
                throw validation_error(os.str());
            }
            if (dim == k) to_sup.push_back(*idx);
        }

    const std::size_t m = sup.count(k);
    F2Echelon e(m);
    for (auto& col : boundary_matrix(sup, k + 1).columns) e.insert(std::move(col));
    const std::size_t rank_b = e.rank();

    BoundaryMatrix dk = boundary_matrix(sub, k);
    std::vector<F2Vector> cycles;
    if (k == 0) {
        for (std::size_t j = 0; j < sub.count(0); ++j) {
            F2Vector v(sub.count(0));
            v.set(j);
            cycles.push_back(std::move(v));
        }
    } else {
        cycles = f2_kernel(dk.columns, dk.rows);
    }
    for (const auto& z : cycles) {
        F2Vector mapped(m);
        for (std::size_t j = 0; j < z.size(); ++j)
            if (z.test(j)) mapped.set(to_sup[j]);
        e.insert(std::move(mapped));
    }
    return e.rank() - rank_b;
}

/// Blocks of the closure of d(i,j) <= delta, each sorted, ordered by smallest member.
inline std::vector<std::vector<std::size_t>> connected_components(const DistanceMatrix& d, double delta) {
    DisjointSet ds(d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j)
            if (d(i, j) <= delta) ds.unite(i, j);
    return ds.blocks();
}

}  // namespace dynatda
