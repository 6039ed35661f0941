#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "persistence_diagram.hpp"

namespace dynatda {

namespace detail {

/// Kuhn augmenting paths; adj[u] lists right vertices.
inline bool has_perfect_matching(const std::vector<std::vector<std::size_t>>& adj, std::size_t right) {
    const std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> match(right, none);
    std::vector<char> seen;
    auto augment = [&](auto&& self, std::size_t u) -> bool {
        for (auto v : adj[u]) {
            if (seen[v]) continue;
            seen[v] = 1;
            if (match[v] == none || self(self, match[v])) {
                match[v] = u;
                return true;
            }
        }
        return false;
    };
    for (std::size_t u = 0; u < adj.size(); ++u) {
        seen.assign(right, 0);
        if (!augment(augment, u)) return false;
    }
    return true;
}

inline double linf(const DiagramPoint& a, const DiagramPoint& b) {
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

inline double half_persistence(const DiagramPoint& a) { return (a.death - a.birth) / 2.0; }

/// Finite points only: does an eps-matching exist?
inline bool matchable(const std::vector<DiagramPoint>& p, const std::vector<DiagramPoint>& q, double eps) {
    const std::size_t a = p.size(), b = q.size();
    // left: p then diagonal copies of q; right: q then diagonal copies of p
    std::vector<std::vector<std::size_t>> adj(a + b);
    for (std::size_t i = 0; i < a; ++i) {
        for (std::size_t j = 0; j < b; ++j)
            if (linf(p[i], q[j]) <= eps) adj[i].push_back(j);
        if (half_persistence(p[i]) <= eps) adj[i].push_back(b + i);
    }
    for (std::size_t j = 0; j < b; ++j) {
        if (half_persistence(q[j]) <= eps) adj[a + j].push_back(j);
        for (std::size_t i = 0; i < a; ++i) adj[a + j].push_back(b + i);
    }
    return has_perfect_matching(adj, a + b);
}

}  // namespace detail

/// Bottleneck distance; +inf if the essential (infinite-death) counts differ.
inline double bottleneck(const PersistenceDiagram& d1, const PersistenceDiagram& d2) {
    d1.validate();
    d2.validate();
    std::vector<double> e1, e2;
    std::vector<DiagramPoint> f1, f2;
    for (const auto& p : d1.points) (p.essential() ? (void)e1.push_back(p.birth) : f1.push_back(p));
    for (const auto& p : d2.points) (p.essential() ? (void)e2.push_back(p.birth) : f2.push_back(p));
    if (e1.size() != e2.size()) return std::numeric_limits<double>::infinity();
    std::sort(e1.begin(), e1.end());
    std::sort(e2.begin(), e2.end());
    double floor_eps = 0.0;
    for (std::size_t i = 0; i < e1.size(); ++i) floor_eps = std::max(floor_eps, std::abs(e1[i] - e2[i]));

    std::vector<double> cand{0.0};
    for (const auto& p : f1)
        for (const auto& q : f2) {
            cand.push_back(std::abs(p.birth - q.birth));
            cand.push_back(std::abs(p.death - q.death));
            cand.push_back(detail::linf(p, q));
        }
    for (const auto& p : f1) cand.push_back(detail::half_persistence(p));
    for (const auto& q : f2) cand.push_back(detail::half_persistence(q));
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    cand.erase(cand.begin(), std::lower_bound(cand.begin(), cand.end(), floor_eps));
    if (cand.empty() || cand.front() != floor_eps) cand.insert(cand.begin(), floor_eps);

    std::size_t lo = 0, hi = cand.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (detail::matchable(f1, f2, cand[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return cand[lo];
}

}  // namespace dynatda
