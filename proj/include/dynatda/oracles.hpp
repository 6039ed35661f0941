#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "distance_matrix.hpp"
#include "dms.hpp"
#include "error.hpp"
#include "interval_min.hpp"

namespace dynatda {

inline constexpr std::size_t oracle_size_cap = 4;

/// Relation R in X x Y, required to cover both X and Y.
struct Correspondence {
    std::size_t nx = 0, ny = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    bool is_surjective() const {
        std::vector<char> cx(nx, 0), cy(ny, 0);
        for (auto [x, y] : pairs) {
            if (x >= nx || y >= ny) return false;
            cx[x] = cy[y] = 1;
        }
        return std::all_of(cx.begin(), cx.end(), [](char c) { return c; }) &&
               std::all_of(cy.begin(), cy.end(), [](char c) { return c; });
    }

    static Correspondence identity(std::size_t n) {
        Correspondence r{n, n, {}};
        for (std::size_t i = 0; i < n; ++i) r.pairs.emplace_back(i, i);
        return r;
    }
};

struct OracleResult {
    double value = 0.0;
    std::size_t grid_multiple = 0;  // value / time step, for window-based distances
    Correspondence best;
};

namespace detail {

inline bool le_tol(double a, double b) { return a <= b + 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

inline void check_oracle_size(std::size_t nx, std::size_t ny) {
    if (nx > oracle_size_cap || ny > oracle_size_cap) {
        std::ostringstream os;
        os << "brute-force oracles are capped at " << oracle_size_cap << " points per side (got " << nx << " and "
           << ny << "); use the invariant lower bounds instead";
        throw size_cap_error(os.str());
    }
}

/// min over surjective R of max_{z, z' in R} cost(z, z'), z = x * ny + y.
/// Subset DP: dis(R) = max(dis(R - low), max_{z in R} cost(low, z)).
inline std::pair<double, Correspondence> best_correspondence(std::size_t nx, std::size_t ny,
                                                             const std::vector<double>& cost) {
    check_oracle_size(nx, ny);
    const std::size_t m = nx * ny;
    const std::uint32_t full = (1u << m) - 1;
    std::uint32_t need_x = (1u << nx) - 1, need_y = (1u << ny) - 1;
    std::vector<double> dis(std::size_t(full) + 1, 0.0);
    std::vector<std::uint16_t> cov_x(std::size_t(full) + 1, 0), cov_y(std::size_t(full) + 1, 0);
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t arg = 0;
    for (std::uint32_t r = 1; r <= full; ++r) {
        const auto low = std::size_t(std::countr_zero(r));
        const std::uint32_t rest = r & (r - 1);
        double v = dis[rest];
        for (std::uint32_t s = r; s; s &= s - 1) v = std::max(v, cost[low * m + std::size_t(std::countr_zero(s))]);
        dis[r] = v;
        cov_x[r] = std::uint16_t(cov_x[rest] | (1u << (low / ny)));
        cov_y[r] = std::uint16_t(cov_y[rest] | (1u << (low % ny)));
        if (cov_x[r] == need_x && cov_y[r] == need_y && v < best) {
            best = v;
            arg = r;
        }
    }
    Correspondence c{nx, ny, {}};
    for (std::size_t z = 0; z < m; ++z)
        if (arg >> z & 1u) c.pairs.emplace_back(z / ny, z % ny);
    return {best, c};
}

/// Minimal window radius j (grid steps) with min_{|s-t|<=j} a(s) <= b(t) + 2 j step at every t,
/// in both directions.
inline std::size_t minimal_radius(const IntervalMinIndex& ia, std::size_t x, std::size_t x2,
                                  const IntervalMinIndex& ib, std::size_t y, std::size_t y2, double step,
                                  const SampledDMS& a, const SampledDMS& b) {
    const std::size_t T = a.count();
    std::size_t worst = 0;
    for (std::size_t t = 0; t < T; ++t) {
        const double dx = a(t, x, x2), dy = b(t, y, y2);
        std::size_t j = 0;
        for (;; ++j) {
            const std::size_t lo = t >= j ? t - j : 0, hi = std::min(T - 1, t + j);
            const double wx = ia.query(x, x2, lo, hi), wy = ib.query(y, y2, lo, hi);
            const double slack = 2.0 * double(j) * step;
            if (le_tol(wx, dy + slack) && le_tol(wy, dx + slack)) break;
            if (lo == 0 && hi == T - 1) {
                // windows are full from here on; only the slack keeps growing
                const double need = std::max(wx - dy, wy - dx) / (2.0 * step);
                j = std::max<std::size_t>(j, std::size_t(std::ceil(need - 1e-9)));
                while (!(le_tol(wx, dy + 2.0 * double(j) * step) && le_tol(wy, dx + 2.0 * double(j) * step))) ++j;
                break;
            }
        }
        worst = std::max(worst, j);
    }
    return worst;
}

inline void check_pair(const SampledDMS& a, const SampledDMS& b) {
    check_oracle_size(a.size(), b.size());
    const auto& x = a.grid();
    const auto& y = b.grid();
    if (x.count != y.count || std::abs(x.step - y.step) > 1e-9 * x.step || std::abs(x.t0 - y.t0) > 1e-9 * x.step)
        throw config_error("oracles need both DMSs on the same time grid");
}

template <class Cost>
std::vector<double> pair_costs(std::size_t nx, std::size_t ny, Cost&& cost) {
    const std::size_t m = nx * ny;
    std::vector<double> c(m * m);
    for (std::size_t z = 0; z < m; ++z)
        for (std::size_t w = z; w < m; ++w) c[z * m + w] = c[w * m + z] = cost(z / ny, z % ny, w / ny, w % ny);
    return c;
}

}  // namespace detail

struct DistortionViolation {
    std::size_t t = 0;
    std::pair<std::size_t, std::size_t> z, w;
    bool x_side = true;  // true: window of X exceeded slacked Y
    double window_min = 0.0, bound = 0.0;
};

struct DistortionCheck {
    bool ok = true;
    std::optional<DistortionViolation> violation;
};

/// Checks min over [t-eps, t+eps] of d_X <= d_Y(t) + 2 eps (and symmetrically) on R.
inline DistortionCheck dyn_distortion(const SampledDMS& a, const SampledDMS& b, const Correspondence& r, double eps) {
    detail::check_pair(a, b);
    if (!(eps >= 0.0)) throw config_error("distortion parameter must be nonnegative");
    if (!r.is_surjective() || r.nx != a.size() || r.ny != b.size())
        throw validation_error("relation is not a correspondence between the two point sets");
    const double step = a.grid().step;
    const auto j = std::size_t(std::llround(eps / step));
    if (std::abs(double(j) * step - eps) > 1e-9 * step) throw config_error("distortion parameter must be a grid multiple");
    const IntervalMinIndex ia(a), ib(b);
    const std::size_t T = a.count();
    for (std::size_t t = 0; t < T; ++t) {
        const std::size_t lo = t >= j ? t - j : 0, hi = std::min(T - 1, t + j);
        for (auto z : r.pairs)
            for (auto w : r.pairs) {
                const double wx = ia.query(z.first, w.first, lo, hi);
                const double wy = ib.query(z.second, w.second, lo, hi);
                const double by = b(t, z.second, w.second) + 2.0 * eps;
                const double bx = a(t, z.first, w.first) + 2.0 * eps;
                if (!detail::le_tol(wx, by)) return {false, DistortionViolation{t, z, w, true, wx, by}};
                if (!detail::le_tol(wy, bx)) return {false, DistortionViolation{t, z, w, false, wy, bx}};
            }
    }
    return {true, std::nullopt};
}

/// Sampled d_dyn: smallest grid multiple eps admitting a correspondence of distortion <= eps.
inline OracleResult ddyn_bruteforce(const SampledDMS& a, const SampledDMS& b) {
    detail::check_pair(a, b);
    const IntervalMinIndex ia(a), ib(b);
    const double step = a.grid().step;
    auto cost = detail::pair_costs(a.size(), b.size(), [&](std::size_t x, std::size_t y, std::size_t x2, std::size_t y2) {
        return double(detail::minimal_radius(ia, x, x2, ib, y, y2, step, a, b));
    });
    auto [j, r] = detail::best_correspondence(a.size(), b.size(), cost);
    const auto jj = std::size_t(j);
    return {double(jj) * step, jj, r};
}

/// Multiplicative slack: window radius floor(eps / (lambda step)) samples, additive slack eps.
inline OracleResult ddyn_multiplicative(const SampledDMS& a, const SampledDMS& b, double lambda) {
    detail::check_pair(a, b);
    if (!(lambda > 0.0)) throw config_error("lambda must be positive");
    const IntervalMinIndex ia(a), ib(b);
    const double step = a.grid().step;
    const std::size_t T = a.count();
    auto cost = detail::pair_costs(a.size(), b.size(), [&](std::size_t x, std::size_t y, std::size_t x2, std::size_t y2) {
        double worst = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t w = 0; w < T; ++w) {
                const std::size_t lo = t >= w ? t - w : 0, hi = std::min(T - 1, t + w);
                const double e = std::max({double(w) * lambda * step, ia.query(x, x2, lo, hi) - b(t, y, y2),
                                           ib.query(y, y2, lo, hi) - a(t, x, x2), 0.0});
                best = std::min(best, e);
            }
            worst = std::max(worst, best);
        }
        return worst;
    });
    auto [v, r] = detail::best_correspondence(a.size(), b.size(), cost);
    return {v, 0, r};
}

/// min over R of max over samples of the instantaneous distortion.
inline OracleResult dyn_gh(const SampledDMS& a, const SampledDMS& b) {
    detail::check_pair(a, b);
    const std::size_t T = a.count();
    auto cost = detail::pair_costs(a.size(), b.size(), [&](std::size_t x, std::size_t y, std::size_t x2, std::size_t y2) {
        double worst = 0.0;
        for (std::size_t t = 0; t < T; ++t) worst = std::max(worst, std::abs(a(t, x, x2) - b(t, y, y2)));
        return worst;
    });
    auto [v, r] = detail::best_correspondence(a.size(), b.size(), cost);
    return {v, 0, r};
}

/// Gromov-Hausdorff distance: half the least distortion of a correspondence.
inline OracleResult gh_bruteforce(const DistanceMatrix& a, const DistanceMatrix& b) {
    a.validate();
    b.validate();
    detail::check_oracle_size(a.size(), b.size());
    auto cost = detail::pair_costs(a.size(), b.size(), [&](std::size_t x, std::size_t y, std::size_t x2, std::size_t y2) {
        return std::abs(a(x, x2) - b(y, y2));
    });
    auto [v, r] = detail::best_correspondence(a.size(), b.size(), cost);
    return {v / 2.0, 0, r};
}

/// Weighted l^p mean over samples of the per-slice GH distance (uniform weights by default).
inline double weak_lp_gh(const SampledDMS& a, const SampledDMS& b, double p, std::vector<double> weights = {}) {
    detail::check_pair(a, b);
    if (!(p >= 1.0) || !std::isfinite(p)) throw config_error("p must lie in [1, inf)");
    const std::size_t T = a.count();
    if (weights.empty()) weights.assign(T, 1.0 / double(T));
    if (weights.size() != T) throw config_error("one weight per sample expected");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw config_error("weights must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw config_error("weights must sum to 1");
    double acc = 0.0;
    for (std::size_t t = 0; t < T; ++t)
        if (weights[t] > 0.0) acc += weights[t] * std::pow(gh_bruteforce(a.slice(t), b.slice(t)).value, p);
    return std::pow(acc, 1.0 / p);
}

}  // namespace dynatda
