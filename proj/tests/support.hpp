#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <dynatda/dynatda.hpp>

namespace testing_support {

using namespace dynatda;

inline DistanceMatrix random_semimetric(std::mt19937_64& rng, std::size_t n, double lo = 0.1, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    DistanceMatrix d(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, u(rng));
    return d;
}

/// Euclidean distances of random points in the plane, rounded to a grid so ties occur.
inline DistanceMatrix random_metric(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> u(0, 8);
    std::vector<std::pair<double, double>> p;
    for (std::size_t i = 0; i < n; ++i) p.emplace_back(u(rng), u(rng));
    DistanceMatrix d(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = std::hypot(p[i].first - p[j].first, p[i].second - p[j].second);
            d.set(i, j, v == 0.0 ? 0.5 : v);
        }
    return d;
}

/// Points moving in the plane with bounded speed.
inline SampledDMS random_walk_dms(std::mt19937_64& rng, std::size_t n, std::size_t count, double step,
                                  double speed, const std::string& prefix = "p") {
    std::uniform_real_distribution<double> start(-1.0, 1.0), ang(0.0, 2.0 * std::numbers::pi);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = start(rng);
        y[i] = start(rng);
    }
    std::vector<double> dist(count * n * n, 0.0);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
    for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double v = std::hypot(x[i] - x[j], y[i] - y[j]);
                dist[(k * n + i) * n + j] = dist[(k * n + j) * n + i] = v;
            }
        for (std::size_t i = 0; i < n; ++i) {
            double a = ang(rng);
            x[i] += speed * step * std::cos(a);
            y[i] += speed * step * std::sin(a);
        }
    }
    return SampledDMS(names, TimeGrid{0.0, step, count}, std::move(dist));
}

/// Random semi-metric tensor with values on a coarse lattice.
inline SampledDMS random_tensor_dms(std::mt19937_64& rng, std::size_t n, std::size_t count, double step,
                                    int levels = 5, double unit = 0.2) {
    std::uniform_int_distribution<int> u(1, levels);
    std::vector<double> dist(count * n * n, 0.0);
    for (std::size_t k = 0; k < count; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) dist[(k * n + i) * n + j] = dist[(k * n + j) * n + i] = u(rng) * unit;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("q" + std::to_string(i));
    return SampledDMS(names, TimeGrid{0.0, step, count}, std::move(dist));
}

inline DistanceMatrix two_point(double d) {
    DistanceMatrix m(2);
    m.set(0, 1, d);
    return m;
}

/// Connected components of the threshold graph by breadth-first search.
inline std::vector<std::vector<std::size_t>> bfs_components(const DistanceMatrix& d, double delta) {
    const std::size_t n = d.size();
    std::vector<int> label(n, -1);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t s = 0; s < n; ++s) {
        if (label[s] >= 0) continue;
        std::vector<std::size_t> block{s}, queue{s};
        label[s] = int(out.size());
        while (!queue.empty()) {
            std::size_t v = queue.back();
            queue.pop_back();
            for (std::size_t w = 0; w < n; ++w)
                if (label[w] < 0 && w != v && d(v, w) <= delta) {
                    label[w] = int(out.size());
                    block.push_back(w);
                    queue.push_back(w);
                }
        }
        std::sort(block.begin(), block.end());
        out.push_back(block);
    }
    return out;
}

}  // namespace testing_support
