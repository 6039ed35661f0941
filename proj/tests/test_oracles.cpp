#include <gtest/gtest.h>

#include <numbers>

#include "support.hpp"

using namespace dynatda;
using namespace testing_support;

namespace {

constexpr double pi = std::numbers::pi;

double grid_ceil(double v, double step) { return step * std::ceil(v / step - 1e-9); }

// every relation by bitmask, the slow way
double gh_by_enumeration(const DistanceMatrix& a, const DistanceMatrix& b) {
    const std::size_t nx = a.size(), ny = b.size(), m = nx * ny;
    double best = std::numeric_limits<double>::infinity();
    for (unsigned r = 1; r < (1u << m); ++r) {
        Correspondence c{nx, ny, {}};
        for (std::size_t z = 0; z < m; ++z)
            if (r >> z & 1u) c.pairs.emplace_back(z / ny, z % ny);
        if (!c.is_surjective()) continue;
        double dis = 0.0;
        for (auto [x, y] : c.pairs)
            for (auto [x2, y2] : c.pairs) dis = std::max(dis, std::abs(a(x, x2) - b(y, y2)));
        best = std::min(best, dis);
    }
    return best / 2.0;
}

DistanceMatrix scaled_triangle(double a, double b, double c) {
    DistanceMatrix d(3);
    d.set(0, 1, a);
    d.set(0, 2, b);
    d.set(1, 2, c);
    return d;
}

}  // namespace

TEST(Correspondence, Surjectivity) {
    EXPECT_TRUE(Correspondence::identity(3).is_surjective());
    EXPECT_FALSE((Correspondence{2, 2, {{0, 0}, {1, 0}}}).is_surjective());
    EXPECT_TRUE((Correspondence{2, 1, {{0, 0}, {1, 0}}}).is_surjective());
}

TEST(DynDistortion, IdentityAndConstants) {
    std::mt19937_64 rng(1);
    SampledDMS x = random_walk_dms(rng, 3, 9, 0.1, 1.0);
    EXPECT_TRUE(dyn_distortion(x, x, Correspondence::identity(3), 0.0).ok);
    const TimeGrid g{0.0, 0.25, 5};
    SampledDMS a = make_constant(two_point(1.0), g), b = make_constant(two_point(2.0), g);
    auto id = Correspondence::identity(2);
    EXPECT_FALSE(dyn_distortion(a, b, id, 0.25).ok);
    EXPECT_TRUE(dyn_distortion(a, b, id, 0.5).ok);  // |1 - 2| <= 2 * 0.5
    EXPECT_THROW(dyn_distortion(a, b, id, -0.25), config_error);
    EXPECT_THROW(dyn_distortion(a, b, id, 0.3), config_error);
    EXPECT_THROW(dyn_distortion(a, b, Correspondence{2, 2, {{0, 0}}}, 0.25), validation_error);
}

TEST(DynDistortion, FigurePairReportsViolation) {
    const TimeGrid g{-2 * pi, pi / 64, 257};
    SampledDMS x = make_figure1_x(1.0, g), y = make_figure1_y(1.0, g);
    auto check = dyn_distortion(x, y, Correspondence::identity(3), 2 * g.step);
    ASSERT_FALSE(check.ok);
    ASSERT_TRUE(check.violation.has_value());
    const auto& v = *check.violation;
    EXPECT_GT(v.window_min, v.bound);
    // the two middle points only disagree where sin t < 0
    EXPECT_LT(std::sin(g.time(v.t)), 0.0);
}

TEST(DdynBruteforce, IdentityDemonstrationAndConstants) {
    std::mt19937_64 rng(2);
    SampledDMS x = random_walk_dms(rng, 3, 9, 0.1, 1.0);
    EXPECT_EQ(ddyn_bruteforce(x, x).value, 0.0);
    const TimeGrid g{0.0, 0.125, 9};
    for (double eps : {0.25, 0.5, 1.0}) {
        auto r = ddyn_bruteforce(make_constant(two_point(1.0), g), make_constant(two_point(1.0 + eps), g));
        EXPECT_DOUBLE_EQ(r.value, eps / 2.0);
        EXPECT_DOUBLE_EQ(gh_bruteforce(two_point(1.0), two_point(1.0 + eps)).value, eps / 2.0);
    }
    for (int trial = 0; trial < 30; ++trial) {
        DistanceMatrix a = random_metric(rng, 1 + std::size_t(trial % 3)), b = random_metric(rng, 1 + std::size_t(trial % 4));
        const double gh = gh_bruteforce(a, b).value;
        ASSERT_DOUBLE_EQ(gh, gh_by_enumeration(a, b));
        auto r = ddyn_bruteforce(make_constant(a, g), make_constant(b, g));
        ASSERT_NEAR(r.value, grid_ceil(gh, g.step), 1e-12);
        ASSERT_EQ(r.grid_multiple, std::size_t(std::llround(r.value / g.step)));
    }
}

TEST(DdynBruteforce, SizeCap) {
    const TimeGrid g{0.0, 1.0, 2};
    SampledDMS big = make_constant(DistanceMatrix(5, 1.0), g);
    SampledDMS small = make_constant(two_point(1.0), g);
    EXPECT_THROW(ddyn_bruteforce(big, small), size_cap_error);
    EXPECT_THROW(gh_bruteforce(DistanceMatrix(5, 1.0), two_point(1.0)), size_cap_error);
    EXPECT_THROW(dyn_gh(small, big), size_cap_error);
    SampledDMS other = make_constant(two_point(1.0), TimeGrid{0.0, 0.5, 2});
    EXPECT_THROW(ddyn_bruteforce(small, other), config_error);
}

TEST(DdynBruteforce, PseudoMetricAxioms) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 25; ++trial) {
        SampledDMS a = random_walk_dms(rng, 2 + std::size_t(trial % 2), 7, 0.1, 2.0, "a");
        SampledDMS b = random_walk_dms(rng, 2, 7, 0.1, 2.0, "b");
        SampledDMS c = random_walk_dms(rng, 3, 7, 0.1, 2.0, "c");
        const double ab = ddyn_bruteforce(a, b).value, ba = ddyn_bruteforce(b, a).value;
        ASSERT_EQ(ab, ba);
        const double ac = ddyn_bruteforce(a, c).value, bc = ddyn_bruteforce(b, c).value;
        ASSERT_LE(ac, ab + bc + 0.1 + 1e-12);
        ASSERT_EQ(ddyn_bruteforce(a, a).value, 0.0);
    }
}

TEST(DdynBruteforce, ChosenCorrespondencePassesTheCheck) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        SampledDMS a = random_walk_dms(rng, 3, 8, 0.1, 2.0), b = random_walk_dms(rng, 2, 8, 0.1, 2.0);
        auto r = ddyn_bruteforce(a, b);
        ASSERT_TRUE(dyn_distortion(a, b, r.best, r.value).ok);
        if (r.grid_multiple > 0) {
            // no correspondence works one step below
            const double below = r.value - 0.1;
            for (unsigned mask = 1; mask < (1u << 6); ++mask) {
                Correspondence c{3, 2, {}};
                for (std::size_t z = 0; z < 6; ++z)
                    if (mask >> z & 1u) c.pairs.emplace_back(z / 2, z % 2);
                if (c.is_surjective()) {
                    ASSERT_FALSE(dyn_distortion(a, b, c, std::max(0.0, std::round(below * 10) / 10)).ok);
                }
            }
        }
    }
}

TEST(DynGh, ExamplesAndSliceBound) {
    const TimeGrid g{-2 * pi, pi / 16, 65};
    SampledDMS x = make_figure1_x(1.0, g), y = make_figure1_y(1.0, g);
    EXPECT_GT(dyn_gh(x, y).value, 0.0);
    EXPECT_EQ(dyn_gh(x, x).value, 0.0);
    DistanceMatrix p = scaled_triangle(1, 2, 2.5), q = scaled_triangle(1.5, 1.5, 2);
    const TimeGrid c{0.0, 0.5, 4};
    EXPECT_DOUBLE_EQ(dyn_gh(make_constant(p, c), make_constant(q, c)).value, 2.0 * gh_bruteforce(p, q).value);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        SampledDMS a = random_walk_dms(rng, 3, 6, 0.1, 3.0), b = random_walk_dms(rng, 3, 6, 0.1, 3.0);
        double sup_slice = 0.0;
        for (std::size_t t = 0; t < 6; ++t) sup_slice = std::max(sup_slice, gh_bruteforce(a.slice(t), b.slice(t)).value);
        const double dg = dyn_gh(a, b).value;
        ASSERT_GE(dg / 2.0 + 1e-12, sup_slice);
        ASSERT_LE(ddyn_bruteforce(a, b).value, grid_ceil(dg / 2.0, 0.1) + 1e-12);
    }
}

TEST(Multiplicative, LimitsAndConstants) {
    std::mt19937_64 rng(6);
    SampledDMS a = random_walk_dms(rng, 3, 8, 0.1, 2.0), b = random_walk_dms(rng, 3, 8, 0.1, 2.0);
    EXPECT_EQ(ddyn_multiplicative(a, a, 2.0).value, 0.0);
    EXPECT_DOUBLE_EQ(ddyn_multiplicative(a, b, 1e9).value, dyn_gh(a, b).value);
    double prev = 0.0;
    for (double lambda : {0.5, 1.0, 2.0, 8.0, 64.0}) {
        const double v = ddyn_multiplicative(a, b, lambda).value;
        EXPECT_GE(v + 1e-12, prev);
        EXPECT_LE(v, dyn_gh(a, b).value + 1e-12);
        prev = v;
    }
    DistanceMatrix p = scaled_triangle(1, 2, 2.5), q = scaled_triangle(1.5, 1.5, 2);
    const TimeGrid c{0.0, 0.5, 4};
    for (double lambda : {0.5, 2.0, 10.0})
        EXPECT_DOUBLE_EQ(ddyn_multiplicative(make_constant(p, c), make_constant(q, c), lambda).value,
                         2.0 * gh_bruteforce(p, q).value);
    EXPECT_THROW(ddyn_multiplicative(a, b, 0.0), config_error);
}

TEST(WeakLp, Examples) {
    const TimeGrid g{-2 * pi, pi / 16, 65};
    SampledDMS x = make_figure1_x(1.0, g), y = make_figure1_y(1.0, g);
    EXPECT_NEAR(weak_lp_gh(x, y, 1.0), 0.0, 1e-12);
    EXPECT_NEAR(weak_lp_gh(x, y, 3.0), 0.0, 1e-12);
    DistanceMatrix p = scaled_triangle(1, 2, 2.5), q = scaled_triangle(1.5, 1.5, 2);
    const TimeGrid c{0.0, 0.5, 4};
    for (double pp : {1.0, 2.0, 7.0})
        EXPECT_NEAR(weak_lp_gh(make_constant(p, c), make_constant(q, c), pp), gh_bruteforce(p, q).value, 1e-12);
    EXPECT_THROW(weak_lp_gh(x, y, 0.5), config_error);
    EXPECT_THROW(weak_lp_gh(make_constant(p, c), make_constant(q, c), 1.0, {0.5, 0.5, 0.5, 0.5}), config_error);
    EXPECT_NEAR(weak_lp_gh(make_constant(p, c), make_constant(q, c), 1.0, {1.0, 0.0, 0.0, 0.0}),
                gh_bruteforce(p, q).value, 1e-12);
}

TEST(GromovHausdorff, IsometryAndSlhcStability) {
    DistanceMatrix p = scaled_triangle(1, 2, 2.5);
    DistanceMatrix perm = scaled_triangle(2.5, 2, 1);
    EXPECT_EQ(gh_bruteforce(p, perm).value, 0.0);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        DistanceMatrix a = random_metric(rng, 2 + std::size_t(trial % 3)), b = random_metric(rng, 4);
        ASSERT_LE(gh_bruteforce(slhc(a).ultrametric, slhc(b).ultrametric).value, gh_bruteforce(a, b).value + 1e-12);
    }
}

TEST(Stability, InvariantDistancesBelowTwiceDdyn) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 25; ++trial) {
        SampledDMS a = random_walk_dms(rng, 3, 11, 0.1, 2.0), b = random_walk_dms(rng, 3, 11, 0.1, 2.0);
        const double dd = ddyn_bruteforce(a, b).value;
        auto rb = compare_betti0(a, b);
        const double slack = 4.0 * rb.lipschitz * rb.alpha + rb.step;
        ASSERT_LE(rb.d_I_physical, 2.0 * dd + slack + 1e-9);
        ASSERT_LE(rb.d_dyn_lower_bound, dd + 1e-9);
        auto r0 = compare_rank(a, b, 0);
        ASSERT_LE(r0.d_I_physical, 2.0 * dd + slack + 1e-9);
    }
    // degree one on the generic 6-D grid, kept short
    for (int trial = 0; trial < 4; ++trial) {
        SampledDMS a = random_walk_dms(rng, 3, 5, 0.1, 2.0), b = random_walk_dms(rng, 3, 5, 0.1, 2.0);
        const double dd = ddyn_bruteforce(a, b).value;
        auto r1 = compare_rank(a, b, 1);
        ASSERT_LE(r1.d_I_physical, 2.0 * dd + 4.0 * r1.lipschitz * r1.alpha + r1.step + 1e-9);
    }
}
