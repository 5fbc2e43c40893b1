#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace topoloss;
using namespace testing_support;

namespace {

BinaryMask ring_mask(int size) { return threshold(fixtures::ring(size), 0.5); }

} // namespace

TEST(Bce, PerfectPrediction) {
    const auto g = ring_mask(15);
    const auto r = bce_loss(g.to_likelihood(), g);
    EXPECT_NEAR(r.value, -std::log1p(-bce_epsilon), 1e-15);
    for (double v : r.gradient.values())
        EXPECT_EQ(v, 0.0);
}

TEST(Bce, HalfOnForeground) {
    const auto r = bce_loss(Grid<double>(2, 2, 0.5), BinaryMask(2, 2, std::uint8_t{1}));
    EXPECT_NEAR(r.value, std::log(2.0), 1e-15);
    const auto s = bce_loss(Grid<double>(2, 2, 0.5), BinaryMask(2, 2, std::uint8_t{1}), Reduction::sum);
    EXPECT_NEAR(s.value, 4.0 * std::log(2.0), 1e-14);
}

TEST(Bce, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int t = 0; t < 10; ++t) {
        std::vector<double> v(64);
        for (double& x : v)
            x = u(rng);
        const Grid<double> f(8, 8, v);
        const auto g = random_mask(8, 8, 0.5, rng);
        EXPECT_LT(bce_fd_relative_error(f, g, Reduction::mean), 1e-6);
        EXPECT_LT(bce_fd_relative_error(f, g, Reduction::sum), 1e-6);
    }
}

TEST(Bce, ShapeMismatch) {
    EXPECT_THROW(bce_loss(Grid<double>(2, 3, 0.5), BinaryMask(3, 2, std::uint8_t{0})), ValidationError);
}

TEST(TopoGrad, IdenticalDiagramsGiveZero) {
    const auto g = ring_mask(17);
    const auto r = topo_grad(g.to_likelihood(), g);
    EXPECT_EQ(r.l_topo, 0.0);
    EXPECT_TRUE(r.topo_gradient.empty());
}

TEST(TopoGrad, WeakRingPulledUp) {
    const auto g = ring_mask(17);
    const auto f = fixtures::ring(17, 0.7);
    const auto r = topo_grad(f, g);
    ASSERT_EQ(r.pred_diagram.dim1.size(), 1u);
    const Pixel cb = *r.pred_diagram.dim1[0].birth_pixel;
    EXPECT_EQ(f[cb], 0.7);
    ASSERT_EQ(r.topo_gradient.entries().size(), 1u);
    EXPECT_NEAR(r.topo_gradient.at(cb), -0.6, 1e-15);
    EXPECT_NEAR(r.l_topo, 0.09, 1e-15);
}

TEST(TopoGrad, ExtraComponentGoesToDiagonal) {
    // Ring at 0.9 plus a separate blob at 0.6; the truth is the ring alone.
    fixtures::Canvas c(21, 21, 0.0);
    const auto geo = fixtures::ring_geometry(21);
    c.ring(geo.centre, geo.centre, geo.radius, geo.half_width, 0.9);
    c.rect(0, 0, 1, 1, 0.6);
    const auto f = c.likelihood();
    const auto g = ring_mask(21);
    const auto r = topo_grad(f, g);
    EXPECT_NEAR(r.l_topo_by_dim[0], 0.18, 1e-15);
    EXPECT_NEAR(r.l_topo_by_dim[1], 0.01, 1e-15);
    EXPECT_NEAR(r.l_topo, 0.19, 1e-15);
    ASSERT_EQ(r.matching[0].pairs.size(), 1u);
    EXPECT_FALSE(r.matching[0].pairs[0].to.has_value());
    // Blob pushed down at its birth pixel, raised at the death pixel.
    const auto& blob = r.pred_diagram.dim0[0];
    EXPECT_NEAR(r.topo_gradient.at(*blob.birth_pixel), 2.0 * (0.6 - 0.3), 1e-15);
    EXPECT_NEAR(r.topo_gradient.at(*blob.death_pixel), 2.0 * (0.0 - 0.3), 1e-15);
}

TEST(TopoGrad, DeeperGapCostsMore) {
    const auto shallow = fixtures::broken_ring(11, 0.4, 1.0);
    const auto deep = fixtures::broken_ring(11, 0.1, 1.0);
    const double a = topo_grad(shallow.pred, shallow.truth).l_topo;
    const double b = topo_grad(deep.pred, deep.truth).l_topo;
    EXPECT_NEAR(a, 0.36, 1e-15);
    EXPECT_NEAR(b, 0.505, 1e-15);
    EXPECT_GT(b, a);
}

TEST(TopoGrad, GradientLocality) {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 20; ++t) {
        const auto f = distinct_map(8, 8, rng);
        const auto g = random_mask(8, 8, 0.4, rng);
        for (bool rel : {false, true}) {
            const auto r = topo_grad(f, g, {DimensionSet::both(), rel});
            std::set<Pixel> critical;
            for (int d = 0; d < 2; ++d)
                for (const auto& p : r.pred_diagram.dots(d)) {
                    if (p.birth_pixel)
                        critical.insert(*p.birth_pixel);
                    if (p.death_pixel)
                        critical.insert(*p.death_pixel);
                }
            EXPECT_LE(r.topo_gradient.entries().size(), 2 * r.pred_diagram.size());
            for (const auto& [p, v] : r.topo_gradient.entries())
                EXPECT_TRUE(critical.count(p));
        }
    }
}

TEST(TopoGrad, FiniteDifferences) {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 15; ++t) {
        const auto f = distinct_map(9, 9, rng);
        const auto g = random_mask(9, 9, 0.5, rng);
        for (bool rel : {false, true}) {
            const auto res = topo_fd_check(f, g, {DimensionSet::both(), rel});
            EXPECT_LT(res.max_abs_error, 1e-5);
            EXPECT_GT(res.checked, 0);
        }
    }
}

TEST(TopoGrad, FirstOrderChangeUnderSmallPerturbation) {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto f = distinct_map(7, 7, rng);
    const auto g = random_mask(7, 7, 0.5, rng);
    const auto r = topo_grad(f, g);
    // Steps far below the value spacing keep the order and matching fixed.
    const double h = 1e-5;
    std::vector<double> v(f.values().begin(), f.values().end());
    std::vector<double> dir(v.size());
    double predicted = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        dir[i] = u(rng);
        v[i] += h * dir[i];
        predicted += h * dir[i] * r.topo_gradient.at(f.pixel(i));
    }
    const double moved = topo_grad(Grid<double>(7, 7, v), g).l_topo;
    EXPECT_NEAR(moved - r.l_topo, predicted, 1e-8);
}

TEST(TotalLoss, LambdaZeroIsBce) {
    std::mt19937_64 rng(7);
    const auto f = distinct_map(6, 6, rng);
    const auto g = random_mask(6, 6, 0.5, rng);
    const auto r = total_loss(f, g, 0.0);
    const auto b = bce_loss(f, g);
    EXPECT_EQ(r.l_total, r.l_bce);
    EXPECT_EQ(r.l_bce, b.value);
    EXPECT_EQ(*r.total_gradient, b.gradient);
}

TEST(TotalLoss, Recomposes) {
    const auto fx = fixtures::broken_ring(15, 0.3);
    const auto r = total_loss(fx.pred, fx.truth, 1.0);
    EXPECT_EQ(r.l_total, bce_loss(fx.pred, fx.truth).value +
                             topo_loss_value(compute_diagram(fx.pred), compute_diagram(fx.truth.to_likelihood())));
    EXPECT_EQ(r.l_topo, r.l_topo_by_dim[0] + r.l_topo_by_dim[1]);
    const auto dense = r.topo_gradient.dense();
    const auto bce = bce_loss(fx.pred, fx.truth).gradient;
    for (std::size_t i = 0; i < dense.size(); ++i)
        EXPECT_EQ(r.total_gradient->values()[i], bce.values()[i] + dense.values()[i]);
    EXPECT_THROW(total_loss(fx.pred, fx.truth, -1.0), ValidationError);
}

TEST(TotalLoss, BinaryIdenticalHasZeroTopo) {
    const auto g = threshold(fixtures::figure_eight(), 0.5);
    EXPECT_EQ(total_loss(g.to_likelihood(), g, 1.0).l_topo, 0.0);
}

// Without the frame, a map whose only difference from g is the essential
// class has zero loss but different Betti numbers; relative mode sees it.
TEST(TotalLoss, EssentialClassIsInvisibleWithoutFrame) {
    const Grid<double> f(7, 7, 0.3);
    fixtures::Canvas c(7, 7, 0.0);
    c.rect(2, 2, 4, 4, 1.0);
    const auto g = c.mask();
    EXPECT_EQ(topo_grad(f, g).l_topo, 0.0);
    EXPECT_NE(betti_at_threshold(f, 0.5), betti_at_threshold(g.to_likelihood(), 0.5));
    EXPECT_GT(topo_grad(f, g, {DimensionSet::both(), true}).l_topo, 0.0);
}
