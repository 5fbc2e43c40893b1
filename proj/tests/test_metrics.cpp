#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "support.hpp"

using namespace topoloss;
using namespace testing_support;

namespace {

RegionLabeling labels(int h, int w, std::vector<int> v) { return {h, w, std::move(v)}; }

RegionLabeling permuted(const RegionLabeling& l, std::mt19937_64& rng) {
    std::vector<int> ids(static_cast<std::size_t>(l.region_count()));
    std::iota(ids.begin(), ids.end(), 1);
    std::shuffle(ids.begin(), ids.end(), rng);
    std::vector<int> out;
    for (int v : l.values())
        out.push_back(v == 0 ? 0 : ids[static_cast<std::size_t>(v - 1)]);
    return {l.height(), l.width(), out};
}

// Conditional entropies summed directly over the joint distribution.
double voi_oracle(const Grid<int>& a, const Grid<int>& b) {
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> pa;
    std::map<int, double> pb;
    double n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (b.values()[i] == 0)
            continue;
        joint[{a.values()[i], b.values()[i]}] += 1;
        pa[a.values()[i]] += 1;
        pb[b.values()[i]] += 1;
        n += 1;
    }
    double h_joint = 0, h_a = 0, h_b = 0;
    for (auto& [k, c] : joint)
        h_joint -= c / n * std::log(c / n);
    for (auto& [k, c] : pa)
        h_a -= c / n * std::log(c / n);
    for (auto& [k, c] : pb)
        h_b -= c / n * std::log(c / n);
    return 2 * h_joint - h_a - h_b;
}

} // namespace

TEST(Regions, Labeling) {
    const auto all = label_regions(BinaryMask(4, 4, std::uint8_t{0}));
    EXPECT_EQ(all.region_count(), 1);
    for (int v : all.values())
        EXPECT_EQ(v, 1);

    const auto ring = label_regions(threshold(fixtures::ring(21), 0.5));
    EXPECT_EQ(ring.region_count(), 2);
    EXPECT_EQ(ring(0, 0), 1);
    EXPECT_EQ(ring(10, 10), 2);

    const auto broken = label_regions(threshold(fixtures::broken_ring(21, 0.1).pred, 0.5));
    EXPECT_EQ(broken.region_count(), 1);
}

TEST(Accuracy, Examples) {
    const auto g = mask(2, 2, {1, 0, 0, 1});
    EXPECT_EQ(pixel_accuracy(g, g), 1.0);
    EXPECT_EQ(pixel_accuracy(mask(2, 2, {0, 1, 1, 0}), g), 0.0);
    EXPECT_EQ(pixel_accuracy(mask(2, 2, {1, 1, 0, 1}), g), 0.75);
    EXPECT_THROW(pixel_accuracy(mask(2, 3, {0, 0, 0, 0, 0, 0}), g), ValidationError);
}

TEST(AdaptedRand, MergedRegions) {
    // Ground truth: columns 0 and 2 are regions, columns 1 and 3 membrane.
    const auto gt = label_regions(mask(4, 4, {0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1}));
    const auto pred = label_regions(BinaryMask(4, 4, std::uint8_t{0}));
    ASSERT_EQ(gt.region_count(), 2);
    // p = (16 + 16) / 64, r = 1.
    EXPECT_DOUBLE_EQ(adapted_rand(pred, gt), 2.0 / 3.0);
    EXPECT_NEAR(variation_of_information(pred, gt), std::log(2.0), 1e-15);
}

TEST(AdaptedRand, IdenticalAndPermutationInvariant) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 30; ++t) {
        const auto a = label_regions(random_mask(9, 9, 0.4, rng));
        const auto b = label_regions(random_mask(9, 9, 0.4, rng));
        EXPECT_EQ(adapted_rand(a, a), 1.0);
        EXPECT_EQ(variation_of_information(a, a), 0.0);
        EXPECT_NEAR(adapted_rand(permuted(a, rng), b), adapted_rand(a, b), 1e-12);
        EXPECT_NEAR(variation_of_information(permuted(a, rng), permuted(b, rng)),
                    variation_of_information(a, b), 1e-12);
    }
}

TEST(AdaptedRand, OneOnlyForIdenticalRestrictedPartitions) {
    std::mt19937_64 rng(19);
    for (int t = 0; t < 200; ++t) {
        const auto a = label_regions(random_mask(5, 5, 0.35, rng));
        const auto b = label_regions(random_mask(5, 5, 0.35, rng));
        bool same = true;
        // Same partition on gt != 0: labels correspond one to one.
        std::map<int, int> fwd, bwd;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const int x = a.values()[i];
            const int y = b.values()[i];
            if (y == 0)
                continue;
            auto [it, ins] = fwd.emplace(x, y);
            auto [jt, jns] = bwd.emplace(y, x);
            if (it->second != y || jt->second != x)
                same = false;
        }
        if (fwd.empty())
            continue;
        EXPECT_EQ(adapted_rand(a, b) == 1.0, same);
    }
}

TEST(Voi, SplitInHalfIsLnTwo) {
    const auto gt = labels(4, 4, std::vector<int>(16, 1));
    const auto pred = labels(4, 4, {1, 1, 2, 2, 1, 1, 2, 2, 1, 1, 2, 2, 1, 1, 2, 2});
    EXPECT_EQ(variation_of_information(pred, gt), std::log(2.0));
    EXPECT_EQ(variation_of_information(gt, pred), std::log(2.0));
}

TEST(Voi, MatchesEntropyOracleAndIsAMetric) {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 40; ++t) {
        // Full-domain labelings so that the restriction is the same for all three.
        std::uniform_int_distribution<int> lab(1, 4);
        auto random_labels = [&] {
            std::vector<int> v(49);
            for (int& x : v)
                x = lab(rng);
            return labels(7, 7, v);
        };
        const auto a = random_labels();
        const auto b = random_labels();
        const auto c = random_labels();
        EXPECT_NEAR(variation_of_information(a, b), voi_oracle(a, b), 1e-12);
        EXPECT_NEAR(variation_of_information(a, b), variation_of_information(b, a), 1e-12);
        EXPECT_LE(variation_of_information(a, c),
                  variation_of_information(a, b) + variation_of_information(b, c) + 1e-12);
    }
}

TEST(Voi, EmptyDomainIsAnError) {
    const auto gt = label_regions(BinaryMask(3, 3, std::uint8_t{1}));
    EXPECT_THROW(variation_of_information(gt, gt), ValidationError);
    EXPECT_THROW(adapted_rand(gt, gt), ValidationError);
}

TEST(BettiError, IdenticalIsZero) {
    std::mt19937_64 rng(1);
    const auto m = random_mask(40, 40, 0.5, rng);
    for (std::uint64_t seed : {0u, 1u, 99u})
        EXPECT_EQ(betti_error(m, m, {20, 16, seed}), 0.0);
}

TEST(BettiError, BrokenRingDiffersByOneHandle) {
    const auto fx = fixtures::broken_ring(65, 0.1);
    const auto pred = threshold(fx.pred, 0.5);
    EXPECT_EQ(betti_error(pred, fx.truth, {10, 65, 3}), 1.0);
    EXPECT_EQ(betti_error(pred, fx.truth, {10, 65, 3, 0}), 0.0);
}

TEST(BettiError, PatchTooLarge) {
    const BinaryMask m(10, 10, std::uint8_t{0});
    EXPECT_THROW(betti_error(m, m), std::invalid_argument);
}

TEST(Evaluate, IdenticalMasks) {
    const auto g = threshold(fixtures::ring(65), 0.5);
    const auto s = evaluate_segmentation(g, g);
    EXPECT_EQ(s.accuracy, 1.0);
    EXPECT_EQ(s.ari, 1.0);
    EXPECT_EQ(s.voi, 0.0);
    EXPECT_EQ(s.betti_error, 0.0);
}
