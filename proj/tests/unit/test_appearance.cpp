#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "leafret/appearance.hpp"
#include "leafret/errors.hpp"
#include "leafret/segmentation.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace leafret;
using namespace leafret::testing;

namespace {

// 30x30 leaf (rect 5..24) of intensity 0.4 with a vertical bright ridge at x=14.
struct RidgeFixture {
    GrayImage gray{30, 30, 0.9};
    BinaryMask mask = rect_mask(30, 30, 5, 5, 24, 24);
    RidgeFixture() {
        for (int y = 5; y <= 24; ++y)
            for (int x = 5; x <= 24; ++x) gray(x, y) = x == 14 ? 0.5 : 0.4;
    }
};

}  // namespace

TEST(ColorMoments, ConstantColor) {
    RasterImage img(8, 8);
    for (auto& v : img.data()) v = 0.5;
    const auto m = color_moments(img, rect_mask(8, 8, 1, 1, 5, 6));
    for (int c = 0; c < 3; ++c) {
        EXPECT_DOUBLE_EQ(m.mean(c), 0.5);
        EXPECT_DOUBLE_EQ(m.stddev(c), 0.0);
        EXPECT_DOUBLE_EQ(m.skewness(c), 0.0);
    }
}

TEST(ColorMoments, TwoPointDistribution) {
    RasterImage img(4, 2);
    for (int x = 0; x < 4; ++x) {
        img.set(x, 0, {0, 0, 0});
        img.set(x, 1, {1, 1, 1});
    }
    const auto m = color_moments(img, BinaryMask(4, 2, 1));
    for (int c = 0; c < 3; ++c) {
        EXPECT_DOUBLE_EQ(m.mean(c), 0.5);
        EXPECT_DOUBLE_EQ(m.stddev(c), 0.5);
        EXPECT_DOUBLE_EQ(m.skewness(c), 0.0);
    }
}

TEST(ColorMoments, MatchesDirectSummation) {
    std::mt19937_64 g(29);
    for (int trial = 0; trial < 100; ++trial) {
        const int w = 1 + static_cast<int>(g() % 40), h = 1 + static_cast<int>(g() % 40);
        const RasterImage img = random_raster(g, w, h);
        const BinaryMask mask = random_mask(g, w, h, 0.6);
        if (mask.empty()) continue;
        const auto m = color_moments(img, mask);
        const auto o = oracle_color_moments(img, mask);
        for (int i = 0; i < 9; ++i) EXPECT_NEAR(m.values[i], o[i], 1e-12);
        for (int c = 0; c < 3; ++c) {
            EXPECT_GE(m.mean(c), 0.0);
            EXPECT_LE(m.mean(c), 1.0);
            EXPECT_LE(m.stddev(c), 0.5);
            EXPECT_GE(m.skewness(c), -1.0);
            EXPECT_LE(m.skewness(c), 1.0);
        }
    }
}

TEST(ColorMoments, PermutationInvariantAndSignedSkew) {
    std::mt19937_64 g(31);
    RasterImage img = random_raster(g, 10, 10);
    // Skew the red channel: mostly low values with a few highs.
    for (int i = 0; i < 100; ++i) img.data()[3 * i] = i % 10 == 0 ? 0.9 : 0.1;
    const BinaryMask all(10, 10, 1);
    const auto m = color_moments(img, all);
    EXPECT_GT(m.skewness(0), 0.0);

    RasterImage shuffled = img;
    std::vector<int> perm(100);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), g);
    for (int i = 0; i < 100; ++i) {
        const auto px = img.at(perm[i] % 10, perm[i] / 10);
        shuffled.set(i % 10, i / 10, px);
    }
    const auto s = color_moments(shuffled, all);
    for (int i = 0; i < 9; ++i) EXPECT_NEAR(m.values[i], s.values[i], 1e-12);

    for (int i = 0; i < 100; ++i) img.data()[3 * i] = 1.0 - img.data()[3 * i];
    EXPECT_LT(color_moments(img, all).skewness(0), 0.0);
}

TEST(ColorMoments, Errors) {
    RasterImage img(4, 4);
    EXPECT_THROW(color_moments(img, BinaryMask(4, 4)), EmptySegmentationError);
    EXPECT_THROW(color_moments(img, BinaryMask(3, 4, 1)), std::invalid_argument);
}

TEST(Veins, FlatLeafHasNoVeins) {
    GrayImage gray(30, 30, 0.4);
    const BinaryMask mask = rect_mask(30, 30, 5, 5, 24, 24);
    EXPECT_EQ(vein_image(gray, mask, 1, {}).count(), 0u);
    const auto f = vein_features(gray, mask, {});
    for (double v : f.values) EXPECT_EQ(v, 0.0);
}

TEST(Veins, RidgeFixture) {
    const RidgeFixture fx;
    const BinaryMask v1 = vein_image(fx.gray, fx.mask, 1, {});
    // Ridge pixels minus the one-pixel margin band at the top and bottom rows.
    BinaryMask expect = rect_mask(30, 30, 14, 6, 14, 23);
    EXPECT_EQ(v1, expect);

    VeinConfig strict;
    strict.tau = 0.2;
    EXPECT_EQ(vein_image(fx.gray, fx.mask, 1, strict).count(), 0u);

    const auto f = vein_features(fx.gray, fx.mask, {});
    EXPECT_DOUBLE_EQ(f.values[0], 18.0 / 400.0);
}

TEST(Veins, MarginBandIsMaskMinusErosion) {
    const BinaryMask mask = rect_mask(12, 12, 2, 2, 9, 9);
    const BinaryMask band = margin_band(mask, 1);
    EXPECT_EQ(band.count(), 8u * 8u - 6u * 6u);
    EXPECT_EQ(margin_band(mask, 0).count(), 0u);
}

TEST(Veins, ResidueNonNegativeAndMonotone) {
    std::mt19937_64 g(37);
    for (int trial = 0; trial < 30; ++trial) {
        const GrayImage gray = random_gray(g, 24, 24);
        const BinaryMask mask = fill_holes(random_mask(g, 24, 24, 0.85));
        if (mask.empty()) continue;
        for (int r = 1; r <= 4; ++r) {
            const GrayImage o = morph_open(gray, DiskSE(r), mask);
            for (std::size_t i = 0; i < o.size(); ++i) {
                if (mask.values()[i]) EXPECT_GE(gray.values()[i] - o.values()[i], 0.0);
            }
        }
        const auto f = vein_features(gray, mask, {});
        ASSERT_EQ(f.values.size(), 4u);
        for (std::size_t i = 0; i < 4; ++i) {
            EXPECT_GE(f.values[i], 0.0);
            EXPECT_LE(f.values[i], 1.0);
            if (i > 0) EXPECT_LE(f.values[i - 1], f.values[i]);
        }
    }
}

TEST(Veins, SyntheticLeafHasVeins) {
    const LeafSpecies s = make_species(4, 5);
    Pose p;
    p.angle = 0.7;
    const RasterImage img = render_leaf(s, p, 200, 160);
    const LeafRegion leaf = segment_leaf(img, {});
    const auto f = vein_features(leaf.gray, leaf.mask, {});
    EXPECT_GT(f.values[0], 0.0);
    EXPECT_LT(f.values[3], 0.5);
}

TEST(VeinConfig, Validation) {
    VeinConfig c;
    c.tau = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.radii = {1, 3, 2};
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Veins, FeaturesMatchFullFrameMasks) {
    for (int k = 0; k < 6; ++k) {
        const RasterImage img = render_leaf(make_species(k, 8), random_pose(50 + k), 160, 120);
        const LeafRegion leaf = segment_leaf(img, {});
        const auto full = vein_images(leaf.gray, leaf.mask, {});
        const auto f = vein_features(leaf.gray, leaf.mask, {});
        ASSERT_EQ(f.values.size(), full.size());
        for (std::size_t i = 0; i < full.size(); ++i)
            EXPECT_EQ(f.values[i], static_cast<double>(full[i].count()) / static_cast<double>(leaf.area));
    }
}
