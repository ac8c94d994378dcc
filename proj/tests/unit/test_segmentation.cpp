#include <gtest/gtest.h>

#include <random>

#include "leafret/errors.hpp"
#include "leafret/segmentation.hpp"
#include "synthetic.hpp"

using namespace leafret;
using namespace leafret::testing;

namespace {

Histogram hist(std::vector<std::int64_t> counts) { return Histogram{std::move(counts)}; }

RasterImage square_with_hole() {
    RasterImage img = square_on_canvas(64, 22, 22, 20, 0.2, 0.95);
    for (int y = 31; y < 33; ++y)
        for (int x = 31; x < 33; ++x) img.set(x, y, {0.95, 0.95, 0.95});
    return img;
}

RasterImage inverted(const RasterImage& img) {
    RasterImage out = img;
    for (auto& v : out.data()) v = 1.0 - v;
    return out;
}

}  // namespace

TEST(AdaptiveThreshold, HistogramFromFigureCounts) {
    const Histogram h = hist({0, 322, 7696, 17057, 24685, 10739, 1638, 1533, 1651, 1982, 2329, 2582,
                              4010, 5574, 23558, 13704, 5143, 17886, 24661});
    const PeakPair p = major_peaks(h);
    EXPECT_EQ(p.low, 4);
    EXPECT_EQ(p.high, 18);
    EXPECT_DOUBLE_EQ(adaptive_threshold(h), 7.5 / 19);
}

TEST(AdaptiveThreshold, TieBreaksAndSmallCases) {
    EXPECT_DOUBLE_EQ(adaptive_threshold(hist({100, 0, 0, 0, 100})), 0.3);
    EXPECT_DOUBLE_EQ(adaptive_threshold(hist({50, 10, 50})), 0.5);
}

TEST(AdaptiveThreshold, BroadModeShoulderIsNotASecondPeak) {
    // The second-highest bin (17) is the shoulder of the bright mode.
    const Histogram h = hist({0, 5, 40, 60, 30, 5, 2, 1, 2, 3, 5, 10, 40, 90, 150, 240, 300, 260, 80, 10});
    const PeakPair p = major_peaks(h);
    EXPECT_EQ(p.low, 3);
    EXPECT_EQ(p.high, 16);
    EXPECT_DOUBLE_EQ(adaptive_threshold(h), 7.5 / 20);
}

TEST(AdaptiveThreshold, UnimodalErrors) {
    EXPECT_THROW(adaptive_threshold(hist({0, 0, 100, 0, 0})), UnimodalHistogramError);
    EXPECT_THROW(adaptive_threshold(hist({0, 50, 60, 0, 0})), UnimodalHistogramError);
}

TEST(AdaptiveThreshold, ThresholdBetweenPeaks) {
    std::mt19937_64 g(9);
    for (int trial = 0; trial < 200; ++trial) {
        Histogram h;
        const int n = 4 + static_cast<int>(g() % 30);
        for (int i = 0; i < n; ++i) h.counts.push_back(static_cast<std::int64_t>(g() % 1000));
        try {
            const PeakPair p = major_peaks(h);
            const double t = adaptive_threshold(h);
            EXPECT_GE(p.high - p.low, 2);
            EXPECT_GT(t, (p.low + 0.5) / n);
            EXPECT_LT(t, (p.high + 0.5) / n);
        } catch (const UnimodalHistogramError&) {
        }
    }
}

TEST(SegmentLeaf, SquareWithHoleIsSolidSquare) {
    const LeafRegion r = segment_leaf(square_with_hole(), {});
    EXPECT_EQ(r.area, 400u);
    EXPECT_EQ(r.mask, rect_mask(64, 64, 22, 22, 41, 41));
}

TEST(SegmentLeaf, SpecksRemoved) {
    RasterImage img = square_on_canvas(64, 22, 22, 20, 0.2, 0.95);
    for (auto [x, y] : {std::pair{3, 3}, {60, 5}, {10, 55}}) img.set(x, y, {0.2, 0.2, 0.2});
    const SegmentationTrace t = trace_segmentation(img, {});
    EXPECT_FALSE(t.filtered.test(3, 3));
    EXPECT_EQ(t.leaf, rect_mask(64, 64, 22, 22, 41, 41));
}

TEST(SegmentLeaf, BlankImageIsUnimodal) {
    RasterImage blank(32, 32);
    for (auto& v : blank.data()) v = 0.7;
    EXPECT_THROW(segment_leaf(blank, {}), UnimodalHistogramError);
}

TEST(SegmentLeaf, PolarityAutoIsInversionSymmetric) {
    const RasterImage img = square_with_hole();
    const LeafRegion dark = segment_leaf(img, {});
    const SegmentationTrace light = trace_segmentation(inverted(img), {});
    EXPECT_EQ(light.resolved_polarity, Polarity::LightLeaf);
    EXPECT_EQ(light.leaf, dark.mask);
}

TEST(SegmentLeaf, ExplicitPolarity) {
    SegmentationConfig cfg;
    cfg.polarity = Polarity::LightLeaf;
    EXPECT_EQ(segment_leaf(inverted(square_with_hole()), cfg).area, 400u);
    cfg.polarity = Polarity::DarkLeaf;
    EXPECT_EQ(segment_leaf(square_with_hole(), cfg).area, 400u);
}

TEST(SegmentLeaf, TinyRegionRejected) {
    RasterImage img = square_on_canvas(200, 100, 100, 3, 0.2, 0.95);
    EXPECT_THROW(segment_leaf(img, {}), EmptySegmentationError);
}

TEST(SegmentLeaf, SyntheticLeavesOneComponentNoHolesDeterministic) {
    for (int k = 0; k < 12; ++k) {
        const RasterImage img = render_leaf(make_species(k, 5), random_pose(100 + k), 160, 120);
        const LeafRegion a = segment_leaf(img, {});
        const LeafRegion b = segment_leaf(img, {});
        EXPECT_EQ(a.mask, b.mask);
        EXPECT_EQ(connected_components(a.mask).count, 1);
        EXPECT_EQ(fill_holes(a.mask), a.mask);
        // Close to the rendered silhouette.
        const BinaryMask truth = leaf_silhouette(make_species(k, 5), random_pose(100 + k), 160, 120);
        std::size_t diff = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) diff += truth.values()[i] != a.mask.values()[i];
        EXPECT_LT(static_cast<double>(diff), 0.1 * static_cast<double>(truth.count())) << "species " << k;
    }
}

TEST(SegmentationConfig, Validation) {
    SegmentationConfig cfg;
    cfg.nbins = 3;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.median_kernel = 4;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    EXPECT_EQ(parse_polarity("light_leaf"), Polarity::LightLeaf);
    EXPECT_THROW(parse_polarity("both"), std::invalid_argument);
}
