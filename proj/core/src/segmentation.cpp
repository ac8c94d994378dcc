#include "leafret/segmentation.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "leafret/errors.hpp"

namespace leafret {

std::string to_string(Polarity p) {
    switch (p) {
        case Polarity::Auto: return "auto";
        case Polarity::DarkLeaf: return "dark_leaf";
        case Polarity::LightLeaf: return "light_leaf";
    }
    return "auto";
}

Polarity parse_polarity(const std::string& s) {
    if (s == "auto") return Polarity::Auto;
    if (s == "dark_leaf") return Polarity::DarkLeaf;
    if (s == "light_leaf") return Polarity::LightLeaf;
    throw std::invalid_argument("unknown polarity '" + s + "' (expected auto, dark_leaf, light_leaf)");
}

void SegmentationConfig::validate() const {
    if (nbins < 4) throw std::invalid_argument("seg.nbins must be >= 4");
    if (median_kernel < 3 || median_kernel % 2 == 0) {
        throw std::invalid_argument("seg.median_kernel must be odd and >= 3");
    }
}

PeakPair major_peaks(const Histogram& hist) {
    const auto& c = hist.counts;
    const int n = hist.nbins();
    int nonempty = 0;
    for (auto v : c) nonempty += v > 0 ? 1 : 0;
    if (nonempty < 2) {
        throw UnimodalHistogramError("histogram has fewer than two nonempty bins");
    }

    // Candidate modes: the leftmost bin of each local plateau maximum.
    std::vector<int> candidates;
    for (int i = 0; i < n; ++i) {
        if (c[i] == 0) continue;
        const bool rises = i == 0 || c[i] > c[i - 1];
        const bool holds = i == n - 1 || c[i] >= c[i + 1];
        if (rises && holds) candidates.push_back(i);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](int a, int b) { return c[a] > c[b]; });

    const int first = candidates.front();
    for (std::size_t k = 1; k < candidates.size(); ++k) {
        if (std::abs(candidates[k] - first) >= 2) {
            return {std::min(first, candidates[k]), std::max(first, candidates[k])};
        }
    }
    throw UnimodalHistogramError("no second intensity mode at least two bins from the first");
}

double adaptive_threshold(const Histogram& hist) {
    const PeakPair peaks = major_peaks(hist);
    int valley = peaks.low + 1;
    for (int i = peaks.low + 2; i < peaks.high; ++i) {
        if (hist.counts[i] < hist.counts[valley]) valley = i;
    }
    return (valley + 0.5) / hist.nbins();
}

namespace {

// Number of frame-border pixels that are foreground in `mask`.
std::size_t border_foreground(const BinaryMask& mask) {
    const int w = mask.width();
    const int h = mask.height();
    std::size_t n = 0;
    for (int x = 0; x < w; ++x) {
        n += mask.test(x, 0);
        if (h > 1) n += mask.test(x, h - 1);
    }
    for (int y = 1; y + 1 < h; ++y) {
        n += mask.test(0, y);
        if (w > 1) n += mask.test(w - 1, y);
    }
    return n;
}

std::size_t border_pixels(int w, int h) {
    if (w == 1 || h == 1) return static_cast<std::size_t>(w) * h;
    return 2 * static_cast<std::size_t>(w) + 2 * static_cast<std::size_t>(h) - 4;
}

}  // namespace

SegmentationTrace trace_segmentation(const RasterImage& img, const SegmentationConfig& cfg) {
    cfg.validate();
    SegmentationTrace t;
    t.gray = to_grayscale(img);
    t.histogram = intensity_histogram(t.gray, cfg.nbins);
    t.threshold = adaptive_threshold(t.histogram);

    BinaryMask dark = binarize(t.gray, t.threshold);
    Polarity side = cfg.polarity;
    if (side == Polarity::Auto) {
        // The background is the side that owns more of the frame border.
        const std::size_t dark_border = border_foreground(dark);
        const std::size_t light_border = border_pixels(dark.width(), dark.height()) - dark_border;
        side = dark_border <= light_border ? Polarity::DarkLeaf : Polarity::LightLeaf;
    }
    t.resolved_polarity = side;
    t.binary = side == Polarity::DarkLeaf ? std::move(dark) : invert(dark);

    t.filtered = median_filter(t.binary, cfg.median_kernel);
    // The majority filter erodes convex corners; recover the full outline of
    // every region that survived filtering.
    t.restored = reconstruct(t.filtered, t.binary);
    t.filled = fill_holes(t.restored);
    const LabelMap labels = connected_components(t.filled);
    t.leaf = largest_component(labels);

    const std::size_t area = t.leaf.count();
    const double floor = kMinAreaFraction * static_cast<double>(img.size());
    if (static_cast<double>(area) < floor) {
        throw EmptySegmentationError("leaf region of " + std::to_string(area) +
                                     " pixels is below the minimum area");
    }
    return t;
}

LeafRegion segment_leaf(const RasterImage& img, const SegmentationConfig& cfg) {
    SegmentationTrace t = trace_segmentation(img, cfg);
    LeafRegion region;
    region.area = t.leaf.count();
    region.mask = std::move(t.leaf);
    region.gray = std::move(t.gray);
    region.color = img;
    return region;
}

}  // namespace leafret
