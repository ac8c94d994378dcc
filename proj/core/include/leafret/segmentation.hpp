#pragma once

#include <cstddef>
#include <string>

#include "leafret/imaging.hpp"

namespace leafret {

enum class Polarity { Auto, DarkLeaf, LightLeaf };

std::string to_string(Polarity p);
Polarity parse_polarity(const std::string& s);

struct SegmentationConfig {
    int nbins = 20;
    int median_kernel = 3;
    Polarity polarity = Polarity::Auto;

    void validate() const;
};

struct LeafRegion {
    BinaryMask mask;
    GrayImage gray;
    RasterImage color;
    std::size_t area = 0;
};

// Every intermediate of segment_leaf, kept for debug dumps.
struct SegmentationTrace {
    GrayImage gray;
    Histogram histogram;
    double threshold = 0.0;
    Polarity resolved_polarity = Polarity::DarkLeaf;
    BinaryMask binary;
    BinaryMask filtered;
    BinaryMask restored;
    BinaryMask filled;
    BinaryMask leaf;
};

struct PeakPair {
    int low = 0;
    int high = 0;
};

// Finds the two dominant histogram modes: the two highest local maxima that
// are at least two bins apart. Throws UnimodalHistogramError.
PeakPair major_peaks(const Histogram& hist);

// Midpoint of the emptiest bin strictly between the two major peaks.
double adaptive_threshold(const Histogram& hist);

// Masks smaller than this fraction of the frame are rejected.
inline constexpr double kMinAreaFraction = 0.001;

LeafRegion segment_leaf(const RasterImage& img, const SegmentationConfig& cfg);
SegmentationTrace trace_segmentation(const RasterImage& img, const SegmentationConfig& cfg);

}  // namespace leafret
