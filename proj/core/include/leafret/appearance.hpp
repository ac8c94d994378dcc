#pragma once

#include <array>
#include <vector>

#include "leafret/imaging.hpp"

namespace leafret {

// Per channel (mean, standard deviation, signed cube-root skewness), ordered
// R, G, B.
struct ColorMoments {
    std::array<double, 9> values{};

    double mean(int channel) const { return values[3 * channel]; }
    double stddev(int channel) const { return values[3 * channel + 1]; }
    double skewness(int channel) const { return values[3 * channel + 2]; }
};

struct VeinConfig {
    std::vector<int> radii{1, 2, 3, 4};
    double tau = 0.02;      // residue threshold on the [0, 1] intensity scale
    int margin_width = 1;   // inner boundary band excluded from vein pixels

    void validate() const;
};

struct VeinFeatures {
    std::vector<double> values;  // one ratio per radius
};

// Moments of the pixels under `mask`, normalized by the foreground count.
ColorMoments color_moments(const RasterImage& color, const BinaryMask& mask);

double signed_cbrt(double v);

// Pixels of `mask` within margin_width of its boundary.
BinaryMask margin_band(const BinaryMask& mask, int margin_width);

// Pixels whose grayscale opening residue at `radius` exceeds tau, minus the
// margin band.
BinaryMask vein_image(const GrayImage& gray, const BinaryMask& mask, int radius,
                      const VeinConfig& cfg);

// Cumulative vein masks: entry i is the union of vein_image over radii[0..i],
// so entry i = pixels where max over those radii of the residue exceeds tau.
std::vector<BinaryMask> vein_images(const GrayImage& gray, const BinaryMask& mask,
                                    const VeinConfig& cfg);

// V_i = |cumulative vein mask i| / leaf area.
VeinFeatures vein_features(const GrayImage& gray, const BinaryMask& mask, const VeinConfig& cfg);

}  // namespace leafret
