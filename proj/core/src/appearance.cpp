#include "leafret/appearance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "leafret/errors.hpp"

namespace leafret {

void VeinConfig::validate() const {
    if (!(tau > 0.0)) throw std::invalid_argument("vein.tau must be > 0");
    if (margin_width < 0) throw std::invalid_argument("vein.margin must be >= 0");
    if (radii.empty()) throw std::invalid_argument("vein radii list is empty");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < 1 || (i > 0 && radii[i] <= radii[i - 1])) {
            throw std::invalid_argument("vein radii must be positive and strictly increasing");
        }
    }
}

double signed_cbrt(double v) { return std::cbrt(v); }

ColorMoments color_moments(const RasterImage& color, const BinaryMask& mask) {
    if (!mask.same_shape(color.width(), color.height())) {
        throw std::invalid_argument("color_moments: mask dimensions differ from image");
    }
    const auto px = color.data();
    const auto m = mask.values();
    // long double keeps symmetric samples at an exact zero third moment;
    // the cube root would otherwise magnify the rounding residue.
    std::array<long double, 3> sum{};
    std::size_t area = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        ++area;
        for (int c = 0; c < 3; ++c) sum[c] += px[3 * i + c];
    }
    if (area == 0) throw EmptySegmentationError("color moments over an empty mask");

    const long double n = static_cast<long double>(area);
    std::array<long double, 3> mean{};
    for (int c = 0; c < 3; ++c) mean[c] = sum[c] / n;

    std::array<long double, 3> m2{};
    std::array<long double, 3> m3{};
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        for (int c = 0; c < 3; ++c) {
            const long double d = px[3 * i + c] - mean[c];
            m2[c] += d * d;
            m3[c] += d * d * d;
        }
    }
    ColorMoments out;
    for (int c = 0; c < 3; ++c) {
        out.values[3 * c] = static_cast<double>(mean[c]);
        out.values[3 * c + 1] = static_cast<double>(std::sqrt(m2[c] / n));
        out.values[3 * c + 2] = static_cast<double>(std::cbrt(m3[c] / n));
    }
    return out;
}

BinaryMask margin_band(const BinaryMask& mask, int margin_width) {
    if (margin_width <= 0) return BinaryMask(mask.width(), mask.height());
    const BinaryMask inner = binary_erode(mask, DiskSE(margin_width));
    BinaryMask band(mask.width(), mask.height());
    const auto a = mask.values();
    const auto b = inner.values();
    auto dst = band.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = a[i] && !b[i] ? 1 : 0;
    return band;
}

namespace {

void threshold_residue(const GrayImage& gray, const GrayImage& opened, const BinaryMask& mask,
                       const BinaryMask& band, double tau, BinaryMask& out) {
    const auto g = gray.values();
    const auto o = opened.values();
    const auto m = mask.values();
    const auto e = band.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        if (m[i] && !e[i] && g[i] - o[i] > tau) dst[i] = 1;
    }
}

void check_inputs(const GrayImage& gray, const BinaryMask& mask) {
    if (!mask.same_shape(gray)) {
        throw std::invalid_argument("vein extraction: mask dimensions differ from image");
    }
    if (mask.empty()) throw EmptySegmentationError("vein extraction over an empty mask");
}

}  // namespace

BinaryMask vein_image(const GrayImage& gray, const BinaryMask& mask, int radius,
                      const VeinConfig& cfg) {
    cfg.validate();
    check_inputs(gray, mask);
    const GrayImage opened = morph_open(gray, DiskSE(radius), mask);
    BinaryMask out(gray.width(), gray.height());
    threshold_residue(gray, opened, mask, margin_band(mask, cfg.margin_width), cfg.tau, out);
    return out;
}

std::vector<BinaryMask> vein_images(const GrayImage& gray, const BinaryMask& mask,
                                    const VeinConfig& cfg) {
    cfg.validate();
    check_inputs(gray, mask);
    const BinaryMask band = margin_band(mask, cfg.margin_width);
    std::vector<BinaryMask> out;
    BinaryMask acc(gray.width(), gray.height());
    for (int radius : cfg.radii) {
        const GrayImage opened = morph_open(gray, DiskSE(radius), mask);
        threshold_residue(gray, opened, mask, band, cfg.tau, acc);
        out.push_back(acc);
    }
    return out;
}

VeinFeatures vein_features(const GrayImage& gray, const BinaryMask& mask, const VeinConfig& cfg) {
    check_inputs(gray, mask);
    // Pixels outside the mask never enter the opening, so the bounding box
    // gives the same counts.
    int x0 = mask.width(), y0 = mask.height(), x1 = -1, y1 = -1;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.test(x, y)) continue;
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
        }
    }
    if (x1 < 0) throw EmptySegmentationError("vein features over an empty mask");
    GrayImage g(x1 - x0 + 1, y1 - y0 + 1);
    BinaryMask m(g.width(), g.height());
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
            g(x, y) = gray(x0 + x, y0 + y);
            m(x, y) = mask(x0 + x, y0 + y);
        }
    }
    const auto veins = vein_images(g, m, cfg);
    const double area = static_cast<double>(m.count());
    VeinFeatures f;
    for (const auto& v : veins) f.values.push_back(static_cast<double>(v.count()) / area);
    return f;
}

}  // namespace leafret
