#include "leafret/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "leafret/errors.hpp"

namespace leafret {

RasterImage::RasterImage(int width, int height) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("RasterImage: dimensions must be positive, got " +
                                    std::to_string(width) + "x" + std::to_string(height));
    }
    data_.assign(static_cast<std::size_t>(width) * height * 3, 0.0);
}

std::array<double, 3> RasterImage::at(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    return {data_[i], data_[i + 1], data_[i + 2]};
}

void RasterImage::set(int x, int y, std::array<double, 3> rgb) {
    const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    data_[i] = rgb[0];
    data_[i + 1] = rgb[1];
    data_[i + 2] = rgb[2];
}

std::size_t BinaryMask::count() const noexcept {
    const auto v = values();
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](auto p) { return p != 0; }));
}

DiskSE::DiskSE(int radius) : radius_(radius) {
    if (radius < 1) {
        throw std::invalid_argument("DiskSE: radius must be >= 1, got " + std::to_string(radius));
    }
    half_widths_.resize(2 * radius + 1);
    for (int dy = -radius; dy <= radius; ++dy) {
        int w = 0;
        while ((w + 1) * (w + 1) + dy * dy <= radius * radius) ++w;
        half_widths_[dy + radius] = w;
        for (int dx = -w; dx <= w; ++dx) offsets_.push_back({dx, dy});
    }
}

int DiskSE::half_width(int dy) const {
    if (dy < -radius_ || dy > radius_) throw std::out_of_range("DiskSE::half_width");
    return half_widths_[dy + radius_];
}

std::int64_t Histogram::total() const noexcept {
    std::int64_t s = 0;
    for (auto c : counts) s += c;
    return s;
}

GrayImage to_grayscale(const RasterImage& img) {
    GrayImage out(img.width(), img.height());
    const auto rgb = img.data();
    auto dst = out.values();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        const double g = 0.2989 * rgb[3 * i] + 0.5870 * rgb[3 * i + 1] + 0.1140 * rgb[3 * i + 2];
        dst[i] = std::clamp(g, 0.0, 1.0);
    }
    return out;
}

int histogram_bin(double value, int nbins) {
    const int b = static_cast<int>(std::floor(value * nbins));
    return std::clamp(b, 0, nbins - 1);
}

Histogram intensity_histogram(const GrayImage& img, int nbins) {
    if (nbins < 2) {
        throw std::invalid_argument("intensity_histogram: nbins must be >= 2, got " +
                                    std::to_string(nbins));
    }
    Histogram h;
    h.counts.assign(nbins, 0);
    for (double v : img.values()) ++h.counts[histogram_bin(v, nbins)];
    return h;
}

BinaryMask median_filter(const BinaryMask& mask, int kernel) {
    if (kernel < 3 || kernel % 2 == 0) {
        throw std::invalid_argument("median_filter: kernel must be odd and >= 3, got " +
                                    std::to_string(kernel));
    }
    const int w = mask.width();
    const int h = mask.height();
    const int half = kernel / 2;
    const int pw = w + 2 * half;
    const int ph = h + 2 * half;

    // Summed-area table over the edge-replicated mask.
    std::vector<std::int32_t> sat(static_cast<std::size_t>(pw + 1) * (ph + 1), 0);
    auto at = [&](int x, int y) -> std::int32_t& {
        return sat[static_cast<std::size_t>(y) * (pw + 1) + x];
    };
    for (int y = 0; y < ph; ++y) {
        const int sy = std::clamp(y - half, 0, h - 1);
        std::int32_t row = 0;
        for (int x = 0; x < pw; ++x) {
            const int sx = std::clamp(x - half, 0, w - 1);
            row += mask.test(sx, sy) ? 1 : 0;
            at(x + 1, y + 1) = at(x + 1, y) + row;
        }
    }

    const std::int32_t majority = kernel * kernel / 2;
    BinaryMask out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            // Window in padded coordinates is [x, x + kernel) x [y, y + kernel).
            const std::int32_t n = at(x + kernel, y + kernel) - at(x, y + kernel) -
                                   at(x + kernel, y) + at(x, y);
            out(x, y) = n > majority ? 1 : 0;
        }
    }
    return out;
}

BinaryMask binarize(const GrayImage& img, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw std::invalid_argument("binarize: threshold must lie in [0, 1]");
    }
    BinaryMask out(img.width(), img.height());
    const auto src = img.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] < threshold ? 1 : 0;
    return out;
}

BinaryMask invert(const BinaryMask& mask) {
    BinaryMask out(mask.width(), mask.height());
    const auto src = mask.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 0 : 1;
    return out;
}

namespace {

// Flat min/max filter over a disk, restricted to the domain. The disk is a
// stack of horizontal runs, so each source row is reduced once per distinct
// run half-width (cascaded 3-tap passes) and output rows combine 2r+1 of
// those reduced rows. Rows are cached in a ring of 2r+1 slots.
template <typename Pick>
GrayImage rank_filter(const GrayImage& img, const DiskSE& se, const BinaryMask& domain,
                      double pad, Pick pick) {
    if (!domain.same_shape(img)) {
        throw std::invalid_argument("morphology: domain mask dimensions differ from image");
    }
    const int w = img.width();
    const int h = img.height();
    const int r = se.radius();
    const int ring = 2 * r + 1;

    std::vector<std::vector<std::vector<double>>> cache(
        ring, std::vector<std::vector<double>>(r + 1, std::vector<double>(w)));
    std::vector<int> cached_row(ring, -1);

    auto reduce_row = [&](int yy) -> const std::vector<std::vector<double>>& {
        const int slot = yy % ring;
        auto& levels = cache[slot];
        if (cached_row[slot] == yy) return levels;
        cached_row[slot] = yy;
        auto& l0 = levels[0];
        for (int x = 0; x < w; ++x) l0[x] = domain.test(x, yy) ? img(x, yy) : pad;
        for (int level = 1; level <= r; ++level) {
            const auto& prev = levels[level - 1];
            auto& cur = levels[level];
            for (int x = 0; x < w; ++x) {
                double v = level == 1 ? prev[x] : pad;
                bool any = level == 1;
                if (x > 0) { v = any ? pick(v, prev[x - 1]) : prev[x - 1]; any = true; }
                if (x + 1 < w) { v = any ? pick(v, prev[x + 1]) : prev[x + 1]; any = true; }
                cur[x] = any ? v : prev[x];
            }
        }
        return levels;
    };

    GrayImage out = img;
    for (int y = 0; y < h; ++y) {
        bool row_has_domain = false;
        for (int x = 0; x < w && !row_has_domain; ++x) row_has_domain = domain.test(x, y);
        if (!row_has_domain) continue;
        for (int x = 0; x < w; ++x) {
            if (domain.test(x, y)) out(x, y) = pad;
        }
        for (int dy = -r; dy <= r; ++dy) {
            const int yy = y + dy;
            if (yy < 0 || yy >= h) continue;
            const auto& reduced = reduce_row(yy)[se.half_width(dy)];
            for (int x = 0; x < w; ++x) {
                if (domain.test(x, y)) out(x, y) = pick(out(x, y), reduced[x]);
            }
        }
    }
    return out;
}

}  // namespace

GrayImage gray_erode(const GrayImage& img, const DiskSE& se, const BinaryMask& domain) {
    return rank_filter(img, se, domain, std::numeric_limits<double>::infinity(),
                       [](double a, double b) { return std::min(a, b); });
}

GrayImage gray_dilate(const GrayImage& img, const DiskSE& se, const BinaryMask& domain) {
    return rank_filter(img, se, domain, -std::numeric_limits<double>::infinity(),
                       [](double a, double b) { return std::max(a, b); });
}

GrayImage morph_open(const GrayImage& img, const DiskSE& se, const BinaryMask& domain) {
    return gray_dilate(gray_erode(img, se, domain), se, domain);
}

BinaryMask binary_erode(const BinaryMask& mask, const DiskSE& se) {
    BinaryMask out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.test(x, y)) continue;
            bool keep = true;
            for (const auto& o : se.offsets()) {
                const int xx = x + o.dx;
                const int yy = y + o.dy;
                if (!mask.contains(xx, yy) || !mask.test(xx, yy)) {
                    keep = false;
                    break;
                }
            }
            out(x, y) = keep ? 1 : 0;
        }
    }
    return out;
}

namespace {

constexpr Offset kNeighbors4[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
constexpr Offset kNeighbors8[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                                  {1, 1}, {-1, 1}, {1, -1}, {-1, -1}};

}  // namespace

BinaryMask fill_holes(const BinaryMask& mask) {
    const int w = mask.width();
    const int h = mask.height();
    Plane<std::uint8_t> outside(w, h, 0);
    std::vector<Offset> stack;
    auto seed = [&](int x, int y) {
        if (!mask.test(x, y) && !outside(x, y)) {
            outside(x, y) = 1;
            stack.push_back({x, y});
        }
    };
    for (int x = 0; x < w; ++x) {
        seed(x, 0);
        seed(x, h - 1);
    }
    for (int y = 0; y < h; ++y) {
        seed(0, y);
        seed(w - 1, y);
    }
    while (!stack.empty()) {
        const Offset p = stack.back();
        stack.pop_back();
        for (const auto& n : kNeighbors4) {
            const int xx = p.dx + n.dx;
            const int yy = p.dy + n.dy;
            if (mask.contains(xx, yy)) seed(xx, yy);
        }
    }
    BinaryMask out(w, h);
    const auto o = outside.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = o[i] ? 0 : 1;
    return out;
}

BinaryMask reconstruct(const BinaryMask& marker, const BinaryMask& mask) {
    if (!marker.same_shape(mask)) {
        throw std::invalid_argument("reconstruct: marker and mask dimensions differ");
    }
    BinaryMask out(mask.width(), mask.height());
    std::vector<Offset> stack;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (marker.test(x, y) && mask.test(x, y) && !out.test(x, y)) {
                out(x, y) = 1;
                stack.push_back({x, y});
            }
        }
    }
    while (!stack.empty()) {
        const Offset p = stack.back();
        stack.pop_back();
        for (const auto& n : kNeighbors8) {
            const int xx = p.dx + n.dx;
            const int yy = p.dy + n.dy;
            if (mask.contains(xx, yy) && mask.test(xx, yy) && !out.test(xx, yy)) {
                out(xx, yy) = 1;
                stack.push_back({xx, yy});
            }
        }
    }
    return out;
}

LabelMap connected_components(const BinaryMask& mask) {
    LabelMap result{Plane<std::int32_t>(mask.width(), mask.height(), 0), 0};
    auto& labels = result.labels;
    std::vector<Offset> stack;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.test(x, y) || labels(x, y) != 0) continue;
            const std::int32_t label = ++result.count;
            labels(x, y) = label;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const Offset p = stack.back();
                stack.pop_back();
                for (const auto& n : kNeighbors8) {
                    const int xx = p.dx + n.dx;
                    const int yy = p.dy + n.dy;
                    if (mask.contains(xx, yy) && mask.test(xx, yy) && labels(xx, yy) == 0) {
                        labels(xx, yy) = label;
                        stack.push_back({xx, yy});
                    }
                }
            }
        }
    }
    return result;
}

BinaryMask largest_component(const LabelMap& labels) {
    if (labels.count <= 0) {
        throw EmptySegmentationError("no foreground component to select");
    }
    std::vector<std::int64_t> sizes(labels.count + 1, 0);
    for (auto l : labels.labels.values()) ++sizes[l];
    std::int32_t best = 1;
    for (std::int32_t l = 2; l <= labels.count; ++l) {
        if (sizes[l] > sizes[best]) best = l;
    }
    BinaryMask out(labels.labels.width(), labels.labels.height());
    const auto src = labels.labels.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] == best ? 1 : 0;
    return out;
}

}  // namespace leafret
