#pragma once

// Pixel containers and the low-level kernels shared by segmentation and
// feature extraction. All images are row-major; (x, y) addresses column x of
// row y. Every function here is pure.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace leafret {

struct Offset {
    int dx = 0;
    int dy = 0;
    friend bool operator==(const Offset&, const Offset&) = default;
};

// Color image with channels scaled to [0, 1].
class RasterImage {
public:
    RasterImage() = default;
    RasterImage(int width, int height);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(width_) * height_; }

    std::array<double, 3> at(int x, int y) const;
    void set(int x, int y, std::array<double, 3> rgb);

    // Interleaved RGB, 3 * size() values.
    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

template <typename T>
class Plane {
public:
    Plane() = default;
    Plane(int width, int height, T fill = T{})
        : width_(width), height_(height), values_(static_cast<std::size_t>(width) * height, fill) {}

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    T operator()(int x, int y) const { return values_[index(x, y)]; }
    T& operator()(int x, int y) { return values_[index(x, y)]; }

    std::span<const T> values() const noexcept { return values_; }
    std::span<T> values() noexcept { return values_; }

    bool same_shape(int w, int h) const noexcept { return w == width_ && h == height_; }
    template <typename U>
    bool same_shape(const Plane<U>& other) const noexcept {
        return other.width() == width_ && other.height() == height_;
    }

    friend bool operator==(const Plane&, const Plane&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> values_;
};

using GrayImage = Plane<double>;

// Foreground is stored as 1, background as 0.
class BinaryMask : public Plane<std::uint8_t> {
public:
    using Plane<std::uint8_t>::Plane;

    bool test(int x, int y) const { return (*this)(x, y) != 0; }
    std::size_t count() const noexcept;
    bool empty() const noexcept { return count() == 0; }
};

struct LabelMap {
    Plane<std::int32_t> labels;  // 0 = background, components numbered 1..count
    std::int32_t count = 0;
};

// Discrete disk {(dx, dy) : dx^2 + dy^2 <= r^2}.
class DiskSE {
public:
    explicit DiskSE(int radius);

    int radius() const noexcept { return radius_; }
    const std::vector<Offset>& offsets() const noexcept { return offsets_; }
    // Horizontal half-width of the disk at vertical offset dy, |dy| <= radius.
    int half_width(int dy) const;

private:
    int radius_;
    std::vector<Offset> offsets_;
    std::vector<int> half_widths_;
};

struct Histogram {
    std::vector<std::int64_t> counts;

    int nbins() const noexcept { return static_cast<int>(counts.size()); }
    std::int64_t total() const noexcept;
};

GrayImage to_grayscale(const RasterImage& img);

// Bin i covers [i/nbins, (i+1)/nbins); the last bin also takes 1.0.
Histogram intensity_histogram(const GrayImage& img, int nbins);
int histogram_bin(double value, int nbins);

// Majority vote over a kernel x kernel window with edge replication.
BinaryMask median_filter(const BinaryMask& mask, int kernel);

// Foreground = intensity strictly below threshold.
BinaryMask binarize(const GrayImage& img, double threshold);
BinaryMask invert(const BinaryMask& mask);

// Grayscale erosion/dilation restricted to `domain`: pixels outside the domain
// (or the frame) are ignored, which is the +inf/-inf padding convention.
// Pixels outside the domain are copied from the input unchanged.
GrayImage gray_erode(const GrayImage& img, const DiskSE& se, const BinaryMask& domain);
GrayImage gray_dilate(const GrayImage& img, const DiskSE& se, const BinaryMask& domain);
GrayImage morph_open(const GrayImage& img, const DiskSE& se, const BinaryMask& domain);

// Binary erosion; pixels outside the frame count as background.
BinaryMask binary_erode(const BinaryMask& mask, const DiskSE& se);

// Background not 4-connected to the frame border becomes foreground.
BinaryMask fill_holes(const BinaryMask& mask);

// Keeps the 8-connected components of `mask` that intersect `marker`.
BinaryMask reconstruct(const BinaryMask& marker, const BinaryMask& mask);

// 8-connected labelling, labels in raster first-encounter order.
LabelMap connected_components(const BinaryMask& mask);

// Component with the largest pixel count, ties to the smaller label.
BinaryMask largest_component(const LabelMap& labels);

}  // namespace leafret
