#include "leafret/image_io.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/imgcodecs.hpp>

#include "leafret/errors.hpp"

namespace leafret {

namespace {

template <typename T>
RasterImage from_mat(const cv::Mat& mat, double scale) {
    RasterImage img(mat.cols, mat.rows);
    const int ch = mat.channels();
    for (int y = 0; y < mat.rows; ++y) {
        const T* row = mat.ptr<T>(y);
        for (int x = 0; x < mat.cols; ++x) {
            const T* px = row + static_cast<std::ptrdiff_t>(x) * ch;
            if (ch == 1) {
                const double g = px[0] * scale;
                img.set(x, y, {g, g, g});
            } else {
                // OpenCV stores BGR(A).
                img.set(x, y, {px[2] * scale, px[1] * scale, px[0] * scale});
            }
        }
    }
    return img;
}

std::uint8_t to_byte(double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

void write(const cv::Mat& mat, const std::filesystem::path& path) {
    bool ok = false;
    try {
        ok = cv::imwrite(path.string(), mat);
    } catch (const cv::Exception& e) {
        throw ImageIoError("cannot write " + path.string() + ": " + e.what());
    }
    if (!ok) throw ImageIoError("cannot write " + path.string());
}

}  // namespace

RasterImage load_image(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw ImageIoError("no such image file: " + path.string());
    }
    cv::Mat mat;
    try {
        mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    } catch (const cv::Exception& e) {
        throw ImageIoError("cannot decode " + path.string() + ": " + e.what());
    }
    if (mat.empty()) throw ImageIoError("cannot decode " + path.string());
    const int ch = mat.channels();
    if (ch != 1 && ch != 3 && ch != 4) {
        throw ImageIoError("unsupported channel count in " + path.string());
    }
    switch (mat.depth()) {
        case CV_8U: return from_mat<std::uint8_t>(mat, 1.0 / 255.0);
        case CV_16U: return from_mat<std::uint16_t>(mat, 1.0 / 65535.0);
        default: throw ImageIoError("unsupported bit depth in " + path.string());
    }
}

void save_image(const RasterImage& img, const std::filesystem::path& path) {
    cv::Mat mat(img.height(), img.width(), CV_8UC3);
    for (int y = 0; y < img.height(); ++y) {
        auto* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.width(); ++x) {
            const auto rgb = img.at(x, y);
            row[3 * x] = to_byte(rgb[2]);
            row[3 * x + 1] = to_byte(rgb[1]);
            row[3 * x + 2] = to_byte(rgb[0]);
        }
    }
    write(mat, path);
}

void save_gray(const GrayImage& img, const std::filesystem::path& path) {
    cv::Mat mat(img.height(), img.width(), CV_8UC1);
    for (int y = 0; y < img.height(); ++y) {
        auto* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.width(); ++x) row[x] = to_byte(img(x, y));
    }
    write(mat, path);
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
    cv::Mat mat(mask.height(), mask.width(), CV_8UC1);
    for (int y = 0; y < mask.height(); ++y) {
        auto* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < mask.width(); ++x) row[x] = mask.test(x, y) ? 255 : 0;
    }
    write(mat, path);
}

}  // namespace leafret
