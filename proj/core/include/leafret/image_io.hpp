#pragma once

#include <filesystem>

#include "leafret/imaging.hpp"

namespace leafret {

// Decodes PNG/JPEG (8- or 16-bit, gray, RGB or RGBA) into [0, 1] channels.
// Throws ImageIoError when the file is missing or not decodable.
RasterImage load_image(const std::filesystem::path& path);

void save_image(const RasterImage& img, const std::filesystem::path& path);
void save_gray(const GrayImage& img, const std::filesystem::path& path);
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

}  // namespace leafret
