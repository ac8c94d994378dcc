#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "leafret/imaging.hpp"

namespace leafret {

struct Centroid {
    double xc = 0.0;
    double yc = 0.0;
};

struct PftConfig {
    int m = 4;  // radial frequencies 0..m-1
    int n = 6;  // angular frequencies 0..n-1

    std::size_t size() const noexcept { return static_cast<std::size_t>(m) * n; }
    void validate() const;
};

// Added to the farthest pixel-center distance to obtain the shape radius R.
inline constexpr double kPixelHalfExtent = 0.5;

struct PftCoefficients {
    int m = 0;
    int n = 0;
    std::vector<std::complex<double>> values;  // row-major (rho, phi)
    double max_radius = 0.0;  // R, see kPixelHalfExtent
    std::size_t area = 0;

    std::complex<double> operator()(int rho, int phi) const { return values[rho * n + phi]; }
};

// Row-major normalized magnitudes; element 0 is the area-to-circle ratio.
struct ShapeDescriptor {
    std::vector<double> values;
};

// Mass centroid of the foreground. Throws EmptySegmentationError.
Centroid centroid(const BinaryMask& mask);

// Polar Fourier transform of the silhouette about its centroid, using each
// pixel's exact radius and angle:
//   PF(rho, phi) = sum over foreground of exp(-j (2 pi rho r / R + phi theta)),
// with R = max r + kPixelHalfExtent.
// Throws DegenerateShapeError when every pixel sits on the centroid.
PftCoefficients pf2(const BinaryMask& mask, const PftConfig& cfg);

ShapeDescriptor normalize_descriptors(const PftCoefficients& coef);

ShapeDescriptor shape_descriptor(const BinaryMask& mask, const PftConfig& cfg);

}  // namespace leafret
