#include "leafret/shape_descriptor.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "leafret/errors.hpp"

namespace leafret {

void PftConfig::validate() const {
    if (m < 1 || n < 1) throw std::invalid_argument("pft.m and pft.n must be >= 1");
}

Centroid centroid(const BinaryMask& mask) {
    // Integer sums keep the centroid exact under integer translation.
    std::int64_t sx = 0;
    std::int64_t sy = 0;
    std::int64_t count = 0;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.test(x, y)) continue;
            sx += x;
            sy += y;
            ++count;
        }
    }
    if (count == 0) throw EmptySegmentationError("centroid of an empty mask");
    return {static_cast<double>(sx) / count, static_cast<double>(sy) / count};
}

PftCoefficients pf2(const BinaryMask& mask, const PftConfig& cfg) {
    cfg.validate();
    const Centroid c = centroid(mask);

    struct Polar {
        double r;
        double theta;
    };
    std::vector<Polar> pts;
    pts.reserve(mask.count());
    double max_r = 0.0;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.test(x, y)) continue;
            const double dx = x - c.xc;
            const double dy = y - c.yc;
            const double r = std::hypot(dx, dy);
            double theta = std::atan2(dy, dx);
            if (theta < 0.0) theta += 2.0 * std::numbers::pi;
            pts.push_back({r, theta});
            max_r = std::max(max_r, r);
        }
    }
    if (max_r == 0.0) throw DegenerateShapeError("shape has zero radius about its centroid");
    // R reaches the outer edge of the farthest pixel rather than its center,
    // so the circle-area ratio does not drift with resolution.
    const double shape_radius = max_r + kPixelHalfExtent;

    PftCoefficients coef;
    coef.m = cfg.m;
    coef.n = cfg.n;
    coef.max_radius = shape_radius;
    coef.area = pts.size();
    coef.values.assign(cfg.size(), {0.0, 0.0});

    std::vector<std::complex<double>> radial(cfg.m);
    std::vector<std::complex<double>> angular(cfg.n);
    for (const auto& p : pts) {
        const auto step_r = std::polar(1.0, -2.0 * std::numbers::pi * p.r / shape_radius);
        const auto step_a = std::polar(1.0, -p.theta);
        radial[0] = angular[0] = {1.0, 0.0};
        for (int k = 1; k < cfg.m; ++k) radial[k] = radial[k - 1] * step_r;
        for (int k = 1; k < cfg.n; ++k) angular[k] = angular[k - 1] * step_a;
        for (int rho = 0; rho < cfg.m; ++rho) {
            for (int phi = 0; phi < cfg.n; ++phi) {
                coef.values[rho * cfg.n + phi] += radial[rho] * angular[phi];
            }
        }
    }
    return coef;
}

ShapeDescriptor normalize_descriptors(const PftCoefficients& coef) {
    const double dc = std::abs(coef.values.at(0));
    if (!(dc > 0.0)) throw EmptySegmentationError("zero-area shape coefficients");
    ShapeDescriptor d;
    d.values.resize(coef.values.size());
    d.values[0] = dc / (std::numbers::pi * coef.max_radius * coef.max_radius);
    for (std::size_t k = 1; k < coef.values.size(); ++k) d.values[k] = std::abs(coef.values[k]) / dc;
    return d;
}

ShapeDescriptor shape_descriptor(const BinaryMask& mask, const PftConfig& cfg) {
    return normalize_descriptors(pf2(mask, cfg));
}

}  // namespace leafret
