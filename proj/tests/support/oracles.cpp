#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace leafret::testing {

BinaryMask random_mask(std::mt19937_64& g, int width, int height, double density) {
    std::bernoulli_distribution b(density);
    BinaryMask m(width, height);
    for (auto& v : m.values()) v = b(g) ? 1 : 0;
    return m;
}

GrayImage random_gray(std::mt19937_64& g, int width, int height) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GrayImage img(width, height);
    for (auto& v : img.values()) v = u(g);
    return img;
}

RasterImage random_raster(std::mt19937_64& g, int width, int height) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RasterImage img(width, height);
    for (auto& v : img.data()) v = u(g);
    return img;
}

BinaryMask oracle_median(const BinaryMask& m, int kernel) {
    BinaryMask out(m.width(), m.height());
    const int h = kernel / 2;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            int fg = 0;
            int bg = 0;
            for (int dy = -h; dy <= h; ++dy) {
                for (int dx = -h; dx <= h; ++dx) {
                    const int xx = std::clamp(x + dx, 0, m.width() - 1);
                    const int yy = std::clamp(y + dy, 0, m.height() - 1);
                    (m.test(xx, yy) ? fg : bg) += 1;
                }
            }
            out(x, y) = fg > bg ? 1 : 0;
        }
    }
    return out;
}

namespace {

std::int64_t find(std::vector<std::int64_t>& parent, std::int64_t i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

}  // namespace

std::vector<std::int64_t> oracle_partition(const BinaryMask& m) {
    const std::int64_t n = static_cast<std::int64_t>(m.size());
    std::vector<std::int64_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto unite = [&](std::int64_t a, std::int64_t b) {
        a = find(parent, a);
        b = find(parent, b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (!m.test(x, y)) continue;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int xx = x + dx;
                    const int yy = y + dy;
                    if ((dx || dy) && m.contains(xx, yy) && m.test(xx, yy)) {
                        unite(static_cast<std::int64_t>(m.index(x, y)), static_cast<std::int64_t>(m.index(xx, yy)));
                    }
                }
            }
        }
    }
    std::vector<std::int64_t> out(n, -1);
    for (std::int64_t i = 0; i < n; ++i) {
        if (m.values()[i]) out[i] = find(parent, i);
    }
    return out;
}

std::vector<std::int64_t> canonical_partition(const LabelMap& labels) {
    const auto v = labels.labels.values();
    std::vector<std::int64_t> first(labels.count + 1, -1);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > 0 && first[v[i]] < 0) first[v[i]] = static_cast<std::int64_t>(i);
    }
    std::vector<std::int64_t> out(v.size(), -1);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > 0) out[i] = first[v[i]];
    }
    return out;
}

BinaryMask oracle_fill_holes(const BinaryMask& m) {
    const int w = m.width();
    const int h = m.height();
    std::vector<std::uint8_t> outside(m.size(), 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if ((x == 0 || y == 0 || x == w - 1 || y == h - 1) && !m.test(x, y)) outside[m.index(x, y)] = 1;
        }
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (m.test(x, y) || outside[m.index(x, y)]) continue;
                const bool reach = (x > 0 && outside[m.index(x - 1, y)]) ||
                                   (x + 1 < w && outside[m.index(x + 1, y)]) ||
                                   (y > 0 && outside[m.index(x, y - 1)]) ||
                                   (y + 1 < h && outside[m.index(x, y + 1)]);
                if (reach) {
                    outside[m.index(x, y)] = 1;
                    changed = true;
                }
            }
        }
    }
    BinaryMask out(w, h);
    for (std::size_t i = 0; i < m.size(); ++i) out.values()[i] = outside[i] ? 0 : 1;
    return out;
}

GrayImage oracle_open(const GrayImage& img, int radius, const BinaryMask& domain) {
    const int w = img.width();
    const int h = img.height();
    auto pass = [&](const GrayImage& src, bool erode) {
        GrayImage out = src;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (!domain.test(x, y)) continue;
                double acc = erode ? INFINITY : -INFINITY;
                for (int dy = -radius; dy <= radius; ++dy) {
                    for (int dx = -radius; dx <= radius; ++dx) {
                        if (dx * dx + dy * dy > radius * radius) continue;
                        const int xx = x + dx;
                        const int yy = y + dy;
                        if (!domain.contains(xx, yy) || !domain.test(xx, yy)) continue;
                        acc = erode ? std::min(acc, src(xx, yy)) : std::max(acc, src(xx, yy));
                    }
                }
                out(x, y) = acc;
            }
        }
        return out;
    };
    return pass(pass(img, true), false);
}

std::vector<std::complex<double>> oracle_pf2(const BinaryMask& m, int rho_count, int phi_count) {
    double sx = 0.0;
    double sy = 0.0;
    double n = 0.0;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (m.test(x, y)) {
                sx += x;
                sy += y;
                n += 1.0;
            }
        }
    }
    const double xc = sx / n;
    const double yc = sy / n;
    double max_r = 0.0;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (m.test(x, y)) max_r = std::max(max_r, std::sqrt((x - xc) * (x - xc) + (y - yc) * (y - yc)));
        }
    }
    const double big_r = max_r + 0.5;
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<std::complex<double>> out(static_cast<std::size_t>(rho_count) * phi_count);
    for (int rho = 0; rho < rho_count; ++rho) {
        for (int phi = 0; phi < phi_count; ++phi) {
            std::complex<double> acc{0.0, 0.0};
            for (int y = 0; y < m.height(); ++y) {
                for (int x = 0; x < m.width(); ++x) {
                    if (!m.test(x, y)) continue;
                    const double r = std::sqrt((x - xc) * (x - xc) + (y - yc) * (y - yc));
                    double theta = std::atan2(y - yc, x - xc);
                    if (theta < 0) theta += two_pi;
                    acc += std::exp(std::complex<double>(0.0, -(two_pi * r / big_r * rho + theta * phi)));
                }
            }
            out[rho * phi_count + phi] = acc;
        }
    }
    return out;
}

std::vector<double> oracle_color_moments(const RasterImage& img, const BinaryMask& m) {
    std::vector<double> out;
    for (int c = 0; c < 3; ++c) {
        long double s = 0;
        long double n = 0;
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x) {
                if (m.test(x, y)) {
                    s += img.at(x, y)[c];
                    n += 1;
                }
            }
        }
        const long double mu = s / n;
        long double s2 = 0;
        long double s3 = 0;
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x) {
                if (m.test(x, y)) {
                    const long double d = img.at(x, y)[c] - mu;
                    s2 += d * d;
                    s3 += d * d * d;
                }
            }
        }
        const long double third = s3 / n;
        out.push_back(static_cast<double>(mu));
        out.push_back(static_cast<double>(std::sqrt(s2 / n)));
        out.push_back(static_cast<double>(third < 0 ? -std::pow(-third, 1.0L / 3) : std::pow(third, 1.0L / 3)));
    }
    return out;
}

std::vector<std::int64_t> oracle_ranking(const std::vector<FeatureVector>& refs,
                                         const std::vector<std::int64_t>& ids,
                                         const FeatureVector& q, double ws, double wc, double wv) {
    auto dist = [](const FeatureVector& a, const FeatureVector& b, std::size_t from, std::size_t to) {
        double s = 0.0;
        for (std::size_t i = from; i < to; ++i) s += (a.values[i] - b.values[i]) * (a.values[i] - b.values[i]);
        return std::sqrt(s);
    };
    std::vector<std::pair<double, std::int64_t>> scored;
    for (std::size_t i = 0; i < refs.size(); ++i) {
        const auto& l = q.layout;
        const double d = (ws * dist(q, refs[i], 0, l.shape) +
                          wc * dist(q, refs[i], l.shape, l.shape + l.color) +
                          wv * dist(q, refs[i], l.shape + l.color, l.dims())) /
                         (ws + wc + wv);
        scored.emplace_back(d, ids[i]);
    }
    std::sort(scored.begin(), scored.end());
    std::vector<std::int64_t> out;
    for (const auto& s : scored) out.push_back(s.second);
    return out;
}

}  // namespace leafret::testing
