#include "sphaar/metrics.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "sphaar/errors.hpp"

namespace sphaar {

Mask gen_mask(int level, const MaskSpec& spec) {
    if (level < 0) throw InputDomainError("mask level must be nonnegative");
    if (!(spec.missing_ratio >= 0.0 && spec.missing_ratio <= 1.0)) {
        throw InputDomainError("missing ratio must lie in [0,1]");
    }
    Mask m;
    m.level = level;
    m.flags.resize(patch_count(level));
    SplitMix64 rng(spec.seed);
    for (auto& f : m.flags) f = rng.next_double() > spec.missing_ratio ? 1 : 0;
    return m;
}

namespace {

struct Flat {
    const double* data;
    size_t size;
};

double psnr_flat(const std::vector<Flat>& a, const std::vector<Flat>& b) {
    double sum = 0.0;
    std::uint64_t n = 0;
    for (size_t k = 0; k < a.size(); ++k) {
        for (size_t i = 0; i < a[k].size; ++i) {
            const double d = a[k].data[i] - b[k].data[i];
            sum += d * d;
        }
        n += a[k].size;
    }
    const double mse = sum / static_cast<double>(n);
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(255.0 / std::sqrt(mse));
}

double ssim_flat(const std::vector<Flat>& a, const std::vector<Flat>& b) {
    std::uint64_t n = 0;
    for (const Flat& f : a) n += f.size;
    if (n < 2) throw InputDomainError("ssim needs at least two samples");
    const double inv = 1.0 / static_cast<double>(n);
    double mx = 0.0, my = 0.0;
    for (size_t k = 0; k < a.size(); ++k) {
        for (size_t i = 0; i < a[k].size; ++i) {
            mx += a[k].data[i];
            my += b[k].data[i];
        }
    }
    mx *= inv;
    my *= inv;
    double vx = 0.0, vy = 0.0, cxy = 0.0;
    for (size_t k = 0; k < a.size(); ++k) {
        for (size_t i = 0; i < a[k].size; ++i) {
            const double dx = a[k].data[i] - mx;
            const double dy = b[k].data[i] - my;
            vx += dx * dx;
            vy += dy * dy;
            cxy += dx * dy;
        }
    }
    vx *= inv;
    vy *= inv;
    cxy *= inv;
    const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
    const double c2 = (0.03 * 255.0) * (0.03 * 255.0);
    return ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
           ((mx * mx + my * my + c1) * (vx + vy + c2));
}

std::vector<Flat> flatten(const SphericalSignal& s) {
    std::vector<Flat> out;
    for (const auto& ch : s.values) out.push_back({ch.data(), ch.size()});
    return out;
}

void check_same_shape(const SphericalSignal& a, const SphericalSignal& b) {
    a.validate();
    b.validate();
    if (a.level != b.level || a.channels != b.channels) {
        throw ShapeError("signals have different shapes");
    }
}

void check_same_shape(const EquirectImage& a, const EquirectImage& b) {
    a.validate();
    b.validate();
    if (a.width != b.width || a.height != b.height || a.channels != b.channels) {
        throw ShapeError("images have different shapes");
    }
}

}  // namespace

double psnr(const SphericalSignal& a, const SphericalSignal& b) {
    check_same_shape(a, b);
    return psnr_flat(flatten(a), flatten(b));
}

double psnr(const EquirectImage& a, const EquirectImage& b) {
    check_same_shape(a, b);
    return psnr_flat({{a.pixels.data(), a.pixels.size()}}, {{b.pixels.data(), b.pixels.size()}});
}

double ssim(const SphericalSignal& a, const SphericalSignal& b) {
    check_same_shape(a, b);
    return ssim_flat(flatten(a), flatten(b));
}

double ssim(const EquirectImage& a, const EquirectImage& b) {
    check_same_shape(a, b);
    return ssim_flat({{a.pixels.data(), a.pixels.size()}}, {{b.pixels.data(), b.pixels.size()}});
}

}  // namespace sphaar
