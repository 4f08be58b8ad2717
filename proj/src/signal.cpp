#include "sphaar/signal.hpp"

#include <algorithm>
#include <cmath>

#include "sphaar/errors.hpp"

namespace sphaar {

namespace {
constexpr double kPi = 3.14159265358979323846;

double lerp(double a, double b, double t) { return a + t * (b - a); }

int clamp_index(long long i, int hi) {
    if (i < 0) return 0;
    if (i > hi) return hi;
    return static_cast<int>(i);
}

// Bilinear sample at continuous pixel coordinates (fx, fy) with columns
// wrapping (panorama seam) and rows clamping (poles).
double sample_wrap_clamp(const EquirectImage& img, double fx, double fy, int ch) {
    const double xf = std::floor(fx);
    const double yf = std::floor(fy);
    const double tx = fx - xf;
    const double ty = fy - yf;
    long long x0 = static_cast<long long>(xf);
    x0 %= img.width;
    if (x0 < 0) x0 += img.width;
    const int c0 = static_cast<int>(x0);
    const int c1 = (c0 + 1) % img.width;
    const int r0 = clamp_index(static_cast<long long>(yf), img.height - 1);
    const int r1 = clamp_index(static_cast<long long>(yf) + 1, img.height - 1);
    const double top = lerp(img.at(r0, c0, ch), img.at(r0, c1, ch), tx);
    const double bot = lerp(img.at(r1, c0, ch), img.at(r1, c1, ch), tx);
    return lerp(top, bot, ty);
}

// Bilinear sample with both axes clamped (planar, non-periodic image).
double sample_clamp(const EquirectImage& img, double fx, double fy, int ch) {
    const double xf = std::floor(fx);
    const double yf = std::floor(fy);
    const double tx = fx - xf;
    const double ty = fy - yf;
    const int c0 = clamp_index(static_cast<long long>(xf), img.width - 1);
    const int c1 = clamp_index(static_cast<long long>(xf) + 1, img.width - 1);
    const int r0 = clamp_index(static_cast<long long>(yf), img.height - 1);
    const int r1 = clamp_index(static_cast<long long>(yf) + 1, img.height - 1);
    const double top = lerp(img.at(r0, c0, ch), img.at(r0, c1, ch), tx);
    const double bot = lerp(img.at(r1, c0, ch), img.at(r1, c1, ch), tx);
    return lerp(top, bot, ty);
}

}  // namespace

SphericalSignal SphericalSignal::zeros(int level, int channels) {
    if (level < 0) throw InputDomainError("signal level must be nonnegative");
    if (channels < 1) throw InputDomainError("signal needs at least one channel");
    SphericalSignal s;
    s.level = level;
    s.channels = channels;
    s.values.assign(channels, std::vector<double>(patch_count(level), 0.0));
    return s;
}

void SphericalSignal::validate() const {
    if (level < 0) throw InputDomainError("signal level must be nonnegative");
    if (channels < 1) throw InputDomainError("signal needs at least one channel");
    if (values.size() != static_cast<size_t>(channels)) {
        throw ShapeError("signal channel count does not match value vectors");
    }
    const std::uint64_t n = patch_count(level);
    for (const auto& ch : values) {
        if (ch.size() != n) throw ShapeError("signal vector length does not match level");
        for (double v : ch) {
            if (!std::isfinite(v)) throw InputDomainError("signal contains a non-finite value");
        }
    }
}

EquirectImage EquirectImage::filled(int width, int height, int channels, double value) {
    if (width < 1 || height < 1) throw InputDomainError("image dimensions must be positive");
    if (channels < 1) throw InputDomainError("image needs at least one channel");
    EquirectImage img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.pixels.assign(static_cast<size_t>(width) * height * channels, value);
    return img;
}

void EquirectImage::validate() const {
    if (width < 1 || height < 1) throw InputDomainError("image dimensions must be positive");
    if (channels < 1) throw InputDomainError("image needs at least one channel");
    if (pixels.size() != static_cast<size_t>(width) * height * channels) {
        throw ShapeError("image pixel buffer length mismatch");
    }
}

void direction_to_lonlat(const Vec3& p, double& lon, double& lat) {
    lon = std::atan2(p.y, p.x);
    if (lon >= kPi) lon -= 2.0 * kPi;
    lat = std::asin(std::clamp(p.z, -1.0, 1.0));
}

Vec3 lonlat_to_direction(double lon, double lat) {
    const double cl = std::cos(lat);
    return Vec3{cl * std::cos(lon), cl * std::sin(lon), std::sin(lat)};
}

SphericalSignal from_equirectangular(const EquirectImage& img, const Partition& part) {
    img.validate();
    SphericalSignal sig = SphericalSignal::zeros(part.level(), img.channels);
    part.visit_leaves([&](std::uint64_t idx, const ParamRect& r) {
        const Vec3 center = face_map(r.face, r.mid_u(), r.mid_v());
        double lon = 0.0, lat = 0.0;
        direction_to_lonlat(center, lon, lat);
        const double fx = (lon + kPi) / (2.0 * kPi) * img.width - 0.5;
        const double fy = (kPi / 2.0 - lat) / kPi * img.height - 0.5;
        for (int ch = 0; ch < img.channels; ++ch) {
            sig.values[ch][idx] = sample_wrap_clamp(img, fx, fy, ch);
        }
    });
    return sig;
}

EquirectImage to_equirectangular(const SphericalSignal& sig, const Partition& part,
                                 int width, int height) {
    sig.validate();
    if (sig.level != part.level()) throw ShapeError("signal level does not match partition");
    if (width < 1 || height < 1) throw InputDomainError("render dimensions must be positive");
    EquirectImage img = EquirectImage::filled(width, height, sig.channels, 0.0);
    for (int row = 0; row < height; ++row) {
        const double lat = kPi / 2.0 - (row + 0.5) * kPi / height;
        for (int col = 0; col < width; ++col) {
            const double lon = -kPi + (col + 0.5) * 2.0 * kPi / width;
            const std::uint64_t idx = part.locate_index(lonlat_to_direction(lon, lat));
            for (int ch = 0; ch < sig.channels; ++ch) {
                img.at(row, col, ch) = std::clamp(sig.values[ch][idx], 0.0, 255.0);
            }
        }
    }
    return img;
}

SphericalSignal single_face_ingest(const EquirectImage& img, int face, const Partition& part) {
    img.validate();
    if (img.width != img.height) throw InputDomainError("single-face ingest needs a square image");
    if (face < 0 || face >= kNumFaces) throw InputDomainError("face index out of range");

    std::vector<double> mean(img.channels, 0.0);
    for (size_t i = 0; i < img.pixels.size(); ++i) {
        mean[i % img.channels] += img.pixels[i];
    }
    const double inv = 1.0 / (static_cast<double>(img.width) * img.height);
    for (double& m : mean) m *= inv;

    const int n = img.width;
    SphericalSignal sig = SphericalSignal::zeros(part.level(), img.channels);
    part.visit_leaves([&](std::uint64_t idx, const ParamRect& r) {
        if (r.face != face) {
            for (int ch = 0; ch < img.channels; ++ch) sig.values[ch][idx] = mean[ch];
            return;
        }
        // Image top row maps to v = +1 so the picture reads upright with +u
        // to the right when viewed from outside the sphere.
        const double fx = (r.mid_u() + 1.0) * 0.5 * n - 0.5;
        const double fy = (1.0 - r.mid_v()) * 0.5 * n - 0.5;
        for (int ch = 0; ch < img.channels; ++ch) {
            sig.values[ch][idx] = sample_clamp(img, fx, fy, ch);
        }
    });
    return sig;
}

}  // namespace sphaar
