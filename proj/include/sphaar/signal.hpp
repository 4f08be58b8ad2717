#pragma once

#include <cstdint>
#include <vector>

#include "sphaar/partition.hpp"

namespace sphaar {

// Real-valued samples on every leaf patch, one vector per channel in
// canonical patch order. Values use the [0,255] image scale by convention
// but any finite real is representable.
struct SphericalSignal {
    int level = 0;
    int channels = 1;
    std::vector<std::vector<double>> values;

    static SphericalSignal zeros(int level, int channels);

    std::uint64_t sample_count() const { return patch_count(level); }

    // Throws ShapeError when vector lengths disagree with level/channels,
    // InputDomainError on non-finite entries.
    void validate() const;
};

// Row-major planar image, channels interleaved per pixel, row 0 at the top.
// Under the equirectangular convention columns span longitude [-pi, pi) and
// rows span latitude, north first, with half-pixel centers.
struct EquirectImage {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<double> pixels;

    static EquirectImage filled(int width, int height, int channels, double value);

    double& at(int row, int col, int ch) {
        return pixels[(static_cast<size_t>(row) * width + col) * channels + ch];
    }
    double at(int row, int col, int ch) const {
        return pixels[(static_cast<size_t>(row) * width + col) * channels + ch];
    }

    void validate() const;
};

// Direction <-> equirectangular angle helpers shared by ingestion/rendering.
void direction_to_lonlat(const Vec3& p, double& lon, double& lat);
Vec3 lonlat_to_direction(double lon, double lat);

// Samples the image at every patch center by bilinear interpolation with
// longitudinal wrap-around and latitude clamping.
SphericalSignal from_equirectangular(const EquirectImage& img, const Partition& part);

// Nearest-patch rendering: each pixel takes the value of the patch its
// center direction lands in. Output values are clamped to [0,255].
EquirectImage to_equirectangular(const SphericalSignal& sig, const Partition& part,
                                 int width, int height);

// Maps a square image onto one face's parameter square (bilinear samples at
// patch-center parameters); every other face is filled with the image mean.
SphericalSignal single_face_ingest(const EquirectImage& img, int face, const Partition& part);

}  // namespace sphaar
