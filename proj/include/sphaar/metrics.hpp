#pragma once

#include <cstdint>

#include "sphaar/mask.hpp"
#include "sphaar/signal.hpp"

namespace sphaar {

// SplitMix64 stream, specified by algorithm (not by any library) so that a
// given seed yields identical draws on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform [0,1) built from the top 53 bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

struct MaskSpec {
    double missing_ratio = 0.0;
    std::uint64_t seed = 0;
};

// One draw per patch in canonical order; observed iff the draw strictly
// exceeds the missing ratio.
Mask gen_mask(int level, const MaskSpec& spec);

// 20*log10(255/sqrt(MSE)) over all entries and channels; +infinity for
// bitwise-identical inputs.
double psnr(const SphericalSignal& a, const SphericalSignal& b);
double psnr(const EquirectImage& a, const EquirectImage& b);

// Global single-window structural similarity with population statistics and
// C1 = (0.01*255)^2, C2 = (0.03*255)^2. Needs at least two samples.
double ssim(const SphericalSignal& a, const SphericalSignal& b);
double ssim(const EquirectImage& a, const EquirectImage& b);

}  // namespace sphaar
