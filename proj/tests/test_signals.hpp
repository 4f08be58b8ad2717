#pragma once

#include <vector>

#include "sphaar/metrics.hpp"
#include "sphaar/partition.hpp"
#include "sphaar/signal.hpp"

// Smooth reference signal used by the solver tests: a fixed combination of
// three low-order spherical harmonics sampled at patch centers, kept inside
// [0, 255] without clipping.
inline sphaar::SphericalSignal make_harmonics(const sphaar::Partition& part) {
    sphaar::SphericalSignal sig = sphaar::SphericalSignal::zeros(part.level(), 1);
    const std::uint64_t n = sig.sample_count();
    for (std::uint64_t i = 0; i < n; ++i) {
        const sphaar::Vec3 p = part.patch_center(i);
        const double y10 = p.z;
        const double y11 = p.x;
        const double y20 = 1.5 * p.z * p.z - 0.5;
        sig.values[0][i] = 128.0 + 55.0 * y10 + 35.0 * y11 + 25.0 * y20;
    }
    return sig;
}

// Uniform [0, 255) noise signal with a deterministic stream.
inline sphaar::SphericalSignal make_random_signal(int level, int channels,
                                                  std::uint64_t seed) {
    sphaar::SphericalSignal sig = sphaar::SphericalSignal::zeros(level, channels);
    sphaar::SplitMix64 rng(seed);
    for (auto& chan : sig.values) {
        for (auto& v : chan) v = rng.next_double() * 255.0;
    }
    return sig;
}
