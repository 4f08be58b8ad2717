#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sphaar/signal.hpp"

namespace sphaar {

// Proximal map of tau*|t|: sign(t) * max(|t| - tau, 0).
inline double soft_shrink(double t, double tau) {
    const double m = std::fabs(t) - tau;
    if (m <= 0.0) return 0.0;
    return t < 0.0 ? -m : m;
}

// Analysis matrix applied to each sibling 4-group (children in digit order
// 0..3): row 0 averages, rows 1..6 are the directional differences
// corner-vs-others and pairwise. All entries are dyadic so P^T P = I exactly.
inline constexpr std::array<std::array<double, 4>, 7> kFrameletMatrix = {{
    {0.5, 0.5, 0.5, 0.5},
    {0.5, -0.5, 0.0, 0.0},
    {0.5, 0.0, -0.5, 0.0},
    {0.5, 0.0, 0.0, -0.5},
    {0.0, 0.5, -0.5, 0.0},
    {0.0, 0.5, 0.0, -0.5},
    {0.0, 0.0, 0.5, -0.5},
}};

inline constexpr int kNumDetailBands = 6;

// One analysis step: level-j samples -> level-(j-1) lowpass + 6 detail bands.
struct LevelCoeffs {
    std::vector<double> lowpass;
    std::array<std::vector<double>, kNumDetailBands> details;
};

LevelCoeffs decompose_level(const std::vector<double>& c);
std::vector<double> reconstruct_level(const LevelCoeffs& lc);
std::vector<double> reconstruct_level(const std::vector<double>& lowpass,
                                      const std::array<std::vector<double>, kNumDetailBands>& details);

// Allocation-free single-step kernels over raw storage; `parents` is the
// coarse sample count and `c` holds 4*parents fine samples. Used by the
// pyramid code and the timing harness.
void decompose_level_into(const double* c, std::uint64_t parents, double* lowpass,
                          double* const bands[kNumDetailBands]);
void reconstruct_level_into(const double* lowpass, const double* const bands[kNumDetailBands],
                            std::uint64_t parents, double* c);

// Multi-level coefficients, stored coarsest-first per channel:
// [lowpass at J-d | level J-d bands 1..6 | ... | level J-1 bands 1..6].
struct FrameletPyramid {
    int fine_level = 0;
    int depth = 0;
    int channels = 1;
    std::vector<std::vector<double>> values;

    static FrameletPyramid zeros(int fine_level, int depth, int channels);
    static std::uint64_t expected_count(int fine_level, int depth);

    int coarse_level() const { return fine_level - depth; }
    std::uint64_t lowpass_length() const { return patch_count(coarse_level()); }
    std::uint64_t band_length(int level) const { return patch_count(level); }
    // Detail band offsets; level in [J-d, J-1], band in [1, 6].
    std::uint64_t band_offset(int level, int band) const;
    std::uint64_t coeff_count() const { return expected_count(fine_level, depth); }

    void validate() const;
};

// Default analysis depth used when a caller does not choose one.
inline int default_depth(int level) { return level < 3 ? level : 3; }

FrameletPyramid decompose(const SphericalSignal& sig, int depth);
SphericalSignal reconstruct(const FrameletPyramid& pyr);

}  // namespace sphaar
