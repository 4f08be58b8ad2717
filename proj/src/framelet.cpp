#include "sphaar/framelet.hpp"

#include <cmath>

#include "sphaar/errors.hpp"

namespace sphaar {

namespace {

// True when n = 6 * 4^j with the level written to out.
bool is_patch_count(std::uint64_t n, int& out) {
    if (n == 0 || n % 6 != 0) return false;
    std::uint64_t q = n / 6;
    int level = 0;
    while (q > 1) {
        if (q % 4 != 0) return false;
        q /= 4;
        ++level;
    }
    out = level;
    return true;
}

}  // namespace

void decompose_level_into(const double* c, std::uint64_t parents, double* lowpass,
                          double* const bands[kNumDetailBands]) {
    for (std::uint64_t p = 0; p < parents; ++p) {
        const double v0 = c[4 * p];
        const double v1 = c[4 * p + 1];
        const double v2 = c[4 * p + 2];
        const double v3 = c[4 * p + 3];
        lowpass[p] = 0.5 * (v0 + v1 + v2 + v3);
        bands[0][p] = 0.5 * (v0 - v1);
        bands[1][p] = 0.5 * (v0 - v2);
        bands[2][p] = 0.5 * (v0 - v3);
        bands[3][p] = 0.5 * (v1 - v2);
        bands[4][p] = 0.5 * (v1 - v3);
        bands[5][p] = 0.5 * (v2 - v3);
    }
}

void reconstruct_level_into(const double* lowpass, const double* const bands[kNumDetailBands],
                             std::uint64_t parents, double* c) {
    for (std::uint64_t p = 0; p < parents; ++p) {
        const double w = lowpass[p];
        const double d1 = bands[0][p];
        const double d2 = bands[1][p];
        const double d3 = bands[2][p];
        const double d4 = bands[3][p];
        const double d5 = bands[4][p];
        const double d6 = bands[5][p];
        c[4 * p] = 0.5 * (w + d1 + d2 + d3);
        c[4 * p + 1] = 0.5 * (w - d1 + d4 + d5);
        c[4 * p + 2] = 0.5 * (w - d2 - d4 + d6);
        c[4 * p + 3] = 0.5 * (w - d3 - d5 - d6);
    }
}

LevelCoeffs decompose_level(const std::vector<double>& c) {
    int level = 0;
    if (!is_patch_count(c.size(), level) || level < 1) {
        throw ShapeError("decompose input length is not a level >= 1 sample count");
    }
    const std::uint64_t parents = c.size() / 4;
    LevelCoeffs lc;
    lc.lowpass.resize(parents);
    double* bands[kNumDetailBands];
    for (int b = 0; b < kNumDetailBands; ++b) {
        lc.details[b].resize(parents);
        bands[b] = lc.details[b].data();
    }
    decompose_level_into(c.data(), parents, lc.lowpass.data(), bands);
    return lc;
}

std::vector<double> reconstruct_level(const std::vector<double>& lowpass,
                                      const std::array<std::vector<double>, kNumDetailBands>& details) {
    int level = 0;
    if (!is_patch_count(lowpass.size(), level)) {
        throw ShapeError("reconstruct lowpass length is not a sample count");
    }
    const double* bands[kNumDetailBands];
    for (int b = 0; b < kNumDetailBands; ++b) {
        if (details[b].size() != lowpass.size()) {
            throw ShapeError("reconstruct band length differs from lowpass");
        }
        bands[b] = details[b].data();
    }
    std::vector<double> c(lowpass.size() * 4);
    reconstruct_level_into(lowpass.data(), bands, lowpass.size(), c.data());
    return c;
}

std::vector<double> reconstruct_level(const LevelCoeffs& lc) {
    return reconstruct_level(lc.lowpass, lc.details);
}

std::uint64_t FrameletPyramid::expected_count(int fine_level, int depth) {
    std::uint64_t total = patch_count(fine_level - depth);
    for (int level = fine_level - depth; level < fine_level; ++level) {
        total += kNumDetailBands * patch_count(level);
    }
    return total;
}

FrameletPyramid FrameletPyramid::zeros(int fine_level, int depth, int channels) {
    if (depth < 1 || depth > fine_level) throw InputDomainError("pyramid depth out of range");
    if (channels < 1) throw InputDomainError("pyramid needs at least one channel");
    FrameletPyramid pyr;
    pyr.fine_level = fine_level;
    pyr.depth = depth;
    pyr.channels = channels;
    pyr.values.assign(channels, std::vector<double>(expected_count(fine_level, depth), 0.0));
    return pyr;
}

std::uint64_t FrameletPyramid::band_offset(int level, int band) const {
    if (level < coarse_level() || level >= fine_level) throw LookupError("no bands at this level");
    if (band < 1 || band > kNumDetailBands) throw LookupError("band id out of range");
    std::uint64_t off = lowpass_length();
    for (int m = coarse_level(); m < level; ++m) off += kNumDetailBands * patch_count(m);
    return off + static_cast<std::uint64_t>(band - 1) * patch_count(level);
}

void FrameletPyramid::validate() const {
    if (depth < 1 || depth > fine_level) throw InputDomainError("pyramid depth out of range");
    if (channels < 1) throw InputDomainError("pyramid needs at least one channel");
    if (values.size() != static_cast<size_t>(channels)) {
        throw ShapeError("pyramid channel count does not match value vectors");
    }
    const std::uint64_t want = coeff_count();
    for (const auto& ch : values) {
        if (ch.size() != want) throw ShapeError("pyramid coefficient count mismatch");
    }
}

FrameletPyramid decompose(const SphericalSignal& sig, int depth) {
    sig.validate();
    if (depth < 1 || depth > sig.level) throw InputDomainError("decomposition depth out of range");
    FrameletPyramid pyr = FrameletPyramid::zeros(sig.level, depth, sig.channels);
    for (int ch = 0; ch < sig.channels; ++ch) {
        std::vector<double> cur = sig.values[ch];
        for (int level = sig.level; level > sig.level - depth; --level) {
            const std::uint64_t parents = patch_count(level - 1);
            std::vector<double> low(parents);
            double* bands[kNumDetailBands];
            for (int b = 0; b < kNumDetailBands; ++b) {
                bands[b] = pyr.values[ch].data() + pyr.band_offset(level - 1, b + 1);
            }
            decompose_level_into(cur.data(), parents, low.data(), bands);
            cur = std::move(low);
        }
        std::copy(cur.begin(), cur.end(), pyr.values[ch].begin());
    }
    return pyr;
}

SphericalSignal reconstruct(const FrameletPyramid& pyr) {
    pyr.validate();
    SphericalSignal sig = SphericalSignal::zeros(pyr.fine_level, pyr.channels);
    for (int ch = 0; ch < pyr.channels; ++ch) {
        std::vector<double> cur(pyr.values[ch].begin(),
                                pyr.values[ch].begin() + pyr.lowpass_length());
        for (int level = pyr.coarse_level(); level < pyr.fine_level; ++level) {
            const double* bands[kNumDetailBands];
            for (int b = 0; b < kNumDetailBands; ++b) {
                bands[b] = pyr.values[ch].data() + pyr.band_offset(level, b + 1);
            }
            std::vector<double> next(patch_count(level + 1));
            reconstruct_level_into(cur.data(), bands, patch_count(level), next.data());
            cur = std::move(next);
        }
        sig.values[ch] = std::move(cur);
    }
    return sig;
}

}  // namespace sphaar
