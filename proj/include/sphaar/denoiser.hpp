#pragma once

#include <string>

#include "sphaar/signal.hpp"

namespace sphaar {

enum class DenoiserKind {
    kIdentity,
    kFrameletShrink,
    kExternal,
};

// Configuration for the pluggable denoiser used inside the solver's z-step.
//
// kFrameletShrink soft-shrinks the detail coefficients of a depth-`depth`
// decomposition by `gain * sigma` and leaves the lowpass band untouched.
// kExternal invokes `command` as a shell line after substituting the
// placeholders {input}, {sigma} and {output}; the process must read the
// input container, write a same-shape signal container to the output path
// and exit with status 0.
struct DenoiserSpec {
    DenoiserKind kind = DenoiserKind::kIdentity;
    int depth = 0;        // 0 selects the same default depth as the solver
    double gain = 1.0;    // threshold multiplier, must be > 0
    std::string command;  // external template, required for kExternal
    std::string scratch_dir;  // temp file location; empty = $SPHAAR_SCRATCH or system tmp
};

DenoiserKind parse_denoiser_kind(const std::string& name);
const char* denoiser_kind_name(DenoiserKind kind);

// Applies the configured denoiser at noise level sigma >= 0. sigma == 0 is
// an exact no-op for every kind.
SphericalSignal denoise(const DenoiserSpec& spec, const SphericalSignal& sig, double sigma);

}  // namespace sphaar
