#pragma once

#include <cstdint>
#include <vector>

#include "sphaar/denoiser.hpp"
#include "sphaar/framelet.hpp"
#include "sphaar/mask.hpp"
#include "sphaar/signal.hpp"

namespace sphaar {

// Parameters of the plug-and-play ADMM iteration for
//   min ||F x||_1 + lambda * Phi(x)   s.t.  x = g on observed patches,
// where F is the framelet analysis operator and Phi is represented
// implicitly by the denoiser.
struct SolverParams {
    double lambda = 1.0;
    double beta1 = 0.5;
    double beta2 = 2.0;
    int depth = 0;  // decomposition depth; 0 selects default_depth(level)
    int max_iters = 50;
    double rel_tol = 1e-4;

    void validate() const;
};

// Working variables of one ADMM run. `fx` caches the analysis transform of
// the current `x`; admm_step keeps it consistent.
struct SolverState {
    SphericalSignal x;       // primal iterate
    SphericalSignal z;       // denoiser split variable
    FrameletPyramid y;       // coefficient split variable
    FrameletPyramid fx;      // F applied to the current x
    FrameletPyramid lambda1; // multiplier for y = F x
    SphericalSignal lambda2; // multiplier for z = x
    int iter = 0;
    double last_rel_change = 0.0;
};

// Explicit thresholds for one step. The default path uses
// y_tau = 1/beta1 and sigma = sqrt(lambda/beta2).
struct StepControls {
    double y_tau;
    double sigma;
};

// Builds the initial state: x equals g on observed patches and the observed
// mean elsewhere, z = x, y = fx = F x, multipliers zero.
SolverState init_state(const SphericalSignal& g, const Mask& mask,
                       const SolverParams& params);

void admm_step(SolverState& state, const SolverParams& params, const Mask& mask,
               const SphericalSignal& g, const DenoiserSpec& denoiser);
void admm_step(SolverState& state, const SolverParams& params, const Mask& mask,
               const SphericalSignal& g, const DenoiserSpec& denoiser,
               const StepControls& controls);

struct IterationStats {
    double objective_l1 = 0.0;  // ||F x||_1 after the step
    double rel_change = 0.0;
    bool feasible = false;  // x == g bitwise on observed patches
};

struct RunReport {
    SolverParams params;
    int depth_used = 0;
    int level = 0;
    int channels = 0;
    std::vector<std::vector<IterationStats>> per_channel;
    double wall_seconds = 0.0;

    int total_iterations() const;
};

struct InpaintResult {
    SphericalSignal restored;
    RunReport report;
};

// Runs the full solve, one channel at a time. Stops a channel when the
// relative change of x drops below rel_tol or after max_iters steps.
InpaintResult inpaint(const SphericalSignal& g, const Mask& mask,
                      const SolverParams& params, const DenoiserSpec& denoiser);

}  // namespace sphaar
