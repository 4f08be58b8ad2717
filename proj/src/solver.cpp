#include "sphaar/solver.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <utility>

#include "sphaar/errors.hpp"

namespace sphaar {

namespace {

int resolve_depth(const SolverParams& params, int level) {
    int d = params.depth > 0 ? params.depth : default_depth(level);
    if (d < 1 || d > level) {
        throw InputDomainError("decomposition depth must lie in [1, level]");
    }
    return d;
}

double pyramid_l1(const FrameletPyramid& pyr) {
    double sum = 0.0;
    for (const auto& chan : pyr.values) {
        for (double v : chan) sum += std::fabs(v);
    }
    return sum;
}

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool feasible_on_observed(const SphericalSignal& x, const SphericalSignal& g,
                          const Mask& mask) {
    const std::uint64_t n = x.sample_count();
    for (int c = 0; c < x.channels; ++c) {
        for (std::uint64_t p = 0; p < n; ++p) {
            if (mask.flags[p] && !same_bits(x.values[c][p], g.values[c][p])) return false;
        }
    }
    return true;
}

void check_problem_shapes(const SphericalSignal& g, const Mask& mask) {
    g.validate();
    mask.validate();
    if (mask.level != g.level) {
        throw ShapeError("mask level does not match signal level");
    }
    if (mask.observed_count() == 0) {
        throw InputDomainError("mask must observe at least one patch");
    }
}

}  // namespace

void SolverParams::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InputDomainError("lambda must be finite and > 0");
    }
    if (!(beta1 > 0.0) || !std::isfinite(beta1)) {
        throw InputDomainError("beta1 must be finite and > 0");
    }
    if (!(beta2 > 0.0) || !std::isfinite(beta2)) {
        throw InputDomainError("beta2 must be finite and > 0");
    }
    if (depth < 0) throw InputDomainError("depth must be >= 0");
    if (max_iters < 1) throw InputDomainError("max_iters must be >= 1");
    if (!(rel_tol >= 0.0) || !std::isfinite(rel_tol)) {
        throw InputDomainError("rel_tol must be finite and >= 0");
    }
}

SolverState init_state(const SphericalSignal& g, const Mask& mask,
                       const SolverParams& params) {
    params.validate();
    check_problem_shapes(g, mask);
    const int d = resolve_depth(params, g.level);
    const std::uint64_t n = g.sample_count();

    SolverState st;
    st.x = g;
    for (int c = 0; c < g.channels; ++c) {
        double sum = 0.0;
        std::uint64_t count = 0;
        for (std::uint64_t p = 0; p < n; ++p) {
            if (mask.flags[p]) {
                sum += g.values[c][p];
                ++count;
            }
        }
        const double mean = sum / static_cast<double>(count);
        for (std::uint64_t p = 0; p < n; ++p) {
            if (!mask.flags[p]) st.x.values[c][p] = mean;
        }
    }
    st.z = st.x;
    st.fx = decompose(st.x, d);
    st.y = st.fx;
    st.lambda1 = FrameletPyramid::zeros(g.level, d, g.channels);
    st.lambda2 = SphericalSignal::zeros(g.level, g.channels);
    return st;
}

void admm_step(SolverState& state, const SolverParams& params, const Mask& mask,
               const SphericalSignal& g, const DenoiserSpec& denoiser,
               const StepControls& controls) {
    params.validate();
    check_problem_shapes(g, mask);
    if (state.x.level != g.level || state.x.channels != g.channels) {
        throw ShapeError("solver state does not match the problem shape");
    }
    const int d = resolve_depth(params, g.level);
    if (state.fx.depth != d || state.y.depth != d || state.lambda1.depth != d) {
        throw ShapeError("solver state depth does not match params");
    }

    const double b1 = params.beta1;
    const double b2 = params.beta2;
    const int channels = g.channels;
    const std::uint64_t n = g.sample_count();
    const std::uint64_t m = state.fx.coeff_count();

    // (1) coefficient split: shrink the full pyramid, lowpass included.
    for (int c = 0; c < channels; ++c) {
        const auto& fx = state.fx.values[c];
        const auto& l1 = state.lambda1.values[c];
        auto& y = state.y.values[c];
        for (std::uint64_t i = 0; i < m; ++i) {
            y[i] = soft_shrink(fx[i] - l1[i] / b1, controls.y_tau);
        }
    }

    // (2) denoiser split.
    SphericalSignal z_in = state.x;
    for (int c = 0; c < channels; ++c) {
        for (std::uint64_t p = 0; p < n; ++p) {
            z_in.values[c][p] -= state.lambda2.values[c][p] / b2;
        }
    }
    state.z = denoise(denoiser, z_in, controls.sigma);

    // (3) primal update: exact assignment on observed entries, averaged
    // synthesis elsewhere.
    SphericalSignal rec_y = reconstruct(state.y);
    SphericalSignal rec_l1 = reconstruct(state.lambda1);
    double diff2 = 0.0;
    double old2 = 0.0;
    for (int c = 0; c < channels; ++c) {
        auto& x = state.x.values[c];
        for (std::uint64_t p = 0; p < n; ++p) {
            const double xo = x[p];
            double xn;
            if (mask.flags[p]) {
                xn = g.values[c][p];
            } else {
                xn = (b1 * rec_y.values[c][p] + b2 * state.z.values[c][p] +
                      rec_l1.values[c][p] + state.lambda2.values[c][p]) /
                     (b1 + b2);
            }
            x[p] = xn;
            const double dd = xn - xo;
            diff2 += dd * dd;
            old2 += xo * xo;
        }
    }
    for (int c = 0; c < channels; ++c) {
        for (std::uint64_t p = 0; p < n; ++p) {
            if (!std::isfinite(state.x.values[c][p])) {
                throw DivergenceError("non-finite iterate", state.iter + 1);
            }
        }
    }

    // (4), (5) multiplier ascent against the fresh transform of x.
    state.fx = decompose(state.x, d);
    for (int c = 0; c < channels; ++c) {
        auto& l1 = state.lambda1.values[c];
        const auto& y = state.y.values[c];
        const auto& fx = state.fx.values[c];
        for (std::uint64_t i = 0; i < m; ++i) l1[i] += y[i] - fx[i];
        auto& l2 = state.lambda2.values[c];
        const auto& z = state.z.values[c];
        const auto& x = state.x.values[c];
        for (std::uint64_t p = 0; p < n; ++p) l2[p] += z[p] - x[p];
    }

    state.iter += 1;
    state.last_rel_change = std::sqrt(diff2) / std::max(std::sqrt(old2), 1e-12);
    if (!std::isfinite(state.last_rel_change)) {
        throw DivergenceError("non-finite relative change", state.iter);
    }
}

void admm_step(SolverState& state, const SolverParams& params, const Mask& mask,
               const SphericalSignal& g, const DenoiserSpec& denoiser) {
    StepControls controls{1.0 / params.beta1, std::sqrt(params.lambda / params.beta2)};
    admm_step(state, params, mask, g, denoiser, controls);
}

int RunReport::total_iterations() const {
    int total = 0;
    for (const auto& chan : per_channel) total += static_cast<int>(chan.size());
    return total;
}

InpaintResult inpaint(const SphericalSignal& g, const Mask& mask,
                      const SolverParams& params, const DenoiserSpec& denoiser) {
    params.validate();
    check_problem_shapes(g, mask);
    const int d = resolve_depth(params, g.level);

    const auto t0 = std::chrono::steady_clock::now();
    InpaintResult out;
    out.restored = SphericalSignal::zeros(g.level, g.channels);
    out.report.params = params;
    out.report.depth_used = d;
    out.report.level = g.level;
    out.report.channels = g.channels;
    out.report.per_channel.resize(g.channels);

    for (int c = 0; c < g.channels; ++c) {
        SphericalSignal gc;
        gc.level = g.level;
        gc.channels = 1;
        gc.values = {g.values[c]};
        SolverState st = init_state(gc, mask, params);
        auto& stats = out.report.per_channel[c];
        for (int it = 0; it < params.max_iters; ++it) {
            admm_step(st, params, mask, gc, denoiser);
            IterationStats s;
            s.objective_l1 = pyramid_l1(st.fx);
            s.rel_change = st.last_rel_change;
            s.feasible = feasible_on_observed(st.x, gc, mask);
            stats.push_back(s);
            if (st.last_rel_change < params.rel_tol) break;
        }
        out.restored.values[c] = std::move(st.x.values[0]);
    }

    out.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace sphaar
