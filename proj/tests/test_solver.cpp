#include "sphaar/solver.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "sphaar/errors.hpp"
#include "sphaar/metrics.hpp"
#include "test_signals.hpp"

using namespace sphaar;

namespace {

bool bits_equal(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool close(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

// Independent straight-line transcription of the update equations on a
// J=1, d=1 instance: 24 samples, 6 sibling groups, 42 pyramid entries laid
// out as [lowpass | band1 | ... | band6].
constexpr double kP[7][4] = {
    {0.5, 0.5, 0.5, 0.5},   {0.5, -0.5, 0.0, 0.0}, {0.5, 0.0, -0.5, 0.0},
    {0.5, 0.0, 0.0, -0.5},  {0.0, 0.5, -0.5, 0.0}, {0.0, 0.5, 0.0, -0.5},
    {0.0, 0.0, 0.5, -0.5},
};

std::vector<double> ref_analysis(const std::vector<double>& x) {
    std::vector<double> out(42, 0.0);
    for (int p = 0; p < 6; ++p) {
        for (int r = 0; r < 7; ++r) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k) acc += kP[r][k] * x[4 * p + k];
            out[r * 6 + p] = acc;
        }
    }
    return out;
}

std::vector<double> ref_synthesis(const std::vector<double>& w) {
    std::vector<double> x(24, 0.0);
    for (int p = 0; p < 6; ++p) {
        for (int k = 0; k < 4; ++k) {
            double acc = 0.0;
            for (int r = 0; r < 7; ++r) acc += kP[r][k] * w[r * 6 + p];
            x[4 * p + k] = acc;
        }
    }
    return x;
}

double ref_shrink(double t, double tau) {
    const double m = std::fabs(t) - tau;
    if (m <= 0.0) return 0.0;
    return t < 0.0 ? -m : m;
}

struct RefState {
    std::vector<double> x, z, l2;      // sample domain, 24
    std::vector<double> y, fx, l1;     // pyramid domain, 42
};

RefState ref_init(const std::vector<double>& g, const std::vector<std::uint8_t>& obs) {
    RefState s;
    double sum = 0.0;
    int count = 0;
    for (int p = 0; p < 24; ++p) {
        if (obs[p]) {
            sum += g[p];
            ++count;
        }
    }
    const double mean = sum / count;
    s.x.resize(24);
    for (int p = 0; p < 24; ++p) s.x[p] = obs[p] ? g[p] : mean;
    s.z = s.x;
    s.fx = ref_analysis(s.x);
    s.y = s.fx;
    s.l1.assign(42, 0.0);
    s.l2.assign(24, 0.0);
    return s;
}

void ref_step(RefState& s, const std::vector<double>& g, const std::vector<std::uint8_t>& obs,
              double b1, double b2, double y_tau) {
    std::vector<double> y(42), z(24), xn(24);
    for (int i = 0; i < 42; ++i) y[i] = ref_shrink(s.fx[i] - s.l1[i] / b1, y_tau);
    for (int p = 0; p < 24; ++p) z[p] = s.x[p] - s.l2[p] / b2;  // identity denoiser
    const std::vector<double> rec_y = ref_synthesis(y);
    const std::vector<double> rec_l1 = ref_synthesis(s.l1);
    for (int p = 0; p < 24; ++p) {
        xn[p] = obs[p] ? g[p]
                       : (b1 * rec_y[p] + b2 * z[p] + rec_l1[p] + s.l2[p]) / (b1 + b2);
    }
    const std::vector<double> fxn = ref_analysis(xn);
    for (int i = 0; i < 42; ++i) s.l1[i] += y[i] - fxn[i];
    for (int p = 0; p < 24; ++p) s.l2[p] += z[p] - xn[p];
    s.x = xn;
    s.z = z;
    s.y = y;
    s.fx = fxn;
}

SphericalSignal to_signal(const std::vector<double>& x) {
    SphericalSignal sig = SphericalSignal::zeros(1, 1);
    sig.values[0] = x;
    return sig;
}

Mask to_mask(const std::vector<std::uint8_t>& obs) {
    Mask m;
    m.level = 1;
    m.flags = obs;
    return m;
}

// Fixed 24-sample instance used by several cases.
std::vector<double> hand_g() {
    SplitMix64 rng(7);
    std::vector<double> g(24);
    for (auto& v : g) v = rng.next_double() * 255.0;
    return g;
}

std::vector<std::uint8_t> hand_obs() {
    std::vector<std::uint8_t> obs(24, 0);
    for (int p = 0; p < 24; ++p) obs[p] = (p % 3) != 0;
    return obs;
}

double pyramid_l1(const FrameletPyramid& pyr) {
    double sum = 0.0;
    for (const auto& chan : pyr.values) {
        for (double v : chan) sum += std::fabs(v);
    }
    return sum;
}

// Brute-force objective for a J=1, d=1 instance: parameterize the unobserved
// entries, express the pyramid as A w + c with test-local analysis, and hand
// the l1 problem to the smoothed-Newton oracle.
double oracle_objective(const std::vector<double>& g, const std::vector<std::uint8_t>& obs) {
    std::vector<int> free_idx;
    for (int p = 0; p < 24; ++p) {
        if (!obs[p]) free_idx.push_back(p);
    }
    const int nw = static_cast<int>(free_idx.size());
    std::vector<double> masked(24, 0.0);
    for (int p = 0; p < 24; ++p) masked[p] = obs[p] ? g[p] : 0.0;
    const std::vector<double> c = ref_analysis(masked);
    std::vector<double> a(42 * nw, 0.0);
    for (int j = 0; j < nw; ++j) {
        std::vector<double> unit(24, 0.0);
        unit[free_idx[j]] = 1.0;
        const std::vector<double> col = ref_analysis(unit);
        for (int i = 0; i < 42; ++i) a[i * nw + j] = col[i];
    }
    const std::vector<double> w = oracle::l1_minimize(a, 42, nw, c);
    return oracle::l1_objective(a, 42, nw, c, w);
}

}  // namespace

TEST_CASE("soft shrink basics") {
    CHECK(soft_shrink(3.0, 1.0) == 2.0);
    CHECK(soft_shrink(-0.5, 1.0) == 0.0);
    CHECK(soft_shrink(-3.0, 1.0) == -2.0);
    for (double t : {-7.25, -0.0, 0.0, 1e-9, 42.0}) {
        CHECK(soft_shrink(t, 0.0) == t);
    }
    CHECK(soft_shrink(0.0, 5.0) == 0.0);
}

TEST_CASE("init state fills unobserved entries with the observed mean") {
    const auto g = hand_g();
    const auto obs = hand_obs();
    SolverParams params;
    params.depth = 1;
    SolverState st = init_state(to_signal(g), to_mask(obs), params);

    double sum = 0.0;
    int count = 0;
    for (int p = 0; p < 24; ++p) {
        if (obs[p]) {
            sum += g[p];
            ++count;
        }
    }
    const double mean = sum / count;
    for (int p = 0; p < 24; ++p) {
        if (obs[p]) {
            CHECK(bits_equal(st.x.values[0][p], g[p]));
        } else {
            CHECK(st.x.values[0][p] == mean);
        }
        CHECK(bits_equal(st.z.values[0][p], st.x.values[0][p]));
        CHECK(st.lambda2.values[0][p] == 0.0);
    }
    const auto fx_ref = ref_analysis(st.x.values[0]);
    for (int i = 0; i < 42; ++i) {
        CHECK(close(st.fx.values[0][i], fx_ref[i], 1e-12));
        CHECK(bits_equal(st.y.values[0][i], st.fx.values[0][i]));
        CHECK(st.lambda1.values[0][i] == 0.0);
    }
    CHECK(st.iter == 0);
}

TEST_CASE("admm step matches a straight-line transcription") {
    const auto g = hand_g();
    const auto obs = hand_obs();
    SolverParams params;
    params.lambda = 1.0;
    params.beta1 = 1.0;
    params.beta2 = 1.0;
    params.depth = 1;

    const SphericalSignal gs = to_signal(g);
    const Mask mask = to_mask(obs);
    DenoiserSpec identity;

    SolverState st = init_state(gs, mask, params);
    RefState ref = ref_init(g, obs);

    for (int step = 1; step <= 3; ++step) {
        CAPTURE(step);
        admm_step(st, params, mask, gs, identity);
        ref_step(ref, g, obs, params.beta1, params.beta2, 1.0 / params.beta1);
        for (int p = 0; p < 24; ++p) {
            CHECK(close(st.x.values[0][p], ref.x[p], 1e-12));
            CHECK(close(st.z.values[0][p], ref.z[p], 1e-12));
            CHECK(close(st.lambda2.values[0][p], ref.l2[p], 1e-12));
        }
        for (int i = 0; i < 42; ++i) {
            CHECK(close(st.y.values[0][i], ref.y[i], 1e-12));
            CHECK(close(st.fx.values[0][i], ref.fx[i], 1e-12));
            CHECK(close(st.lambda1.values[0][i], ref.l1[i], 1e-12));
        }
        CHECK(st.iter == step);
    }
}

TEST_CASE("fully observed problems return g after one iteration") {
    SphericalSignal g = make_random_signal(2, 2, 21);
    Mask mask = Mask::all_observed(2);
    SolverParams params;
    DenoiserSpec shrink;
    shrink.kind = DenoiserKind::kFrameletShrink;

    InpaintResult res = inpaint(g, mask, params, shrink);
    for (int c = 0; c < g.channels; ++c) {
        CHECK(res.report.per_channel[c].size() == 1);
        for (std::uint64_t p = 0; p < g.sample_count(); ++p) {
            CHECK(bits_equal(res.restored.values[c][p], g.values[c][p]));
        }
    }
    CHECK(res.report.total_iterations() == 2);
}

TEST_CASE("observed entries stay bitwise equal through every step") {
    SphericalSignal g = make_random_signal(3, 2, 5);
    Mask mask = gen_mask(3, {0.6, 99});
    SolverParams params;
    DenoiserSpec shrink;
    shrink.kind = DenoiserKind::kFrameletShrink;

    SolverState st = init_state(g, mask, params);
    for (int step = 0; step < 10; ++step) {
        admm_step(st, params, mask, g, shrink);
        for (int c = 0; c < g.channels; ++c) {
            for (std::uint64_t p = 0; p < g.sample_count(); ++p) {
                if (mask.flags[p]) {
                    CHECK(bits_equal(st.x.values[c][p], g.values[c][p]));
                }
            }
        }
    }

    InpaintResult res = inpaint(g, mask, params, shrink);
    for (const auto& chan : res.report.per_channel) {
        for (const auto& s : chan) CHECK(s.feasible);
    }
}

TEST_CASE("vanishing threshold on a fully observed instance fixes g") {
    SphericalSignal g = make_random_signal(2, 1, 77);
    Mask mask = Mask::all_observed(2);
    SolverParams params;
    params.beta1 = 1e12;
    params.depth = 2;
    DenoiserSpec identity;

    SolverState st = init_state(g, mask, params);
    const FrameletPyramid fg = decompose(g, 2);
    for (int step = 0; step < 5; ++step) {
        admm_step(st, params, mask, g, identity, StepControls{1e-15, 0.0});
        for (std::uint64_t p = 0; p < g.sample_count(); ++p) {
            CHECK(bits_equal(st.x.values[0][p], g.values[0][p]));
            CHECK(st.lambda2.values[0][p] == 0.0);
            CHECK(bits_equal(st.z.values[0][p], g.values[0][p]));
        }
        for (std::uint64_t i = 0; i < fg.coeff_count(); ++i) {
            CHECK(std::fabs(st.y.values[0][i] - fg.values[0][i]) <= 1e-12);
            CHECK(std::fabs(st.lambda1.values[0][i]) <= 1e-11);
        }
    }
}

TEST_CASE("scaling the data and thresholds scales the iterates") {
    const double alpha = 2.0;
    SphericalSignal g = make_random_signal(2, 1, 55);
    SphericalSignal g2 = g;
    for (auto& v : g2.values[0]) v *= alpha;
    Mask mask = gen_mask(2, {0.5, 4});
    SolverParams params;
    params.depth = 2;
    DenoiserSpec shrink;
    shrink.kind = DenoiserKind::kFrameletShrink;

    const StepControls base{1.0 / params.beta1, std::sqrt(params.lambda / params.beta2)};
    const StepControls scaled{alpha * base.y_tau, alpha * base.sigma};

    SolverState st1 = init_state(g, mask, params);
    SolverState st2 = init_state(g2, mask, params);
    for (int step = 0; step < 5; ++step) {
        admm_step(st1, params, mask, g, shrink, base);
        admm_step(st2, params, mask, g2, shrink, scaled);
    }
    for (std::uint64_t p = 0; p < g.sample_count(); ++p) {
        CHECK(close(st2.x.values[0][p], alpha * st1.x.values[0][p], 1e-10));
        CHECK(close(st2.z.values[0][p], alpha * st1.z.values[0][p], 1e-10));
        CHECK(close(st2.lambda2.values[0][p], alpha * st1.lambda2.values[0][p], 1e-10));
    }
    for (std::uint64_t i = 0; i < st1.fx.coeff_count(); ++i) {
        CHECK(close(st2.y.values[0][i], alpha * st1.y.values[0][i], 1e-10));
        CHECK(close(st2.lambda1.values[0][i], alpha * st1.lambda1.values[0][i], 1e-10));
    }
}

TEST_CASE("converged objective matches the l1 oracle") {
    SolverParams params;
    params.depth = 1;
    params.max_iters = 6000;
    params.rel_tol = 0.0;
    DenoiserSpec identity;

    for (std::uint64_t seed : {101ull, 202ull, 303ull}) {
        CAPTURE(seed);
        SplitMix64 rng(seed);
        std::vector<double> g(24);
        for (auto& v : g) v = rng.next_double() * 255.0;
        Mask mask = gen_mask(1, {0.5, seed + 7});
        REQUIRE(mask.observed_count() >= 1);
        REQUIRE(mask.observed_count() < 24);

        InpaintResult res = inpaint(to_signal(g), mask, params, identity);
        const double admm_obj = res.report.per_channel[0].back().objective_l1;
        std::vector<std::uint8_t> obs(mask.flags.begin(), mask.flags.end());
        const double oracle_obj = oracle_objective(g, obs);
        CHECK(std::fabs(admm_obj - oracle_obj) <= 1e-3 * std::max(oracle_obj, 1e-9));
    }
}

TEST_CASE("constant data is restored to the constant when groups keep support") {
    // Observing two children per sibling group makes the constant the unique
    // minimizer; the solver must land on it.
    const double c = 97.0;
    SphericalSignal g = SphericalSignal::zeros(1, 1);
    for (auto& v : g.values[0]) v = c;
    Mask mask;
    mask.level = 1;
    mask.flags.assign(24, 0);
    for (int p = 0; p < 6; ++p) {
        mask.flags[4 * p] = 1;
        mask.flags[4 * p + 1] = 1;
    }
    SolverParams params;
    params.depth = 1;
    params.max_iters = 4000;
    params.rel_tol = 0.0;
    DenoiserSpec identity;

    InpaintResult res = inpaint(g, mask, params, identity);
    for (std::uint64_t p = 0; p < 24; ++p) {
        CHECK(std::fabs(res.restored.values[0][p] - c) <= 1e-6);
    }

    // A mask that blanks entire sibling groups admits strictly cheaper
    // completions than the constant, so the constant is not the target there;
    // the oracle agreement is the invariant that survives.
    Mask lone;
    lone.level = 1;
    lone.flags.assign(24, 0);
    lone.flags[0] = 1;
    std::vector<std::uint8_t> lone_obs(lone.flags.begin(), lone.flags.end());
    const double obj_constant = 12.0 * c;  // every group flat at c
    const double obj_best = oracle_objective(g.values[0], lone_obs);
    CHECK(obj_best < 0.9 * obj_constant);

    InpaintResult res2 = inpaint(g, lone, params, identity);
    const double admm_obj = res2.report.per_channel[0].back().objective_l1;
    CHECK(std::fabs(admm_obj - obj_best) <= 1e-3 * std::max(obj_best, 1e-9));
}

TEST_CASE("restoration beats mean fill on the smooth signal") {
    Partition part = Partition::build(4);
    SphericalSignal truth = make_harmonics(part);
    SolverParams params;
    DenoiserSpec shrink;
    shrink.kind = DenoiserKind::kFrameletShrink;

    double gain_easy = 0.0;
    double gain_hard = 0.0;
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        for (double ratio : {0.5, 0.95}) {
            Mask mask = gen_mask(4, {ratio, seed});
            SphericalSignal degraded = truth;
            double sum = 0.0;
            std::uint64_t cnt = 0;
            for (std::uint64_t p = 0; p < truth.sample_count(); ++p) {
                if (mask.flags[p]) {
                    sum += truth.values[0][p];
                    ++cnt;
                }
            }
            for (std::uint64_t p = 0; p < truth.sample_count(); ++p) {
                if (!mask.flags[p]) degraded.values[0][p] = sum / cnt;
            }
            InpaintResult res = inpaint(truth, mask, params, shrink);
            const double gain = psnr(res.restored, truth) - psnr(degraded, truth);
            CHECK(psnr(res.restored, truth) > psnr(degraded, truth));
            (ratio == 0.5 ? gain_easy : gain_hard) += gain;
        }
    }
    CHECK(gain_easy / 3.0 >= gain_hard / 3.0);
}

TEST_CASE("solver input validation") {
    SphericalSignal g = make_random_signal(1, 1, 2);
    Mask mask = Mask::all_observed(1);
    DenoiserSpec identity;

    SolverParams bad;
    bad.lambda = 0.0;
    CHECK_THROWS_AS(inpaint(g, mask, bad, identity), InputDomainError);
    bad = SolverParams{};
    bad.beta1 = -1.0;
    CHECK_THROWS_AS(inpaint(g, mask, bad, identity), InputDomainError);
    bad = SolverParams{};
    bad.max_iters = 0;
    CHECK_THROWS_AS(inpaint(g, mask, bad, identity), InputDomainError);
    bad = SolverParams{};
    bad.rel_tol = -0.5;
    CHECK_THROWS_AS(inpaint(g, mask, bad, identity), InputDomainError);
    bad = SolverParams{};
    bad.depth = 5;  // exceeds the level
    CHECK_THROWS_AS(inpaint(g, mask, bad, identity), InputDomainError);

    Mask wrong = Mask::all_observed(2);
    CHECK_THROWS_AS(inpaint(g, wrong, SolverParams{}, identity), ShapeError);
    Mask empty;
    empty.level = 1;
    empty.flags.assign(24, 0);
    CHECK_THROWS_AS(inpaint(g, empty, SolverParams{}, identity), InputDomainError);
}

TEST_CASE("poisoned state aborts with a divergence error") {
    SphericalSignal g = make_random_signal(1, 1, 44);
    Mask mask;
    mask.level = 1;
    mask.flags.assign(24, 1);
    for (int p = 0; p < 4; ++p) mask.flags[p] = 0;  // face 0 group unobserved
    SolverParams params;
    params.depth = 1;
    DenoiserSpec identity;

    SolverState st = init_state(g, mask, params);
    st.fx.values[0][0] = std::nan("");
    try {
        admm_step(st, params, mask, g, identity);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& err) {
        CHECK(err.iteration() == 1);
    }
}

TEST_CASE("rel_tol and max_iters bound the iteration count") {
    SphericalSignal g = make_random_signal(2, 1, 66);
    Mask mask = gen_mask(2, {0.5, 12});
    DenoiserSpec identity;

    SolverParams one;
    one.rel_tol = 1e30;
    InpaintResult res1 = inpaint(g, mask, one, identity);
    CHECK(res1.report.per_channel[0].size() == 1);

    SolverParams capped;
    capped.max_iters = 7;
    capped.rel_tol = 0.0;
    InpaintResult res7 = inpaint(g, mask, capped, identity);
    CHECK(res7.report.per_channel[0].size() == 7);
    CHECK(res7.report.wall_seconds >= 0.0);
    CHECK(res7.report.depth_used == 2);

    // The reported objective is the transform l1 norm of the final iterate.
    const FrameletPyramid fx = decompose(res7.restored, 2);
    CHECK(close(res7.report.per_channel[0].back().objective_l1, pyramid_l1(fx), 1e-12));
}
