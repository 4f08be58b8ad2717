#include "sphaar/denoiser.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sphaar/errors.hpp"
#include "sphaar/framelet.hpp"
#include "sphaar/sph_io.hpp"
#include "test_signals.hpp"

using namespace sphaar;

namespace {

std::filesystem::path scratch_dir(const char* name) {
    std::filesystem::path dir = std::filesystem::path(SPHAAR_TEST_TMP) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

bool identical(const SphericalSignal& a, const SphericalSignal& b) {
    if (a.level != b.level || a.channels != b.channels) return false;
    for (int c = 0; c < a.channels; ++c) {
        if (a.values[c] != b.values[c]) return false;
    }
    return true;
}

std::size_t entries_in(const std::filesystem::path& dir) {
    std::size_t n = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++n;
    return n;
}

}  // namespace

TEST_CASE("denoiser kind names round trip") {
    for (auto kind : {DenoiserKind::kIdentity, DenoiserKind::kFrameletShrink,
                      DenoiserKind::kExternal}) {
        CHECK(parse_denoiser_kind(denoiser_kind_name(kind)) == kind);
    }
    CHECK_THROWS_AS(parse_denoiser_kind("fancy-cnn"), InputDomainError);
}

TEST_CASE("sigma zero is an exact no-op for every kind") {
    SphericalSignal sig = make_random_signal(2, 2, 11);
    DenoiserSpec spec;

    spec.kind = DenoiserKind::kIdentity;
    CHECK(identical(denoise(spec, sig, 0.0), sig));

    spec.kind = DenoiserKind::kFrameletShrink;
    spec.gain = 7.5;
    CHECK(identical(denoise(spec, sig, 0.0), sig));

    // The external command is never launched at sigma zero; a command that
    // would fail instantly proves it.
    spec.kind = DenoiserKind::kExternal;
    spec.command = ": {input} {sigma} {output}; false";
    CHECK(identical(denoise(spec, sig, 0.0), sig));
}

TEST_CASE("identity kind ignores sigma") {
    SphericalSignal sig = make_random_signal(1, 1, 3);
    DenoiserSpec spec;
    spec.kind = DenoiserKind::kIdentity;
    CHECK(identical(denoise(spec, sig, 123.456), sig));
}

TEST_CASE("input validation") {
    SphericalSignal sig = make_random_signal(1, 1, 5);
    DenoiserSpec spec;
    CHECK_THROWS_AS(denoise(spec, sig, -1.0), InputDomainError);
    CHECK_THROWS_AS(denoise(spec, sig, std::nan("")), InputDomainError);
    spec.gain = 0.0;
    CHECK_THROWS_AS(denoise(spec, sig, 1.0), InputDomainError);
    spec.gain = -2.0;
    CHECK_THROWS_AS(denoise(spec, sig, 1.0), InputDomainError);
}

TEST_CASE("framelet shrink keeps constants exactly") {
    SphericalSignal sig = SphericalSignal::zeros(3, 1);
    for (auto& v : sig.values[0]) v = 42.0;
    DenoiserSpec spec;
    spec.kind = DenoiserKind::kFrameletShrink;
    for (int depth : {0, 1, 2, 3}) {
        spec.depth = depth;
        SphericalSignal out = denoise(spec, sig, 10.0);
        CHECK(identical(out, sig));
    }
}

TEST_CASE("framelet shrink hand example on one sibling group") {
    // Children (4,0,0,0) under threshold gain*sigma = 1: the lowpass value 2
    // stays, the three nonzero differences 2 shrink to 1, and synthesis gives
    // (2.5, 0.5, 0.5, 0.5). All arithmetic is dyadic, so the match is exact.
    SphericalSignal sig = SphericalSignal::zeros(1, 1);
    sig.values[0][0] = 4.0;
    DenoiserSpec spec;
    spec.kind = DenoiserKind::kFrameletShrink;
    spec.depth = 1;

    for (auto [gain, sigma] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {0.5, 2.0}}) {
        spec.gain = gain;
        SphericalSignal out = denoise(spec, sig, sigma);
        CHECK(out.values[0][0] == 2.5);
        CHECK(out.values[0][1] == 0.5);
        CHECK(out.values[0][2] == 0.5);
        CHECK(out.values[0][3] == 0.5);
        for (std::uint64_t p = 4; p < out.sample_count(); ++p) {
            CHECK(out.values[0][p] == 0.0);
        }
    }
}

TEST_CASE("framelet shrink saturates at per-group averages") {
    // Once the threshold tops every detail magnitude the output is the
    // piecewise-constant signal of depth-d group means.
    SphericalSignal sig = make_random_signal(2, 1, 29);
    DenoiserSpec spec;
    spec.kind = DenoiserKind::kFrameletShrink;
    spec.depth = 2;
    SphericalSignal out = denoise(spec, sig, 1e9);

    const std::uint64_t groups = patch_count(0);
    const std::uint64_t per = sig.sample_count() / groups;
    for (std::uint64_t gidx = 0; gidx < groups; ++gidx) {
        double mean = 0.0;
        for (std::uint64_t k = 0; k < per; ++k) mean += sig.values[0][gidx * per + k];
        mean /= static_cast<double>(per);
        for (std::uint64_t k = 0; k < per; ++k) {
            CHECK(out.values[0][gidx * per + k] == doctest::Approx(mean).epsilon(1e-12));
        }
    }
}

TEST_CASE("framelet shrink preserves the total sum") {
    // Group sums depend only on the untouched lowpass band.
    SphericalSignal sig = make_random_signal(3, 1, 31);
    DenoiserSpec spec;
    spec.kind = DenoiserKind::kFrameletShrink;
    for (double sigma : {0.3, 2.0, 50.0}) {
        SphericalSignal out = denoise(spec, sig, sigma);
        double sum_in = 0.0, sum_out = 0.0;
        for (std::uint64_t p = 0; p < sig.sample_count(); ++p) {
            sum_in += sig.values[0][p];
            sum_out += out.values[0][p];
        }
        CHECK(sum_out == doctest::Approx(sum_in).epsilon(1e-12));
    }
}

TEST_CASE("external denoiser copy command round trips") {
    auto dir = scratch_dir("ext-copy");
    SphericalSignal sig = make_random_signal(2, 3, 17);
    DenoiserSpec spec;
    spec.kind = DenoiserKind::kExternal;
    spec.command = "SIGMA={sigma} cp {input} {output}";
    spec.scratch_dir = dir.string();
    SphericalSignal out = denoise(spec, sig, 1.5);
    CHECK(identical(out, sig));
    // Scratch files are removed after a successful run.
    CHECK(entries_in(dir) == 0);
}

TEST_CASE("external denoiser failure reports diagnostics and keeps scratch") {
    auto dir = scratch_dir("ext-fail");
    SphericalSignal sig = make_random_signal(1, 1, 9);
    DenoiserSpec spec;
    spec.kind = DenoiserKind::kExternal;
    spec.scratch_dir = dir.string();
    spec.command = ": {input} {sigma} {output}; echo oops-diagnostic >&2; exit 3";
    try {
        denoise(spec, sig, 1.0);
        FAIL("expected PluginError");
    } catch (const PluginError& err) {
        CHECK(err.diagnostics().find("oops-diagnostic") != std::string::npos);
        CHECK(std::string(err.what()).find("status 3") != std::string::npos);
    }
    CHECK(entries_in(dir) >= 1);  // input kept for replaying the command
}

TEST_CASE("external denoiser rejects malformed output") {
    auto dir = scratch_dir("ext-garbage");
    SphericalSignal sig = make_random_signal(1, 1, 13);
    DenoiserSpec spec;
    spec.kind = DenoiserKind::kExternal;
    spec.scratch_dir = dir.string();
    spec.command = ": {input} {sigma}; printf garbage > {output}";
    CHECK_THROWS_AS(denoise(spec, sig, 1.0), PluginError);
}

TEST_CASE("external denoiser rejects shape changes") {
    auto dir = scratch_dir("ext-shape");
    SphericalSignal other = make_random_signal(2, 1, 19);
    auto other_path = dir / "other.sph";
    save_signal(other_path.string(), other);

    SphericalSignal sig = make_random_signal(1, 1, 23);
    DenoiserSpec spec;
    spec.kind = DenoiserKind::kExternal;
    spec.scratch_dir = dir.string();
    spec.command = ": {input} {sigma}; cp " + other_path.string() + " {output}";
    CHECK_THROWS_AS(denoise(spec, sig, 1.0), PluginError);
}

TEST_CASE("external denoiser requires all placeholders") {
    SphericalSignal sig = make_random_signal(1, 1, 27);
    DenoiserSpec spec;
    spec.kind = DenoiserKind::kExternal;
    spec.command = "cp {input} {output}";  // no {sigma}
    CHECK_THROWS_AS(denoise(spec, sig, 1.0), InputDomainError);
}

TEST_CASE("external denoiser receives the sigma value") {
    // The command writes its sigma argument next to the output; a trivial
    // pass-through makes the run succeed.
    auto dir = scratch_dir("ext-sigma");
    auto sigma_path = dir / "sigma.txt";
    SphericalSignal sig = make_random_signal(1, 1, 33);
    DenoiserSpec spec;
    spec.kind = DenoiserKind::kExternal;
    spec.scratch_dir = dir.string();
    spec.command = "echo {sigma} > " + sigma_path.string() + " && cp {input} {output}";
    denoise(spec, sig, 0.625);
    std::ifstream in(sigma_path);
    std::string text;
    std::getline(in, text);
    CHECK(text == "0.625");
}
