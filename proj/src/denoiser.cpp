#include "sphaar/denoiser.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "sphaar/errors.hpp"
#include "sphaar/framelet.hpp"
#include "sphaar/sph_io.hpp"

namespace sphaar {

namespace {

SphericalSignal shrink_details(const SphericalSignal& sig, int depth, double gain,
                               double sigma) {
    if (sig.level == 0) return sig;  // no detail bands exist
    int d = depth > 0 ? depth : default_depth(sig.level);
    FrameletPyramid pyr = decompose(sig, d);
    const double tau = gain * sigma;
    const std::uint64_t low = pyr.lowpass_length();
    const std::uint64_t total = pyr.coeff_count();
    for (auto& chan : pyr.values) {
        for (std::uint64_t i = low; i < total; ++i) {
            chan[i] = soft_shrink(chan[i], tau);
        }
    }
    return reconstruct(pyr);
}

void replace_all_occurrences(std::string& text, const std::string& key,
                             const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(key, pos)) != std::string::npos) {
        text.replace(pos, key.size(), value);
        pos += value.size();
    }
}

std::filesystem::path scratch_root(const DenoiserSpec& spec) {
    if (!spec.scratch_dir.empty()) return spec.scratch_dir;
    if (const char* env = std::getenv("SPHAAR_SCRATCH"); env && *env) return env;
    return std::filesystem::temp_directory_path();
}

std::string format_sigma(double sigma) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", sigma);
    return buf;
}

// Runs the command through the shell with stderr folded into stdout and
// returns (exit status, captured output). The subshell makes the redirect
// cover every statement of a compound template.
int run_command(const std::string& command, std::string& output) {
    std::string line = "( " + command + " ) 2>&1";
    FILE* pipe = popen(line.c_str(), "r");
    if (!pipe) throw ResourceError("failed to launch denoiser process");
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
        if (output.size() < 65536) output.append(buf, n);
    }
    int status = pclose(pipe);
    if (status == -1) throw ResourceError("failed to reap denoiser process");
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return 128;  // killed by signal; any nonzero value is treated as failure
}

SphericalSignal run_external(const DenoiserSpec& spec, const SphericalSignal& sig,
                             double sigma) {
    if (spec.command.find("{input}") == std::string::npos ||
        spec.command.find("{sigma}") == std::string::npos ||
        spec.command.find("{output}") == std::string::npos) {
        throw InputDomainError(
            "external denoiser command must contain {input}, {sigma} and {output}");
    }

    static std::atomic<std::uint64_t> counter{0};
    const std::uint64_t tag = counter.fetch_add(1);
    std::filesystem::path dir = scratch_root(spec);
    std::string stem = "sphaar-dn-" + std::to_string(::getpid()) + "-" + std::to_string(tag);
    std::filesystem::path in_path = dir / (stem + "-in.sph");
    std::filesystem::path out_path = dir / (stem + "-out.sph");

    save_signal(in_path.string(), sig);

    std::string command = spec.command;
    replace_all_occurrences(command, "{input}", in_path.string());
    replace_all_occurrences(command, "{sigma}", format_sigma(sigma));
    replace_all_occurrences(command, "{output}", out_path.string());

    std::string captured;
    int exit_code = run_command(command, captured);
    if (exit_code != 0) {
        // Scratch files are kept on failure so the command can be replayed.
        throw PluginError("external denoiser exited with status " +
                              std::to_string(exit_code) + ": " + command,
                          captured);
    }

    SphericalSignal result;
    try {
        result = load_signal(out_path.string());
    } catch (const std::exception& ex) {
        throw PluginError("external denoiser produced an unreadable output: " +
                              std::string(ex.what()),
                          captured);
    }
    if (result.level != sig.level || result.channels != sig.channels) {
        throw PluginError("external denoiser changed the signal shape (level " +
                              std::to_string(result.level) + ", channels " +
                              std::to_string(+result.channels) + ")",
                          captured);
    }

    std::error_code ignore;
    std::filesystem::remove(in_path, ignore);
    std::filesystem::remove(out_path, ignore);
    return result;
}

}  // namespace

DenoiserKind parse_denoiser_kind(const std::string& name) {
    if (name == "identity") return DenoiserKind::kIdentity;
    if (name == "framelet-shrink") return DenoiserKind::kFrameletShrink;
    if (name == "external") return DenoiserKind::kExternal;
    throw InputDomainError("unknown denoiser kind: " + name);
}

const char* denoiser_kind_name(DenoiserKind kind) {
    switch (kind) {
        case DenoiserKind::kIdentity: return "identity";
        case DenoiserKind::kFrameletShrink: return "framelet-shrink";
        case DenoiserKind::kExternal: return "external";
    }
    throw InputDomainError("unknown denoiser kind");
}

SphericalSignal denoise(const DenoiserSpec& spec, const SphericalSignal& sig, double sigma) {
    sig.validate();
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw InputDomainError("sigma must be finite and >= 0");
    }
    if (!(spec.gain > 0.0) || !std::isfinite(spec.gain)) {
        throw InputDomainError("denoiser gain must be finite and > 0");
    }
    if (sigma == 0.0) return sig;  // zero threshold shrinks nothing, for every kind
    switch (spec.kind) {
        case DenoiserKind::kIdentity: return sig;
        case DenoiserKind::kFrameletShrink:
            return shrink_details(sig, spec.depth, spec.gain, sigma);
        case DenoiserKind::kExternal: return run_external(spec, sig, sigma);
    }
    throw InputDomainError("unknown denoiser kind");
}

}  // namespace sphaar
