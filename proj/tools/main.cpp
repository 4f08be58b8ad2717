// Command-line driver. Every subcommand prints a JSON report to stdout (and
// optionally to --report); failures exit nonzero with a JSON error object on
// stderr. All file outputs are written atomically, all randomness is seeded,
// and reports echo enough (parameters, seeds, hashes) to re-run exactly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sphaar/bench.hpp"
#include "sphaar/denoiser.hpp"
#include "sphaar/errors.hpp"
#include "sphaar/framelet.hpp"
#include "sphaar/mask.hpp"
#include "sphaar/metrics.hpp"
#include "sphaar/partition.hpp"
#include "sphaar/signal.hpp"
#include "sphaar/solver.hpp"
#include "sphaar/sph_io.hpp"

using json = nlohmann::ordered_json;
using namespace sphaar;

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr int kSchemaVersion = 1;

json base_report(const std::string& subcommand) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["tool"] = "sphaar";
    doc["tool_version"] = kToolVersion;
    doc["subcommand"] = subcommand;
    return doc;
}

json file_entry(const std::string& path) {
    json e;
    e["path"] = path;
    e["fnv1a64"] = file_hash_hex(path);
    return e;
}

// +/-infinity is not representable in JSON; the report uses the string "inf".
json metric_value(double v) {
    if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
    return json(v);
}

void write_json_atomic(const std::string& path, const json& doc) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << doc.dump(2) << "\n";
        if (!out) {
            throw IoError("cannot write report: " + path);
        }
    }
    std::filesystem::rename(tmp, path);
}

void emit_report(const std::string& report_path, const json& doc) {
    std::cout << doc.dump(2) << std::endl;
    if (!report_path.empty()) write_json_atomic(report_path, doc);
}

// Nine standard viridis anchors, linearly interpolated.
constexpr double kViridis[9][3] = {
    {68, 1, 84},   {71, 44, 122}, {59, 81, 139},  {44, 113, 142}, {33, 144, 141},
    {39, 173, 129}, {92, 200, 99}, {170, 220, 50}, {253, 231, 37},
};

EquirectImage apply_viridis(const EquirectImage& gray) {
    EquirectImage rgb;
    rgb.width = gray.width;
    rgb.height = gray.height;
    rgb.channels = 3;
    rgb.pixels.resize(static_cast<std::size_t>(gray.width) * gray.height * 3);
    for (int r = 0; r < gray.height; ++r) {
        for (int c = 0; c < gray.width; ++c) {
            const double t = std::clamp(gray.at(r, c, 0) / 255.0, 0.0, 1.0) * 8.0;
            const int i = std::min(static_cast<int>(t), 7);
            const double f = t - i;
            for (int ch = 0; ch < 3; ++ch) {
                rgb.at(r, c, ch) = kViridis[i][ch] + f * (kViridis[i + 1][ch] - kViridis[i][ch]);
            }
        }
    }
    return rgb;
}

void write_render(const SphericalSignal& sig, const Partition& part, int width,
                  int height, const std::string& colormap, const std::string& path) {
    EquirectImage img = to_equirectangular(sig, part, width, height);
    if (sig.channels == 3) {
        save_png(path, img);
        return;
    }
    if (sig.channels != 1) {
        throw InputDomainError("rendering supports 1- or 3-channel signals");
    }
    if (colormap == "gray") {
        save_png(path, img);
    } else if (colormap == "viridis") {
        save_png(path, apply_viridis(img));
    } else {
        throw InputDomainError("unknown colormap: " + colormap);
    }
}

json solver_params_json(const SolverParams& p, int depth_used) {
    json doc;
    doc["lambda"] = p.lambda;
    doc["beta1"] = p.beta1;
    doc["beta2"] = p.beta2;
    doc["depth"] = depth_used;
    doc["max_iters"] = p.max_iters;
    doc["rel_tol"] = p.rel_tol;
    return doc;
}

json denoiser_json(const DenoiserSpec& spec) {
    json doc;
    doc["kind"] = denoiser_kind_name(spec.kind);
    doc["gain"] = spec.gain;
    doc["depth"] = spec.depth;
    if (spec.kind == DenoiserKind::kExternal) doc["command"] = spec.command;
    return doc;
}

json run_report_json(const RunReport& r) {
    json doc;
    doc["params"] = solver_params_json(r.params, r.depth_used);
    doc["level"] = r.level;
    doc["channels"] = r.channels;
    json per = json::array();
    for (const auto& chan : r.per_channel) {
        json entry;
        entry["iterations"] = chan.size();
        bool all_feasible = true;
        json trace = json::array();
        for (const auto& s : chan) {
            all_feasible = all_feasible && s.feasible;
            json row;
            row["objective_l1"] = s.objective_l1;
            row["rel_change"] = s.rel_change;
            row["feasible"] = s.feasible;
            trace.push_back(row);
        }
        entry["all_feasible"] = all_feasible;
        if (!chan.empty()) {
            entry["final_objective_l1"] = chan.back().objective_l1;
            entry["final_rel_change"] = chan.back().rel_change;
        }
        entry["trace"] = trace;
        per.push_back(entry);
    }
    doc["per_channel"] = per;
    doc["wall_seconds"] = r.wall_seconds;
    return doc;
}

// ---------------------------------------------------------------------------
// subcommand option bags + runners

struct PartitionInfoOpts {
    int level = 3;
    bool full = false;
    std::string report;
};

void run_partition_info(const PartitionInfoOpts& o) {
    Partition part = Partition::build(o.level);
    json doc = base_report("partition-info");
    json meta = json::parse(partition_metadata_json(part));
    doc["level"] = meta["level"];
    doc["patch_count"] = part.leaf_count();
    doc["leaf_area_steradians"] = 4.0 * 3.14159265358979323846 / static_cast<double>(part.leaf_count());
    doc["face_order"] = meta["face_order"];
    if (o.full) {
        doc["splits"] = meta["splits"];
    } else if (o.level >= 1) {
        doc["face_splits"] = meta["splits"][0];
    }
    emit_report(o.report, doc);
}

struct IngestOpts {
    std::string input, output, report;
    int level = 3;
    std::string mode = "equirect";
    int face = 0;
};

void run_ingest(const IngestOpts& o) {
    EquirectImage img = load_png(o.input);
    Partition part = Partition::build(o.level);
    SphericalSignal sig;
    if (o.mode == "equirect") {
        sig = from_equirectangular(img, part);
    } else if (o.mode == "face") {
        sig = single_face_ingest(img, o.face, part);
    } else {
        throw InputDomainError("ingest mode must be 'equirect' or 'face'");
    }
    save_signal(o.output, sig);

    json doc = base_report("ingest");
    doc["input"] = file_entry(o.input);
    doc["image"] = {{"width", img.width}, {"height", img.height}, {"channels", img.channels}};
    doc["mode"] = o.mode;
    if (o.mode == "face") doc["face"] = o.face;
    doc["level"] = o.level;
    doc["sample_count"] = sig.sample_count();
    doc["channels"] = sig.channels;
    doc["output"] = file_entry(o.output);
    emit_report(o.report, doc);
}

struct RenderOpts {
    std::string input, output, report;
    int width = 1024;
    int height = 512;
    std::string colormap = "viridis";
};

void run_render(const RenderOpts& o) {
    SphericalSignal sig = load_signal(o.input);
    Partition part = Partition::build(sig.level);
    write_render(sig, part, o.width, o.height, o.colormap, o.output);

    json doc = base_report("render");
    doc["input"] = file_entry(o.input);
    doc["level"] = sig.level;
    doc["channels"] = sig.channels;
    doc["width"] = o.width;
    doc["height"] = o.height;
    doc["colormap"] = sig.channels == 1 ? o.colormap : "none";
    doc["output"] = file_entry(o.output);
    emit_report(o.report, doc);
}

struct TransformOpts {
    std::string input, output, report, check;
    int depth = 0;
    bool inverse = false;
};

void run_transform(const TransformOpts& o) {
    json doc = base_report("transform");
    doc["input"] = file_entry(o.input);
    doc["inverse"] = o.inverse;
    if (!o.inverse) {
        if (!o.check.empty()) {
            throw InputDomainError("--check applies to --inverse only");
        }
        SphericalSignal sig = load_signal(o.input);
        const int depth = o.depth > 0 ? o.depth : default_depth(sig.level);
        FrameletPyramid pyr = decompose(sig, depth);
        save_pyramid(o.output, pyr);
        doc["level"] = sig.level;
        doc["depth"] = depth;
        doc["coeff_count"] = pyr.coeff_count();
        doc["redundancy"] = static_cast<double>(pyr.coeff_count()) /
                            static_cast<double>(sig.sample_count());
    } else {
        FrameletPyramid pyr = load_pyramid(o.input);
        SphericalSignal sig = reconstruct(pyr);
        save_signal(o.output, sig);
        doc["level"] = sig.level;
        doc["depth"] = pyr.depth;
        if (!o.check.empty()) {
            SphericalSignal ref = load_signal(o.check);
            if (ref.level != sig.level || ref.channels != sig.channels) {
                throw ShapeError("--check signal shape does not match the reconstruction");
            }
            double max_abs = 0.0;
            double scale = 1.0;
            for (int c = 0; c < sig.channels; ++c) {
                for (std::uint64_t p = 0; p < sig.sample_count(); ++p) {
                    max_abs = std::max(max_abs, std::fabs(sig.values[c][p] - ref.values[c][p]));
                    scale = std::max(scale, std::fabs(ref.values[c][p]));
                }
            }
            json check;
            check["reference"] = file_entry(o.check);
            check["max_abs_error"] = max_abs;
            check["roundtrip_ok"] = max_abs <= 1e-10 * scale;
            doc["check"] = check;
        }
    }
    doc["output"] = file_entry(o.output);
    emit_report(o.report, doc);
}

struct DenoiseOpts {
    std::string input, output, report;
    std::string kind = "framelet-shrink";
    double sigma = 0.0;
    double gain = 1.0;
    int depth = 0;
    std::string command;
};

DenoiserSpec make_denoiser_spec(const std::string& kind, double gain, int depth,
                                const std::string& command) {
    DenoiserSpec spec;
    spec.kind = parse_denoiser_kind(kind);
    spec.gain = gain;
    spec.depth = depth;
    spec.command = command;
    return spec;
}

void run_denoise(const DenoiseOpts& o) {
    SphericalSignal sig = load_signal(o.input);
    DenoiserSpec spec = make_denoiser_spec(o.kind, o.gain, o.depth, o.command);
    SphericalSignal out = denoise(spec, sig, o.sigma);
    save_signal(o.output, out);

    json doc = base_report("denoise");
    doc["input"] = file_entry(o.input);
    doc["denoiser"] = denoiser_json(spec);
    doc["sigma"] = o.sigma;
    doc["level"] = sig.level;
    doc["channels"] = sig.channels;
    doc["output"] = file_entry(o.output);
    emit_report(o.report, doc);
}

struct MaskOpts {
    std::string output, report;
    int level = 3;
    double ratio = 0.5;
    std::uint64_t seed = 0;
};

void run_mask(const MaskOpts& o) {
    Mask mask = gen_mask(o.level, MaskSpec{o.ratio, o.seed});
    save_mask(o.output, mask);

    json doc = base_report("mask");
    doc["level"] = o.level;
    doc["missing_ratio"] = o.ratio;
    doc["seed"] = o.seed;
    const std::uint64_t observed = mask.observed_count();
    doc["observed"] = observed;
    doc["missing"] = mask.flags.size() - observed;
    doc["observed_fraction"] = static_cast<double>(observed) / mask.flags.size();
    doc["output"] = file_entry(o.output);
    emit_report(o.report, doc);
}

struct MetricsOpts {
    std::string truth, test, report;
};

void run_metrics(const MetricsOpts& o) {
    SphericalSignal a = load_signal(o.truth);
    SphericalSignal b = load_signal(o.test);
    json doc = base_report("metrics");
    doc["truth"] = file_entry(o.truth);
    doc["test"] = file_entry(o.test);
    doc["psnr_db"] = metric_value(psnr(b, a));
    doc["ssim"] = metric_value(ssim(b, a));
    emit_report(o.report, doc);
}

struct InpaintOpts {
    std::string input, mask_path, output, render_path, truth_path, report;
    double ratio = -1.0;
    std::uint64_t seed = 0;
    SolverParams params;
    std::string kind = "framelet-shrink";
    double gain = 1.0;
    int denoiser_depth = 0;
    std::string command;
    bool grid = false;
    int width = 1024;
    int height = 512;
    std::string colormap = "viridis";
};

void run_inpaint(const InpaintOpts& o) {
    SphericalSignal g = load_signal(o.input);
    json doc = base_report("inpaint");
    doc["input"] = file_entry(o.input);

    Mask mask;
    json mask_info;
    if (!o.mask_path.empty()) {
        if (o.ratio >= 0.0) {
            throw InputDomainError("give either --mask or --ratio, not both");
        }
        mask = load_mask(o.mask_path);
        mask_info["source"] = "file";
        mask_info["file"] = file_entry(o.mask_path);
    } else {
        if (o.ratio < 0.0) {
            throw InputDomainError("either --mask or --ratio is required");
        }
        mask = gen_mask(g.level, MaskSpec{o.ratio, o.seed});
        mask_info["source"] = "generated";
        mask_info["missing_ratio"] = o.ratio;
        mask_info["seed"] = o.seed;
    }
    mask_info["observed"] = mask.observed_count();
    mask_info["total"] = mask.flags.size();
    doc["mask"] = mask_info;

    DenoiserSpec spec = make_denoiser_spec(o.kind, o.gain, o.denoiser_depth, o.command);
    doc["denoiser"] = denoiser_json(spec);

    SphericalSignal truth;
    const bool have_truth = !o.truth_path.empty();
    if (have_truth) {
        truth = load_signal(o.truth_path);
        doc["truth"] = file_entry(o.truth_path);
    }
    if (o.grid && !have_truth) {
        throw InputDomainError("--grid needs --truth to rank the sweep");
    }

    InpaintResult best;
    if (o.grid) {
        // The parameter grid: beta1 0.1..1.0 step 0.1, beta2 1..5 step 1.
        json rows = json::array();
        double best_psnr = -std::numeric_limits<double>::infinity();
        json best_row;
        for (int i = 1; i <= 10; ++i) {
            for (int j = 1; j <= 5; ++j) {
                SolverParams p = o.params;
                p.beta1 = i / 10.0;
                p.beta2 = static_cast<double>(j);
                InpaintResult res = inpaint(g, mask, p, spec);
                const double q = psnr(res.restored, truth);
                json row;
                row["beta1"] = p.beta1;
                row["beta2"] = p.beta2;
                row["psnr_db"] = metric_value(q);
                rows.push_back(row);
                if (q > best_psnr) {
                    best_psnr = q;
                    best_row = row;
                    best = std::move(res);
                }
            }
        }
        doc["grid"] = {{"rows", rows}, {"best", best_row}};
    } else {
        best = inpaint(g, mask, o.params, spec);
    }

    save_signal(o.output, best.restored);
    doc["run"] = run_report_json(best.report);

    json metrics;
    if (have_truth) {
        metrics["reference"] = "truth";
        metrics["psnr_db"] = metric_value(psnr(best.restored, truth));
        metrics["ssim"] = metric_value(ssim(best.restored, truth));
    } else {
        metrics["reference"] = "input";
        metrics["psnr_db"] = metric_value(psnr(best.restored, g));
        metrics["ssim"] = metric_value(ssim(best.restored, g));
    }
    doc["metrics"] = metrics;

    doc["output"] = file_entry(o.output);
    if (!o.render_path.empty()) {
        Partition part = Partition::build(best.restored.level);
        write_render(best.restored, part, o.width, o.height, o.colormap, o.render_path);
        doc["render"] = file_entry(o.render_path);
    }
    emit_report(o.report, doc);
}

struct BenchOpts {
    std::string levels = "6..9";
    int measurements = 9;
    double min_batch_ms = 10.0;
    std::string report;
};

void run_bench(const BenchOpts& o) {
    int lo = 0, hi = 0;
    const auto dots = o.levels.find("..");
    try {
        if (dots == std::string::npos) {
            lo = hi = std::stoi(o.levels);
        } else {
            lo = std::stoi(o.levels.substr(0, dots));
            hi = std::stoi(o.levels.substr(dots + 2));
        }
    } catch (const std::exception&) {
        throw InputDomainError("--levels expects 'J' or 'lo..hi'");
    }

    std::vector<BenchResult> results =
        bench_levels(lo, hi, o.measurements, o.min_batch_ms / 1000.0);

    json doc = base_report("bench");
    doc["levels"] = o.levels;
    doc["measurements"] = o.measurements;
    doc["min_batch_ms"] = o.min_batch_ms;
    json rows = json::array();
    for (const auto& r : results) {
        json row;
        row["level"] = r.level;
        row["samples"] = r.samples;
        row["decompose_ms"] = r.decompose_seconds * 1e3;
        row["reconstruct_ms"] = r.reconstruct_seconds * 1e3;
        row["batch_calls"] = r.batch_calls;
        rows.push_back(row);
    }
    doc["table"] = rows;
    json ratios = json::array();
    for (std::size_t i = 1; i < results.size(); ++i) {
        json row;
        row["from_level"] = results[i - 1].level;
        row["to_level"] = results[i].level;
        row["decompose_ratio"] = results[i].decompose_seconds / results[i - 1].decompose_seconds;
        row["reconstruct_ratio"] =
            results[i].reconstruct_seconds / results[i - 1].reconstruct_seconds;
        ratios.push_back(row);
    }
    doc["scaling"] = ratios;
    emit_report(o.report, doc);
}

int fail_json(const char* type, const std::string& message, int code,
              const json& extra = json::object()) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    json err = extra;
    err["type"] = type;
    err["message"] = message;
    doc["error"] = err;
    std::cerr << doc.dump(2) << std::endl;
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spherical Haar framelet transform and inpainting toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML-style config file; command-line flags win");
    app.set_version_flag("--version", kToolVersion);

    PartitionInfoOpts pi;
    auto* sub_pi = app.add_subcommand("partition-info", "Describe the equal-area partition");
    sub_pi->add_option("--level", pi.level, "Partition level J")->capture_default_str();
    sub_pi->add_flag("--full", pi.full, "Include every split record");
    sub_pi->add_option("--report", pi.report, "Write the JSON report here too");
    sub_pi->callback([&] { run_partition_info(pi); });

    IngestOpts ig;
    auto* sub_ig = app.add_subcommand("ingest", "Sample a PNG onto the sphere");
    sub_ig->add_option("--input,-i", ig.input, "Input PNG")->required();
    sub_ig->add_option("--output,-o", ig.output, "Output signal container")->required();
    sub_ig->add_option("--level", ig.level, "Partition level J")->capture_default_str();
    sub_ig->add_option("--mode", ig.mode, "equirect | face")->capture_default_str();
    sub_ig->add_option("--face", ig.face, "Face index for --mode face")->capture_default_str();
    sub_ig->add_option("--report", ig.report, "Write the JSON report here too");
    sub_ig->callback([&] { run_ingest(ig); });

    RenderOpts rd;
    auto* sub_rd = app.add_subcommand("render", "Render a signal to an equirectangular PNG");
    sub_rd->add_option("--input,-i", rd.input, "Input signal container")->required();
    sub_rd->add_option("--output,-o", rd.output, "Output PNG")->required();
    sub_rd->add_option("--width", rd.width, "Output width")->capture_default_str();
    sub_rd->add_option("--height", rd.height, "Output height")->capture_default_str();
    sub_rd->add_option("--colormap", rd.colormap, "viridis | gray (1-channel only)")
        ->capture_default_str();
    sub_rd->add_option("--report", rd.report, "Write the JSON report here too");
    sub_rd->callback([&] { run_render(rd); });

    TransformOpts tf;
    auto* sub_tf = app.add_subcommand("transform", "Framelet analysis / synthesis");
    sub_tf->add_option("--input,-i", tf.input, "Input container")->required();
    sub_tf->add_option("--output,-o", tf.output, "Output container")->required();
    sub_tf->add_option("--depth", tf.depth, "Decomposition depth (0 = default)")
        ->capture_default_str();
    sub_tf->add_flag("--inverse", tf.inverse, "Reconstruct instead of decompose");
    sub_tf->add_option("--check", tf.check, "Signal to compare the reconstruction against");
    sub_tf->add_option("--report", tf.report, "Write the JSON report here too");
    sub_tf->callback([&] { run_transform(tf); });

    DenoiseOpts dn;
    auto* sub_dn = app.add_subcommand("denoise", "Apply the configured denoiser once");
    sub_dn->add_option("--input,-i", dn.input, "Input signal container")->required();
    sub_dn->add_option("--output,-o", dn.output, "Output signal container")->required();
    sub_dn->add_option("--sigma", dn.sigma, "Noise level")->required();
    sub_dn->add_option("--kind", dn.kind, "identity | framelet-shrink | external")
        ->capture_default_str();
    sub_dn->add_option("--gain", dn.gain, "Threshold gain")->capture_default_str();
    sub_dn->add_option("--depth", dn.depth, "Shrink depth (0 = default)")->capture_default_str();
    sub_dn->add_option("--command", dn.command,
                       "External command with {input} {sigma} {output}");
    sub_dn->add_option("--report", dn.report, "Write the JSON report here too");
    sub_dn->callback([&] { run_denoise(dn); });

    MaskOpts mk;
    auto* sub_mk = app.add_subcommand("mask", "Generate a random observation mask");
    sub_mk->add_option("--output,-o", mk.output, "Output mask container")->required();
    sub_mk->add_option("--level", mk.level, "Partition level J")->capture_default_str();
    sub_mk->add_option("--ratio", mk.ratio, "Missing ratio in [0,1]")->capture_default_str();
    sub_mk->add_option("--seed", mk.seed, "Generator seed")->capture_default_str();
    sub_mk->add_option("--report", mk.report, "Write the JSON report here too");
    sub_mk->callback([&] { run_mask(mk); });

    MetricsOpts mt;
    auto* sub_mt = app.add_subcommand("metrics", "PSNR / SSIM between two signals");
    sub_mt->add_option("--truth", mt.truth, "Reference signal")->required();
    sub_mt->add_option("--test", mt.test, "Signal under test")->required();
    sub_mt->add_option("--report", mt.report, "Write the JSON report here too");
    sub_mt->callback([&] { run_metrics(mt); });

    InpaintOpts ip;
    auto* sub_ip = app.add_subcommand("inpaint", "Restore missing patches");
    sub_ip->add_option("--input,-i", ip.input, "Observed signal container")->required();
    sub_ip->add_option("--output,-o", ip.output, "Restored signal container")->required();
    sub_ip->add_option("--mask", ip.mask_path, "Mask container (observed flags)");
    sub_ip->add_option("--ratio", ip.ratio, "Generate the mask: missing ratio");
    sub_ip->add_option("--seed", ip.seed, "Mask generator seed")->capture_default_str();
    sub_ip->add_option("--lambda", ip.params.lambda, "Denoiser weight")->capture_default_str();
    sub_ip->add_option("--beta1", ip.params.beta1, "Coefficient penalty")->capture_default_str();
    sub_ip->add_option("--beta2", ip.params.beta2, "Denoiser penalty")->capture_default_str();
    sub_ip->add_option("--depth", ip.params.depth, "Decomposition depth (0 = default)")
        ->capture_default_str();
    sub_ip->add_option("--max-iters", ip.params.max_iters, "Iteration cap")
        ->capture_default_str();
    sub_ip->add_option("--rel-tol", ip.params.rel_tol, "Relative-change stop")
        ->capture_default_str();
    sub_ip->add_option("--denoiser", ip.kind, "identity | framelet-shrink | external")
        ->capture_default_str();
    sub_ip->add_option("--gain", ip.gain, "Shrink gain")->capture_default_str();
    sub_ip->add_option("--denoiser-depth", ip.denoiser_depth, "Shrink depth (0 = default)")
        ->capture_default_str();
    sub_ip->add_option("--command", ip.command,
                       "External command with {input} {sigma} {output}");
    sub_ip->add_flag("--grid", ip.grid, "Sweep beta1 x beta2 and keep the best PSNR");
    sub_ip->add_option("--truth", ip.truth_path, "Ground truth for metrics / --grid");
    sub_ip->add_option("--render", ip.render_path, "Also render the result to this PNG");
    sub_ip->add_option("--width", ip.width, "Render width")->capture_default_str();
    sub_ip->add_option("--height", ip.height, "Render height")->capture_default_str();
    sub_ip->add_option("--colormap", ip.colormap, "viridis | gray")->capture_default_str();
    sub_ip->add_option("--report", ip.report, "Write the JSON report here too");
    sub_ip->callback([&] { run_inpaint(ip); });

    BenchOpts bn;
    auto* sub_bn = app.add_subcommand("bench", "Time single-level transforms");
    sub_bn->add_option("--levels", bn.levels, "Level range, e.g. 6..9")->capture_default_str();
    sub_bn->add_option("--measurements", bn.measurements, "Samples per median")
        ->capture_default_str();
    sub_bn->add_option("--min-batch-ms", bn.min_batch_ms, "Minimum timed batch")
        ->capture_default_str();
    sub_bn->add_option("--report", bn.report, "Write the JSON report here too");
    sub_bn->callback([&] { run_bench(bn); });

    // Let a trailing --config (or any root flag) given after a subcommand
    // name fall back up to the root parser.
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const PluginError& e) {
        json extra;
        extra["diagnostics"] = e.diagnostics();
        return fail_json("plugin", e.what(), 4, extra);
    } catch (const DivergenceError& e) {
        json extra;
        extra["iteration"] = e.iteration();
        return fail_json("divergence", e.what(), 5, extra);
    } catch (const InputDomainError& e) {
        return fail_json("input_domain", e.what(), 2);
    } catch (const ShapeError& e) {
        return fail_json("shape", e.what(), 2);
    } catch (const LookupError& e) {
        return fail_json("lookup", e.what(), 2);
    } catch (const FormatError& e) {
        return fail_json("format", e.what(), 3);
    } catch (const IoError& e) {
        return fail_json("io", e.what(), 3);
    } catch (const ResourceError& e) {
        return fail_json("resource", e.what(), 6);
    } catch (const std::exception& e) {
        return fail_json("internal", e.what(), 10);
    }
    return 0;
}
