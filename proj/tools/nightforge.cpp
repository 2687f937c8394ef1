// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

// nightforge command-line driver. Subcommands wrap the library's batch
// synthesis, fusion and evaluation entry points.
//
// Exit codes: 0 success, 1 config/manifest/input error, 2 strict-mode record
// failure, 3 verify found drift.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "nightforge/config.hpp"
#include "nightforge/depth_eval.hpp"
#include "nightforge/fusion.hpp"
#include "nightforge/image_io.hpp"
#include "nightforge/pipeline.hpp"
#include "nightforge/simd/kernels.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitStrict = 2;
constexpr int kExitDrift = 3;

struct SynthArgs {
    std::string input;
    std::string assets;
    std::string out;
    std::string config;
    std::optional<std::uint64_t> seed;
    bool strict = false;
    unsigned workers = 0;
    bool emit_guidance = false;
};

int run_synth(const SynthArgs& a) {
    nightforge::PipelineConfig cfg =
        a.config.empty() ? nightforge::PipelineConfig{} : nightforge::load_config(a.config);
    if (!a.assets.empty()) cfg.asset_dir = a.assets;
    if (!a.out.empty()) cfg.output_dir = a.out;
    if (a.seed) cfg.global_seed = *a.seed;
    if (a.emit_guidance) cfg.emit_guidance = true;
    if (cfg.asset_dir.empty() || cfg.output_dir.empty()) {
        std::cerr << "nightforge synth: --assets and --out (or config keys) are required\n";
        return kExitInput;
    }
    nightforge::RunOptions options;
    options.strict = a.strict;
    options.workers = a.workers > 0 ? a.workers : std::max(1u, std::thread::hardware_concurrency());

    const auto result = nightforge::run_dataset(a.input, cfg, options);
    std::cout << "simd: " << nightforge::simd::isa_name(nightforge::simd::active().isa) << '\n'
              << "written: " << result.manifest.size() << ", failed: " << result.failures.size() << '\n'
              << "report: " << result.report_path.string() << '\n';
    if (result.aborted) return kExitStrict;
    std::cout << "manifest: " << result.manifest_path.string() << '\n';
    return kExitOk;
}

int run_verify(const std::string& manifest) {
    const auto result = nightforge::verify_manifest(manifest);
    for (const auto& d : result.drift) {
        std::cout << "DRIFT record " << d.index << " " << d.file << " expected " << d.expected << " got "
                  << (d.actual.empty() ? "<missing>" : d.actual) << '\n';
    }
    std::cout << "records: " << result.records << ", files: " << result.files_checked
              << ", drift: " << result.drift.size() << '\n';
    return result.drift.empty() ? kExitOk : kExitDrift;
}

int run_fuse(const std::string& input, const std::string& guidance, const std::string& params_path,
             const std::string& out) {
    const auto params = nightforge::params_cast<float>(nightforge::load_fusion_params(params_path));
    const auto image = nightforge::io::read_pfm(input);
    const auto guide = nightforge::io::read_pfm(guidance);
    if (image.channels() != params.image_channels || guide.channels() != params.guidance_channels) {
        std::cerr << "nightforge fuse: channel counts (" << image.channels() << ", " << guide.channels()
                  << ") do not match parameters (" << params.image_channels << ", "
                  << params.guidance_channels << ")\n";
        return kExitInput;
    }
    const auto x = nightforge::concat_aux(image, guide);
    const auto result = nightforge::fusion_forward(x, params);
    nightforge::io::write_pfm(out, result.output);
    return kExitOk;
}

int run_init_params(int c1, int c2, int c3, std::uint64_t seed, const std::string& out) {
    nightforge::save_fusion_params(out, nightforge::FusionParams<double>::random(c1, c2, c3, seed));
    return kExitOk;
}

json metrics_json(const nightforge::MetricsReport& r) {
    return {{"abs_rel", r.abs_rel}, {"sq_rel", r.sq_rel}, {"rmse", r.rmse},       {"rmse_log", r.rmse_log},
            {"delta1", r.delta[0]}, {"delta2", r.delta[1]}, {"delta3", r.delta[2]}, {"n_valid", r.n_valid}};
}

int run_eval(const std::string& pred_dir, const std::string& gt_dir, const nightforge::EvalConfig& cfg,
             const std::string& report_path) {
    cfg.validate();
    std::vector<fs::path> gt_files;
    for (const auto& entry : fs::directory_iterator(gt_dir)) {
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (entry.is_regular_file() && ext == ".pfm") gt_files.push_back(entry.path());
    }
    std::sort(gt_files.begin(), gt_files.end());

    json images = json::array();
    json skipped = json::array();
    std::vector<nightforge::MetricsReport> reports;
    for (const auto& gt_path : gt_files) {
        const fs::path pred_path = fs::path(pred_dir) / gt_path.filename();
        const std::string name = gt_path.filename().string();
        try {
            if (!fs::exists(pred_path)) throw nightforge::Error(nightforge::ErrorKind::IoError, "missing prediction");
            const auto gt = nightforge::read_depth(gt_path);
            const auto pred = nightforge::read_depth(pred_path);
            const auto report = nightforge::compute_metrics(pred, gt, cfg);
            reports.push_back(report);
            json rec = metrics_json(report);
            rec["name"] = name;
            images.push_back(rec);
        } catch (const nightforge::Error& e) {
            skipped.push_back({{"name", name}, {"error", e.what()}});
            std::cerr << "nightforge eval: skipping " << name << ": " << e.what() << '\n';
        }
    }
    if (reports.empty()) {
        std::cerr << "nightforge eval: no image could be evaluated\n";
        return kExitInput;
    }
    const auto total = nightforge::aggregate(reports);
    const json doc = {{"alignment", nightforge::to_string(cfg.alignment)},
                      {"max_depth", cfg.max_depth},
                      {"min_depth", cfg.min_depth},
                      {"prediction_clamped", cfg.clamp_prediction},
                      {"images", images},
                      {"skipped", skipped},
                      {"aggregate", metrics_json(total)}};
    std::ofstream out(report_path);
    out << doc.dump(2) << '\n';
    if (!out) throw nightforge::Error(nightforge::ErrorKind::IoError, "cannot write " + report_path);
    std::cout << "abs_rel " << total.abs_rel << "  sq_rel " << total.sq_rel << "  rmse " << total.rmse
              << "  rmse_log " << total.rmse_log << "  d1 " << total.delta[0] << "  d2 " << total.delta[1]
              << "  d3 " << total.delta[2] << "  (" << reports.size() << " images, " << total.n_valid
              << " px)\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nightforge: synthetic low-light RGB-D pairs and related tools"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Synthesize low-light pairs from a daylight RGB-D manifest");
    synth_cmd->add_option("--input", synth.input, "Input manifest (rgb<TAB>depth per line)")->required();
    synth_cmd->add_option("--assets", synth.assets, "Light-source asset directory");
    synth_cmd->add_option("--out", synth.out, "Output directory");
    synth_cmd->add_option("--config", synth.config, "Pipeline config file (key = value)");
    synth_cmd->add_option("--seed", synth.seed, "Global seed (u64)");
    synth_cmd->add_flag("--strict", synth.strict, "Abort with exit code 2 on the first record failure");
    synth_cmd->add_option("--workers", synth.workers, "Worker threads (default: hardware concurrency)");
    synth_cmd->add_flag("--emit-guidance", synth.emit_guidance, "Also write illumination guidance PFMs");

    std::string verify_manifest;
    auto* verify_cmd = app.add_subcommand("verify", "Re-hash outputs listed in a manifest and report drift");
    verify_cmd->add_option("--manifest", verify_manifest, "manifest.jsonl")->required();

    std::string fuse_input, fuse_guidance, fuse_params, fuse_out;
    auto* fuse_cmd = app.add_subcommand("fuse", "Apply the multiscale fusion kernel to one image");
    fuse_cmd->add_option("--input", fuse_input, "Low-light image PFM")->required();
    fuse_cmd->add_option("--guidance", fuse_guidance, "Guidance PFM")->required();
    fuse_cmd->add_option("--params", fuse_params, "Fusion parameter file")->required();
    fuse_cmd->add_option("--out", fuse_out, "Output PFM")->required();

    int c1 = 3, c2 = 1, c3 = 6;
    std::uint64_t init_seed = 0;
    std::string init_out;
    auto* init_cmd = app.add_subcommand("init-params", "Write seeded fusion parameters");
    init_cmd->add_option("--c1", c1, "Image channels")->capture_default_str();
    init_cmd->add_option("--c2", c2, "Guidance channels")->capture_default_str();
    init_cmd->add_option("--c3", c3, "Hidden channels")->capture_default_str();
    init_cmd->add_option("--seed", init_seed, "Initialization seed")->capture_default_str();
    init_cmd->add_option("--out", init_out, "Output parameter file")->required();

    std::string pred_dir, gt_dir, align = "none", report_path;
    nightforge::EvalConfig eval_cfg;
    auto* eval_cmd = app.add_subcommand("eval", "Depth metrics over matching PFM files");
    eval_cmd->add_option("--pred-dir", pred_dir, "Predicted depth PFMs")->required();
    eval_cmd->add_option("--gt-dir", gt_dir, "Ground-truth depth PFMs")->required();
    eval_cmd->add_option("--max-depth", eval_cfg.max_depth, "Ground-truth cap (m)")->required();
    eval_cmd->add_option("--min-depth", eval_cfg.min_depth, "Ground-truth floor (m)")->capture_default_str();
    eval_cmd->add_option("--align", align, "none | median")->capture_default_str();
    eval_cmd->add_flag("!--no-clamp", eval_cfg.clamp_prediction, "Do not clamp predictions to the depth range");
    eval_cmd->add_option("--report", report_path, "JSON report path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInput;
    }

    try {
        if (synth_cmd->parsed()) return run_synth(synth);
        if (verify_cmd->parsed()) return run_verify(verify_manifest);
        if (fuse_cmd->parsed()) return run_fuse(fuse_input, fuse_guidance, fuse_params, fuse_out);
        if (init_cmd->parsed()) return run_init_params(c1, c2, c3, init_seed, init_out);
        if (eval_cmd->parsed()) {
            eval_cfg.alignment = nightforge::parse_alignment(align);
            return run_eval(pred_dir, gt_dir, eval_cfg, report_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "nightforge: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
