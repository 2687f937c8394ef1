// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#include "nightforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "nightforge/fusion.hpp"
#include "nightforge/hash.hpp"
#include "nightforge/image_io.hpp"
#include "nightforge/random.hpp"
#include "nightforge/resample.hpp"
#include "nightforge/simd/kernels.hpp"

namespace nightforge {
namespace {

using nlohmann::json;

json to_json(const FlareDraw& d, const std::vector<PlacedSource>& sources) {
    json placed = json::array();
    for (const auto& s : sources) {
        placed.push_back({{"asset", s.asset_id},
                          {"u", s.placement.u},
                          {"v", s.placement.v},
                          {"z", s.placement.z},
                          {"p3d", {s.placement.p3d.x, s.placement.p3d.y, s.placement.p3d.z}}});
    }
    return {{"brightness_scale", d.brightness_scale},
            {"gamma", d.gamma},
            {"peak_intensity", d.peak_intensity},
            {"source_scale", d.source_scale},
            {"source_count", d.source_count},
            {"sources", placed}};
}

json to_json(const NoiseModel& m, bool enabled) {
    return {{"enabled", enabled},
            {"gain", m.gain},
            {"read_sigma", m.read_sigma},
            {"row_variance", m.row_variance},
            {"quant_step", m.quant_step},
            {"seed", m.seed}};
}

void check_unit_rgb(const ImagePlane& rgb) {
    if (rgb.channels() != 3) throw Error(ErrorKind::WrongChannelCount, "daylight image must be RGB");
    for (float v : rgb.values()) {
        if (!(v >= 0.0f && v <= 1.0f)) throw Error(ErrorKind::InvalidConfig, "daylight image must lie in [0, 1]");
    }
}

std::string output_stem(const InputRecord& rec) {
    char prefix[32];
    std::snprintf(prefix, sizeof prefix, "%06zu_", rec.index);
    return prefix + rec.rgb.stem().string();
}

}  // namespace

std::uint64_t per_image_seed(std::uint64_t global_seed, std::uint64_t index) {
    return mix_seed(global_seed, index);
}

NightPair synthesize_pair(const ImagePlane& day_rgb, const DepthMap& depth, const AssetCatalog& catalog,
                          const PipelineConfig& cfg, std::uint64_t seed, std::string source_id) {
    cfg.validate();
    check_unit_rgb(day_rgb);
    if (day_rgb.dims() != depth.dims()) {
        throw Error(ErrorKind::DimMismatch, "RGB and depth resolutions differ");
    }

    NightPair pair;
    pair.source_id = std::move(source_id);
    pair.per_image_seed = seed;
    if (cfg.target) {
        pair.day_rgb = resize_bilinear(day_rgb, *cfg.target);
        pair.depth = resize_nearest(depth, *cfg.target);
    } else {
        pair.day_rgb = day_rgb;
        pair.depth = depth;
    }
    const Dims dims = pair.day_rgb.dims();
    const CameraIntrinsics intr = cfg.intrinsics.value_or(CameraIntrinsics::centered(dims));

    Rng rng(seed);
    pair.draw = sample_flare_draw(cfg.flare, rng);
    std::vector<ImagePlane> contributions;
    contributions.reserve(static_cast<std::size_t>(pair.draw.source_count));
    for (int i = 0; i < pair.draw.source_count; ++i) {
        const LightAsset& asset = sample_asset(catalog, rng);
        const LightAsset shaped = augment_asset(asset, dims, rng, cfg.augment);
        const LightPlacement placement = sample_placement(intr, dims, cfg.flare, rng);
        contributions.push_back(render_source(shaped, placement, pair.draw.source_scale, dims, cfg.flare));
        pair.sources.push_back({asset.id, placement});
    }
    const ImagePlane flare_image = compose_flare(pair.day_rgb, contributions, pair.draw);

    pair.noise = sample_noise_model(cfg.noise, rng);
    pair.night_rgb = cfg.noise_enabled ? apply_noise(flare_image, pair.noise, cfg.band_orientation)
                                       : flare_image;
    if (cfg.emit_guidance) pair.guidance = illumination_guidance(pair.night_rgb);
    return pair;
}

std::vector<InputRecord> read_input_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidManifest, "cannot read input manifest " + path.string());
    const std::filesystem::path base = path.parent_path();
    std::vector<InputRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos || tab == 0 ||
            tab + 1 == line.size()) {
            throw Error(ErrorKind::InvalidManifest,
                        path.string() + ":" + std::to_string(line_no) + ": expected rgb_path<TAB>depth_path");
        }
        InputRecord rec;
        rec.index = line_no - 1;
        rec.rgb = base / line.substr(0, tab);
        rec.depth = base / line.substr(tab + 1);
        records.push_back(std::move(rec));
    }
    if (records.empty()) throw Error(ErrorKind::InvalidManifest, path.string() + ": no records");
    return records;
}

DepthMap read_depth(const std::filesystem::path& path) {
    Plane<float> meters = io::read_pfm(path);
    if (meters.channels() != 1) {
        throw Error(ErrorKind::DecodeError, path.string() + ": depth PFM must be single-channel (Pf)");
    }
    return DepthMap::from_meters(std::move(meters));
}

RunResult run_dataset(const std::filesystem::path& input_manifest, const PipelineConfig& cfg,
                      const RunOptions& options) {
    namespace fs = std::filesystem;
    cfg.validate();
    if (cfg.output_dir.empty()) throw Error(ErrorKind::InvalidConfig, "output directory not set");
    const std::vector<InputRecord> records = read_input_manifest(input_manifest);
    const AssetCatalog catalog = load_catalog(cfg.asset_dir);
    const std::string digest = config_digest(cfg);

    const fs::path out_dir = cfg.output_dir;
    for (const char* sub : {"night", "depth", "guidance"}) fs::create_directories(out_dir / sub);

    std::vector<std::optional<json>> written(records.size());
    std::vector<std::optional<RecordFailure>> failed(records.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex log_mutex;

    auto process = [&](const InputRecord& rec, std::size_t slot) {
        const std::string stem = output_stem(rec);
        const fs::path night_rel = fs::path("night") / (stem + ".png");
        const fs::path depth_rel = fs::path("depth") / (stem + ".pfm");
        const fs::path guide_rel = fs::path("guidance") / (stem + ".pfm");
        try {
            const ImagePlane day = io::read_rgb_image(rec.rgb);
            const DepthMap depth = read_depth(rec.depth);
            const std::uint64_t seed = per_image_seed(cfg.global_seed, rec.index);
            const NightPair pair = synthesize_pair(day, depth, catalog, cfg, seed, rec.rgb.stem().string());

            io::write_png16(out_dir / night_rel, pair.night_rgb);
            io::write_pfm(out_dir / depth_rel, pair.depth.meters);
            json outputs = {{"night", night_rel.generic_string()}, {"depth", depth_rel.generic_string()}};
            json hashes = {{"night", sha256_file(out_dir / night_rel)},
                           {"depth", sha256_file(out_dir / depth_rel)}};
            if (pair.guidance) {
                io::write_pfm(out_dir / guide_rel, *pair.guidance);
                outputs["guidance"] = guide_rel.generic_string();
                hashes["guidance"] = sha256_file(out_dir / guide_rel);
            }
            written[slot] = json{{"index", rec.index},
                                      {"source_rgb", rec.rgb.generic_string()},
                                      {"source_depth", rec.depth.generic_string()},
                                      {"outputs", outputs},
                                      {"sha256", hashes},
                                      {"per_image_seed", seed},
                                      {"flare", to_json(pair.draw, pair.sources)},
                                      {"noise", to_json(pair.noise, cfg.noise_enabled)},
                                      {"config_digest", digest}};
        } catch (const std::exception& e) {
            std::error_code ec;
            for (const auto& rel : {night_rel, depth_rel, guide_rel}) fs::remove(out_dir / rel, ec);
            failed[slot] = RecordFailure{rec.index, rec.rgb.generic_string(), e.what()};
            std::lock_guard lock(log_mutex);
            std::cerr << "nightforge: record " << rec.index << " (" << rec.rgb.generic_string()
                      << ") failed: " << e.what() << '\n';
            if (options.strict) stop = true;
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(records.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < records.size() && !stop; i = next++) process(records[i], i);
            });
        }
    }

    RunResult result;
    for (auto& f : failed) {
        if (f) result.failures.push_back(std::move(*f));
    }
    result.aborted = options.strict && !result.failures.empty();

    json report = {{"records_total", records.size()},
                   {"config_digest", digest},
                   {"strict", options.strict},
                   {"aborted", result.aborted},
                   {"failures", json::array()}};
    for (const auto& f : result.failures) {
        report["failures"].push_back({{"index", f.index}, {"source", f.source}, {"error", f.error}});
    }

    for (auto& w : written) {
        if (w) result.manifest.push_back(std::move(*w));
    }
    report["records_written"] = result.aborted ? 0 : result.manifest.size();
    result.report_path = out_dir / "run_report.json";
    {
        std::ofstream out(result.report_path);
        out << report.dump(2) << '\n';
        if (!out) throw Error(ErrorKind::IoError, "cannot write " + result.report_path.string());
    }
    if (result.aborted) return result;

    result.manifest_path = out_dir / "manifest.jsonl";
    std::ofstream out(result.manifest_path);
    for (const auto& rec : result.manifest) out << rec.dump() << '\n';
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + result.manifest_path.string());
    return result;
}

VerifyResult verify_manifest(const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw Error(ErrorKind::InvalidManifest, "cannot read manifest " + manifest.string());
    const std::filesystem::path base = manifest.parent_path();
    VerifyResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const json rec = json::parse(line);
            const std::size_t index = rec.at("index").get<std::size_t>();
            const json& outputs = rec.at("outputs");
            const json& hashes = rec.at("sha256");
            for (const auto& [key, rel] : outputs.items()) {
                const std::string expected = hashes.at(key).get<std::string>();
                const std::filesystem::path file = base / rel.get<std::string>();
                ++result.files_checked;
                std::string actual;
                std::error_code ec;
                if (std::filesystem::is_regular_file(file, ec)) actual = sha256_file(file);
                if (actual != expected) result.drift.push_back({index, rel.get<std::string>(), expected, actual});
            }
            ++result.records;
        } catch (const json::exception& e) {
            throw Error(ErrorKind::InvalidManifest,
                        manifest.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return result;
}

}  // namespace nightforge
