// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nightforge/assets.hpp"
#include "nightforge/config.hpp"
#include "nightforge/flare.hpp"
#include "nightforge/noise.hpp"

namespace nightforge {

struct PlacedSource {
    std::string asset_id;
    LightPlacement placement;
};

struct NightPair {
    std::string source_id;
    ImagePlane day_rgb;
    ImagePlane night_rgb;
    std::optional<ImagePlane> guidance;
    DepthMap depth;
    FlareDraw draw;
    std::vector<PlacedSource> sources;
    NoiseModel noise;
    std::uint64_t per_image_seed = 0;
};

/// Seed for manifest record `index`; depends only on (global_seed, index).
std::uint64_t per_image_seed(std::uint64_t global_seed, std::uint64_t index);

/// One daylight RGB-D sample to one low-light pair. Random draws, in order:
/// flare draw; per source (asset, augmentation, placement); noise model.
/// The noise model is drawn even when noise is disabled so the stream
/// layout never depends on flags. Throws on any component error.
NightPair synthesize_pair(const ImagePlane& day_rgb, const DepthMap& depth, const AssetCatalog& catalog,
                          const PipelineConfig& cfg, std::uint64_t per_image_seed,
                          std::string source_id = {});

struct InputRecord {
    std::size_t index = 0;
    std::filesystem::path rgb;
    std::filesystem::path depth;
};

/// Tab-separated `rgb_path<TAB>depth_path` per line; blank lines and lines
/// starting with '#' are skipped. A record's index is its 0-based line
/// number, so commenting a record out leaves every other record's seed and
/// output name unchanged. Relative paths resolve against the manifest's
/// directory. Throws InvalidManifest.
std::vector<InputRecord> read_input_manifest(const std::filesystem::path& path);

/// Depth as a single-channel PFM in meters. Throws DecodeError.
DepthMap read_depth(const std::filesystem::path& path);

struct RunOptions {
    unsigned workers = 1;
    bool strict = false;
};

struct RecordFailure {
    std::size_t index = 0;
    std::string source;
    std::string error;
};

struct RunResult {
    std::vector<nlohmann::json> manifest;  // one object per written record, index order
    std::vector<RecordFailure> failures;
    bool aborted = false;                  // strict mode hit a failure
    std::filesystem::path manifest_path;
    std::filesystem::path report_path;
};

/// Batch driver. Writes night/<idx>_<stem>.png (16-bit), depth/<idx>_<stem>.pfm,
/// guidance/<idx>_<stem>.pfm (when enabled), then run_report.json and,
/// unless strict mode aborted, manifest.jsonl last. A failing record is
/// logged and left out of the manifest; its partial outputs are deleted.
/// Throws InvalidManifest / InvalidConfig / EmptyCatalog for run-level errors.
RunResult run_dataset(const std::filesystem::path& input_manifest, const PipelineConfig& cfg,
                      const RunOptions& options = {});

struct DriftEntry {
    std::size_t index = 0;
    std::string file;
    std::string expected;
    std::string actual;  // empty when the file is missing
};

struct VerifyResult {
    std::size_t records = 0;
    std::size_t files_checked = 0;
    std::vector<DriftEntry> drift;
};

/// Re-hashes every output listed in a manifest.jsonl (paths relative to the
/// manifest directory). Throws InvalidManifest on malformed records.
VerifyResult verify_manifest(const std::filesystem::path& manifest);

}  // namespace nightforge
