// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "nightforge/assets.hpp"
#include "nightforge/flare.hpp"
#include "nightforge/noise.hpp"

namespace nightforge {

/// Training-resolution preset (square side, pixels).
inline constexpr int kTrainingResolution = 518;

struct PipelineConfig {
    FlareConfig flare;
    NoiseModelRanges noise;
    AugmentOptions augment;
    std::string asset_dir;
    std::string output_dir;
    std::uint64_t global_seed = 0;
    std::optional<Dims> target;                  // resize inputs first; native size when empty
    std::optional<CameraIntrinsics> intrinsics;  // CameraIntrinsics::centered when empty
    BandOrientation band_orientation = BandOrientation::rows;
    bool noise_enabled = true;
    bool emit_guidance = false;

    /// Throws InvalidConfig.
    void validate() const;
};

/// Parses the key = value config format (see configs/default.conf for the
/// full schema). '#' starts a comment; unknown keys and malformed values
/// throw InvalidConfig. Keys absent from the text keep their defaults.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Canonical key = value dump, one key per line in schema order, reals
/// printed round-trip exact. parse_config(to_config_text(c)) == c.
std::string to_config_text(const PipelineConfig& cfg);

/// SHA-256 over the canonical dump minus the asset and output paths, so
/// the same settings digest identically wherever they run.
std::string config_digest(const PipelineConfig& cfg);

}  // namespace nightforge
