// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nightforge/plane.hpp"
#include "nightforge/random.hpp"

namespace nightforge {

/// RGB light-source pattern, linear [0,1].
struct LightAsset {
    std::string id;
    ImagePlane pixels;

    friend bool operator==(const LightAsset&, const LightAsset&) = default;
};

/// Immutable after load; safe for concurrent reads.
struct AssetCatalog {
    std::vector<LightAsset> assets;
    std::string source_dir;

    friend bool operator==(const AssetCatalog&, const AssetCatalog&) = default;
};

/// Loads every .png / .pfm file in `dir` (non-recursive), ordered by
/// filename. Files with other extensions are ignored. Asset ids are the
/// filename stems. Throws EmptyCatalog or DecodeError (first bad file aborts).
AssetCatalog load_catalog(const std::filesystem::path& dir);

/// Uniform choice over the catalog. Throws EmptyCatalog.
const LightAsset& sample_asset(const AssetCatalog& catalog, Rng& rng);

struct AugmentOptions {
    double crop_probability = 0.5;
    double crop_min = 0.7;  // crop side fraction ~ U(crop_min, crop_max)
    double crop_max = 1.0;
    double flip_probability = 0.5;

    /// Throws InvalidConfig.
    void validate() const;
};

/// Bilinear resize to `target`, then (with crop_probability) a random
/// crop of fraction U(crop_min, crop_max) per side rescaled back to
/// `target`, then (with flip_probability) a horizontal flip. The random
/// stream consumption is fixed (five draws) regardless of which branches
/// fire. Throws InvalidDims.
LightAsset augment_asset(const LightAsset& asset, Dims target, Rng& rng,
                         const AugmentOptions& options = {});

}  // namespace nightforge
