// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#include "nightforge/assets.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "nightforge/image_io.hpp"
#include "nightforge/resample.hpp"
#include "nightforge/simd/kernels.hpp"

namespace nightforge {

AssetCatalog load_catalog(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        throw Error(ErrorKind::EmptyCatalog, "not a directory: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && io::has_image_extension(entry.path())) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
        return a.filename().string() < b.filename().string();
    });
    if (files.empty()) throw Error(ErrorKind::EmptyCatalog, "no image files in " + dir.string());

    AssetCatalog catalog;
    catalog.source_dir = dir.string();
    std::unordered_set<std::string> ids;
    for (const auto& file : files) {
        LightAsset asset;
        asset.id = file.stem().string();
        // Stems collide for a.png + a.pfm; keep the full name for the second one.
        if (!ids.insert(asset.id).second) {
            asset.id = file.filename().string();
            ids.insert(asset.id);
        }
        asset.pixels = io::read_rgb_image(file);
        catalog.assets.push_back(std::move(asset));
    }
    return catalog;
}

const LightAsset& sample_asset(const AssetCatalog& catalog, Rng& rng) {
    if (catalog.assets.empty()) throw Error(ErrorKind::EmptyCatalog, "cannot sample empty catalog");
    return catalog.assets[uniform_index(rng, catalog.assets.size())];
}

void AugmentOptions::validate() const {
    const bool ok = crop_probability >= 0.0 && crop_probability <= 1.0 &&
                    flip_probability >= 0.0 && flip_probability <= 1.0 && crop_min > 0.0 &&
                    crop_min <= crop_max && crop_max <= 1.0;
    if (!ok) throw Error(ErrorKind::InvalidConfig, "augmentation options out of range");
}

LightAsset augment_asset(const LightAsset& asset, Dims target, Rng& rng,
                         const AugmentOptions& options) {
    if (target.height < 1 || target.width < 1) {
        throw Error(ErrorKind::InvalidDims, "augment target must be at least 1x1");
    }
    if (asset.pixels.empty() || asset.pixels.channels() != 3) {
        throw Error(ErrorKind::InvalidDims, "asset must be a non-empty 3-channel plane");
    }
    options.validate();

    const double crop_gate = uniform01(rng);
    const double fraction = uniform(rng, options.crop_min, options.crop_max);
    const double offset_y = uniform01(rng);
    const double offset_x = uniform01(rng);
    const double flip_gate = uniform01(rng);

    LightAsset out{asset.id, resize_bilinear(asset.pixels, target)};

    if (crop_gate < options.crop_probability) {
        const double h = fraction * target.height;
        const double w = fraction * target.width;
        const double top = offset_y * (target.height - h);
        const double left = offset_x * (target.width - w);
        out.pixels = resample_window(out.pixels, top, left, h, w, target);
    }
    if (flip_gate < options.flip_probability) {
        for (int y = 0; y < target.height; ++y) {
            for (int x = 0; x < target.width / 2; ++x) {
                for (int c = 0; c < 3; ++c) {
                    std::swap(out.pixels(y, x, c), out.pixels(y, target.width - 1 - x, c));
                }
            }
        }
    }
    simd::clamp(out.pixels.values(), 0.0f, 1.0f);
    return out;
}

}  // namespace nightforge
