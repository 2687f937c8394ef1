// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#include "nightforge/flare.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nightforge/resample.hpp"
#include "nightforge/simd/kernels.hpp"

namespace nightforge {

CameraIntrinsics CameraIntrinsics::centered(Dims dims) {
    const double f = std::max(dims.height, dims.width);
    return {f, f, dims.width / 2.0, dims.height / 2.0};
}

void CameraIntrinsics::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(cx) || !std::isfinite(cy)) {
        throw Error(ErrorKind::InvalidConfig, "intrinsics need fx > 0, fy > 0");
    }
}

LightPlacement place_light(const CameraIntrinsics& intr, double u, double v, double z,
                           double z_max) {
    intr.validate();
    if (!(z > 0.0) || z > z_max) {
        throw Error(ErrorKind::DepthOutOfRange,
                    "light depth " + std::to_string(z) + " outside (0, " + std::to_string(z_max) + "]");
    }
    // K^-1 (u, v, 1) = ((u - cx) / fx, (v - cy) / fy, 1)
    return {u, v, z, {z * (u - intr.cx) / intr.fx, z * (v - intr.cy) / intr.fy, z}};
}

std::array<double, 2> project(const CameraIntrinsics& intr, const Vec3& p) {
    return {intr.fx * p.x / p.z + intr.cx, intr.fy * p.y / p.z + intr.cy};
}

void FlareConfig::validate() const {
    auto range_ok = [](double lo, double hi) { return lo > 0.0 && lo <= hi && std::isfinite(hi); };
    const bool ok = range_ok(source_scale_min, source_scale_max) && range_ok(peak_min, peak_max) &&
                    range_ok(brightness_min, brightness_max) && range_ok(gamma_min, gamma_max) &&
                    range_ok(depth_min, depth_max) && depth_max <= kMaxLightDepth &&
                    reference_depth > 0.0;
    if (!ok) throw Error(ErrorKind::InvalidConfig, "flare config ranges must satisfy 0 < min <= max");
}

int source_count(double peak_intensity, double source_scale) {
    const double n = std::floor(peak_intensity / source_scale + 0.5);
    return n < 1.0 ? 1 : static_cast<int>(n);
}

FlareDraw sample_flare_draw(const FlareConfig& cfg, Rng& rng) {
    cfg.validate();
    FlareDraw draw;
    draw.source_scale = log_uniform(rng, cfg.source_scale_min, cfg.source_scale_max);
    draw.peak_intensity = log_uniform(rng, cfg.peak_min, cfg.peak_max);
    draw.brightness_scale = uniform(rng, cfg.brightness_min, cfg.brightness_max);
    draw.gamma = uniform(rng, cfg.gamma_min, cfg.gamma_max);
    draw.source_count = source_count(draw.peak_intensity, draw.source_scale);
    return draw;
}

LightPlacement sample_placement(const CameraIntrinsics& intr, Dims dims, const FlareConfig& cfg,
                                Rng& rng) {
    const double u = uniform(rng, 0.0, dims.width);
    const double v = uniform(rng, 0.0, dims.height);
    const double z = cfg.depth_max - uniform01(rng) * (cfg.depth_max - cfg.depth_min);
    return place_light(intr, u, v, z, cfg.depth_max);
}

ImagePlane render_source(const LightAsset& asset, const LightPlacement& placement,
                         double source_scale, Dims dims, const FlareConfig& cfg) {
    if (dims.height < 1 || dims.width < 1) {
        throw Error(ErrorKind::InvalidDims, "render target must be at least 1x1");
    }
    const ImagePlane& pattern = asset.pixels;
    if (pattern.empty() || pattern.channels() != 3) {
        throw Error(ErrorKind::InvalidDims, "asset must be a non-empty 3-channel plane");
    }
    if (!(placement.z > 0.0)) throw Error(ErrorKind::DepthOutOfRange, "placement depth must be > 0");

    const double size_factor = cfg.reference_depth / placement.z;
    const int rendered_h = std::max(1, static_cast<int>(std::lround(pattern.height() * size_factor)));
    const int rendered_w = std::max(1, static_cast<int>(std::lround(pattern.width() * size_factor)));
    float gain = static_cast<float>(source_scale);
    if (cfg.depth_attenuation) gain *= static_cast<float>(size_factor * size_factor);

    ImagePlane out(dims.height, dims.width, 3);
    // Pattern pixel (i, j) lands on image pixel (top + i, left + j); the
    // pattern center (h/2, w/2) lands on (floor(v), floor(u)).
    const int top = static_cast<int>(std::floor(placement.v)) - rendered_h / 2;
    const int left = static_cast<int>(std::floor(placement.u)) - rendered_w / 2;
    const int y_begin = std::max(0, top);
    const int y_end = std::min(dims.height, top + rendered_h);
    const int x_begin = std::max(0, left);
    const int x_end = std::min(dims.width, left + rendered_w);

    const double sy = static_cast<double>(pattern.height()) / rendered_h;
    const double sx = static_cast<double>(pattern.width()) / rendered_w;
    const bool native = rendered_h == pattern.height() && rendered_w == pattern.width();
    for (int y = y_begin; y < y_end; ++y) {
        const int i = y - top;
        for (int x = x_begin; x < x_end; ++x) {
            const int j = x - left;
            float* px = &out(y, x, 0);
            if (native) {
                for (int c = 0; c < 3; ++c) px[c] = pattern(i, j, c);
            } else {
                sample_bilinear(pattern, (i + 0.5) * sy - 0.5, (j + 0.5) * sx - 0.5, px);
            }
            for (int c = 0; c < 3; ++c) px[c] *= gain;
        }
    }
    return out;
}

ImagePlane compose_flare(const ImagePlane& image, std::span<const ImagePlane> contributions,
                         const FlareDraw& draw) {
    if (static_cast<int>(contributions.size()) != draw.source_count) {
        throw Error(ErrorKind::DimMismatch, "expected " + std::to_string(draw.source_count) +
                                                " contributions, got " +
                                                std::to_string(contributions.size()));
    }
    for (const auto& c : contributions) {
        if (!c.same_shape(image)) throw Error(ErrorKind::DimMismatch, "contribution shape differs from image");
    }
    const float gamma = static_cast<float>(draw.gamma);
    auto apply_gamma = [gamma](std::span<float> v) {
        for (float& x : v) x = x > 0.0f ? std::pow(x, gamma) : 0.0f;
    };

    ImagePlane out = image;
    simd::scale(out.values(), static_cast<float>(draw.brightness_scale));
    apply_gamma(out.values());

    std::vector<float> scratch(out.size());
    for (const auto& c : contributions) {
        std::copy(c.values().begin(), c.values().end(), scratch.begin());
        apply_gamma(scratch);
        simd::add(out.values(), scratch);
    }
    simd::clamp(out.values(), 0.0f, 1.0f);
    return out;
}

}  // namespace nightforge
