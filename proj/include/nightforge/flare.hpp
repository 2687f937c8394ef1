// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#pragma once

#include <array>
#include <span>
#include <vector>

#include "nightforge/assets.hpp"
#include "nightforge/plane.hpp"
#include "nightforge/random.hpp"

namespace nightforge {

/// Light sources farther than this are rejected.
inline constexpr double kMaxLightDepth = 20.0;

/// Pinhole intrinsics K = [[fx, 0, cx], [0, fy, cy], [0, 0, 1]] in pixels.
struct CameraIntrinsics {
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.0;
    double cy = 0.0;

    /// Focal length max(H, W), principal point at the image center. Used
    /// when the input dataset carries no calibration.
    static CameraIntrinsics centered(Dims dims);

    /// Throws InvalidConfig unless fx > 0 and fy > 0.
    void validate() const;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct LightPlacement {
    double u = 0.0;  // pixels
    double v = 0.0;  // pixels
    double z = 0.0;  // meters
    Vec3 p3d;        // z * K^-1 (u, v, 1)
};

/// Back-projects (u, v) at depth z. Throws DepthOutOfRange unless
/// 0 < z <= z_max.
LightPlacement place_light(const CameraIntrinsics& intr, double u, double v, double z,
                           double z_max = kMaxLightDepth);

/// Pixel coordinates of a camera-space point.
std::array<double, 2> project(const CameraIntrinsics& intr, const Vec3& p);

/// Per-frame flare randomness.
struct FlareDraw {
    double brightness_scale = 1.0;  // multiplies the daylight image before gamma
    double gamma = 1.0;             // applied to the base image and to every source
    double peak_intensity = 1.0;    // total intensity budget
    double source_scale = 1.0;      // per-source intensity factor
    int source_count = 1;

    friend bool operator==(const FlareDraw&, const FlareDraw&) = default;
};

struct FlareConfig {
    double source_scale_min = 0.5;
    double source_scale_max = 4.0;
    double peak_min = 1.0;
    double peak_max = 12.0;
    double brightness_min = 0.4;
    double brightness_max = 1.0;
    double gamma_min = 1.8;
    double gamma_max = 2.2;
    double depth_min = 1.0;  // placement depth ~ U(depth_min, depth_max]
    double depth_max = kMaxLightDepth;
    double reference_depth = 5.0;  // depth at which an asset renders at native size
    bool depth_attenuation = false;  // extra (reference_depth / z)^2 intensity factor

    /// Throws InvalidConfig.
    void validate() const;
};

/// max(floor(peak / scale + 0.5), 1).
int source_count(double peak_intensity, double source_scale);

/// Draw order: source scale, peak intensity (both log-uniform), brightness
/// scale, gamma (both uniform). Throws InvalidConfig.
FlareDraw sample_flare_draw(const FlareConfig& cfg, Rng& rng);

/// (u, v) uniform over the frame, z uniform over (depth_min, depth_max].
LightPlacement sample_placement(const CameraIntrinsics& intr, Dims dims, const FlareConfig& cfg,
                                Rng& rng);

/// Scales the asset's intensity by `source_scale` and its size by
/// reference_depth / z, centers it at (u, v) and crops it to `dims`. Pixels
/// not covered by the pattern are zero. Throws InvalidDims.
ImagePlane render_source(const LightAsset& asset, const LightPlacement& placement,
                         double source_scale, Dims dims, const FlareConfig& cfg = {});

/// I_F = (s_b * I)^g + sum_i c_i^g, clamped to [0, 1]. The gamma is applied
/// to the base image and to each source separately, never to the sum.
/// Throws DimMismatch on shape mismatch or if the contribution count is not
/// draw.source_count.
ImagePlane compose_flare(const ImagePlane& image, std::span<const ImagePlane> contributions,
                         const FlareDraw& draw);

}  // namespace nightforge
