// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#pragma once

#include <cstdint>
#include <vector>

#include "nightforge/plane.hpp"
#include "nightforge/random.hpp"

namespace nightforge {

/// Physical noise parameters for one frame, in normalized [0,1] signal units.
struct NoiseModel {
    double gain = 0.0;          // K; 0 selects the noiseless limit of K * Poisson(s / K)
    double read_sigma = 0.0;    // std-dev of Gaussian read noise
    double row_variance = 0.0;  // variance of the per-row (or per-column) offset
    double quant_step = 0.0;    // width of the uniform quantization noise
    std::uint64_t seed = 0;

    /// Throws InvalidConfig.
    void validate() const;

    friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

/// Sampling ranges. Read noise follows a log-linear calibration against
/// the gain: ln sigma = slope * ln K + intercept + N(0, scatter^2).
struct NoiseModelRanges {
    double gain_min = 0.01;
    double gain_max = 0.2;
    double read_slope = 0.85;
    double read_intercept = -1.6;
    double read_scatter = 0.25;
    double row_variance_min = 1e-6;
    double row_variance_max = 4e-4;
    double quant_step_min = 1.0 / 255.0;
    double quant_step_max = 1.0 / 255.0;

    /// Throws InvalidConfig.
    void validate() const;
};

enum class BandOrientation { rows, columns };

/// Draw order: gain (log-uniform), read scatter (normal), row variance,
/// quant step (uniform), then the 64-bit noise seed. Throws InvalidConfig.
NoiseModel sample_noise_model(const NoiseModelRanges& ranges, Rng& rng);

/// out = K * Poisson(signal / K). gain == 0 copies the input. Throws
/// NegativeSignal for any negative or non-finite sample.
ImagePlane apply_shot_noise(const ImagePlane& signal, double gain, Rng& rng);

/// out = signal + N(0, sigma^2). sigma == 0 returns an exact copy.
ImagePlane apply_read_noise(const ImagePlane& signal, double sigma, Rng& rng);

/// One N(0, variance) offset per row (or column), in draw order.
std::vector<float> draw_band_offsets(int count, double variance, Rng& rng);

/// Adds one shared offset per row (or column) to every pixel and channel
/// of that band.
ImagePlane apply_row_noise(const ImagePlane& signal, double variance, Rng& rng,
                           BandOrientation orientation = BandOrientation::rows);

/// Adds precomputed band offsets: out = signal + offsets[band].
ImagePlane add_band_offsets(const ImagePlane& signal, std::span<const float> offsets,
                            BandOrientation orientation = BandOrientation::rows);

/// out = signal + U(-step/2, step/2).
ImagePlane apply_quant_noise(const ImagePlane& signal, double step, Rng& rng);

/// shot -> read -> row -> quant, each component driven by its own stream
/// derived from model.seed. No clamping.
ImagePlane apply_noise_unclamped(const ImagePlane& flare_image, const NoiseModel& model,
                                 BandOrientation orientation = BandOrientation::rows);

/// apply_noise_unclamped followed by a clamp to [0, 1].
ImagePlane apply_noise(const ImagePlane& flare_image, const NoiseModel& model,
                       BandOrientation orientation = BandOrientation::rows);

}  // namespace nightforge
