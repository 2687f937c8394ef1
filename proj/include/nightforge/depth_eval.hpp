// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "nightforge/plane.hpp"

namespace nightforge {

enum class Alignment { none, median };

std::string_view to_string(Alignment a) noexcept;
/// "none" or "median"; throws InvalidConfig otherwise.
Alignment parse_alignment(std::string_view text);

struct EvalConfig {
    double max_depth = 80.0;
    double min_depth = 1e-3;
    Alignment alignment = Alignment::none;
    bool clamp_prediction = true;

    /// Throws InvalidConfig unless 0 < min_depth < max_depth.
    void validate() const;
};

/// Standard monocular depth metrics over the valid pixels of one image.
struct MetricsReport {
    double abs_rel = 0.0;   // mean |p - g| / g
    double sq_rel = 0.0;    // mean (p - g)^2 / g
    double rmse = 0.0;      // sqrt(mean (p - g)^2)
    double rmse_log = 0.0;  // sqrt(mean (ln p - ln g)^2)
    double delta[3] = {0.0, 0.0, 0.0};  // fraction with max(p/g, g/p) < 1.25^k
    std::uint64_t n_valid = 0;
};

/// pred * median(gt | mask) / median(pred | mask). Even counts use the mean
/// of the two middle samples. Throws EmptyMask, ZeroMedian, DimMismatch.
DepthMap align_median(const DepthMap& pred, const DepthMap& gt, std::span<const std::uint8_t> mask);

/// A pixel counts when its gt sample is flagged valid and lies in
/// [min_depth, max_depth] and its prediction is finite. Predictions are
/// clamped to the same range (unless disabled) after optional median
/// alignment over that mask.
/// Throws EmptyMask, DimMismatch.
MetricsReport compute_metrics(const DepthMap& pred, const DepthMap& gt, const EvalConfig& cfg);

/// Pixel-weighted combination. Each mean metric is turned back into its
/// sum (mean * n), sums are added, and the totals are re-normalized; the
/// root metrics combine as sqrt(sum n_i * rmse_i^2 / sum n_i). Reports with
/// n_valid == 0 contribute nothing. Throws EmptyList.
MetricsReport aggregate(std::span<const MetricsReport> reports);

}  // namespace nightforge
