// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#pragma once

// Scalar element routines shared by every table so that vector tails and
// the scalar reference compute exactly the same expression.

#include "nightforge/simd/kernels.hpp"

namespace nightforge::simd {

inline constexpr double kDeltaThreshold[3] = {1.25, 1.25 * 1.25, 1.25 * 1.25 * 1.25};

inline float clamp_one(float v, float lo, float hi) noexcept {
    const float x = lo > v ? lo : v;
    return hi < x ? hi : x;
}

inline void channel_mean_tail(const float* src, std::size_t begin, std::size_t end,
                              std::size_t channels, float* dst) noexcept {
    const float count = static_cast<float>(channels);
    for (std::size_t p = begin; p < end; ++p) {
        const float* px = src + p * channels;
        float acc = px[0];
        for (std::size_t c = 1; c < channels; ++c) acc += px[c];
        dst[p] = acc / count;
    }
}

inline void depth_error_tail(const double* pred, const double* gt, std::size_t begin,
                             std::size_t end, DepthErrorSums& sums) noexcept {
    for (std::size_t i = begin; i < end; ++i) {
        const double p = pred[i];
        const double g = gt[i];
        const double d = p - g;
        sums.abs_rel += (d < 0 ? -d : d) / g;
        sums.sq_rel += d * d / g;
        sums.sq += d * d;
        const double a = p / g;
        const double b = g / p;
        const double ratio = a > b ? a : b;
        for (int k = 0; k < 3; ++k) sums.delta[k] += ratio < kDeltaThreshold[k] ? 1 : 0;
    }
}

}  // namespace nightforge::simd
