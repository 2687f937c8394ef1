// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#include "kernels_internal.hpp"

namespace nightforge::simd {
namespace {

void add(float* dst, const float* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}

void add_scalar(float* dst, float value, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += value;
}

void scale(float* dst, float factor, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] *= factor;
}

void clamp(float* dst, float lo, float hi, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = clamp_one(dst[i], lo, hi);
}

void channel_mean(const float* src, std::size_t pixels, std::size_t channels, float* dst) {
    channel_mean_tail(src, 0, pixels, channels, dst);
}

void axpy_f32(float* y, float a, const float* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpy_f64(double* y, double a, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

float dot_f32(const float* a, const float* b, std::size_t n) {
    float acc = 0.0f;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double dot_f64(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

DepthErrorSums depth_error_sums(const double* pred, const double* gt, std::size_t n) {
    DepthErrorSums sums;
    depth_error_tail(pred, gt, 0, n, sums);
    return sums;
}

}  // namespace

const KernelTable& scalar_table() noexcept {
    static constexpr KernelTable table{
        Isa::scalar, add,      add_scalar, scale,   clamp,
        channel_mean, axpy_f32, axpy_f64,   dot_f32, dot_f64,
        depth_error_sums,
    };
    return table;
}

}  // namespace nightforge::simd
