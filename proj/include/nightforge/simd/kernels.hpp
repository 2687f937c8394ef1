// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#pragma once

// Data-parallel inner loops used by the synthesis pipeline, the fusion
// kernels and the depth metrics. Each instruction set provides one
// KernelTable; the active table is chosen once at first use from CPU
// features (overridable with NIGHTFORGE_SIMD=scalar|avx2|neon).
//
// Elementwise kernels are bit-identical across tables: no FMA contraction,
// same operation order per element. Reductions (dot, depth_error_sums) may
// differ in the last bits because lanes are summed in a different order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace nightforge::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

/// Sums over valid (pred, gt) pairs, already clamped and masked.
struct DepthErrorSums {
    double abs_rel = 0.0;   // sum |p - g| / g
    double sq_rel = 0.0;    // sum (p - g)^2 / g
    double sq = 0.0;        // sum (p - g)^2
    std::uint64_t delta[3] = {0, 0, 0};  // count max(p/g, g/p) < 1.25^k
};

struct KernelTable {
    Isa isa;

    // dst[i] += src[i]
    void (*add)(float* dst, const float* src, std::size_t n);
    // dst[i] += value
    void (*add_scalar)(float* dst, float value, std::size_t n);
    // dst[i] *= factor
    void (*scale)(float* dst, float factor, std::size_t n);
    // dst[i] = dst[i] < lo ? lo : (dst[i] > hi ? hi : dst[i])
    void (*clamp)(float* dst, float lo, float hi, std::size_t n);
    // dst[p] = (src[p*C] + ... + src[p*C + C-1]) / C, summed left to right
    void (*channel_mean)(const float* src, std::size_t pixels, std::size_t channels, float* dst);

    // y[i] += a * x[i]
    void (*axpy_f32)(float* y, float a, const float* x, std::size_t n);
    void (*axpy_f64)(double* y, double a, const double* x, std::size_t n);
    float (*dot_f32)(const float* a, const float* b, std::size_t n);
    double (*dot_f64)(const double* a, const double* b, std::size_t n);

    DepthErrorSums (*depth_error_sums)(const double* pred, const double* gt, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
/// nullptr when the table was not compiled in or the CPU lacks the feature.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

const KernelTable* table_for(Isa isa) noexcept;
std::vector<Isa> supported_isas();

/// Table used by the library. Resolved once, thread-safe.
const KernelTable& active() noexcept;

// Span front-ends over the active table.

inline void add(std::span<float> dst, std::span<const float> src) {
    active().add(dst.data(), src.data(), dst.size());
}
inline void add_scalar(std::span<float> dst, float value) {
    active().add_scalar(dst.data(), value, dst.size());
}
inline void scale(std::span<float> dst, float factor) {
    active().scale(dst.data(), factor, dst.size());
}
inline void clamp(std::span<float> dst, float lo, float hi) {
    active().clamp(dst.data(), lo, hi, dst.size());
}
inline void axpy(std::span<float> y, float a, std::span<const float> x) {
    active().axpy_f32(y.data(), a, x.data(), y.size());
}
inline void axpy(std::span<double> y, double a, std::span<const double> x) {
    active().axpy_f64(y.data(), a, x.data(), y.size());
}
inline float dot(std::span<const float> a, std::span<const float> b) {
    return active().dot_f32(a.data(), b.data(), a.size());
}
inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot_f64(a.data(), b.data(), a.size());
}

}  // namespace nightforge::simd
