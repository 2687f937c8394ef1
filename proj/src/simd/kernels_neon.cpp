// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

// AArch64 Advanced SIMD table. NEON is mandatory on AArch64, so no runtime
// feature probe is needed beyond the compile-time guard.

#include "kernels_internal.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

namespace nightforge::simd {
namespace {

void add(float* dst, const float* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) vst1q_f32(dst + i, vaddq_f32(vld1q_f32(dst + i), vld1q_f32(src + i)));
    for (; i < n; ++i) dst[i] += src[i];
}

void add_scalar(float* dst, float value, std::size_t n) {
    const float32x4_t v = vdupq_n_f32(value);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) vst1q_f32(dst + i, vaddq_f32(vld1q_f32(dst + i), v));
    for (; i < n; ++i) dst[i] += value;
}

void scale(float* dst, float factor, std::size_t n) {
    const float32x4_t f = vdupq_n_f32(factor);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) vst1q_f32(dst + i, vmulq_f32(vld1q_f32(dst + i), f));
    for (; i < n; ++i) dst[i] *= factor;
}

void clamp(float* dst, float lo, float hi, std::size_t n) {
    const float32x4_t vlo = vdupq_n_f32(lo);
    const float32x4_t vhi = vdupq_n_f32(hi);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        // Compare-and-select keeps the scalar semantics for signed zeros and NaN.
        float32x4_t x = vld1q_f32(dst + i);
        x = vbslq_f32(vcgtq_f32(vlo, x), vlo, x);
        x = vbslq_f32(vcltq_f32(vhi, x), vhi, x);
        vst1q_f32(dst + i, x);
    }
    for (; i < n; ++i) dst[i] = clamp_one(dst[i], lo, hi);
}

void channel_mean(const float* src, std::size_t pixels, std::size_t channels, float* dst) {
    std::size_t p = 0;
    if (channels == 3) {
        const float32x4_t count = vdupq_n_f32(3.0f);
        for (; p + 4 <= pixels; p += 4) {
            const float32x4x3_t px = vld3q_f32(src + p * 3);
            const float32x4_t acc = vaddq_f32(vaddq_f32(px.val[0], px.val[1]), px.val[2]);
            vst1q_f32(dst + p, vdivq_f32(acc, count));
        }
    }
    channel_mean_tail(src, p, pixels, channels, dst);
}

void axpy_f32(float* y, float a, const float* x, std::size_t n) {
    const float32x4_t va = vdupq_n_f32(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        vst1q_f32(y + i, vaddq_f32(vld1q_f32(y + i), vmulq_f32(va, vld1q_f32(x + i))));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void axpy_f64(double* y, double a, const double* x, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

float dot_f32(const float* a, const float* b, std::size_t n) {
    float32x4_t acc = vdupq_n_f32(0.0f);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = vaddq_f32(acc, vmulq_f32(vld1q_f32(a + i), vld1q_f32(b + i)));
    float total = vaddvq_f32(acc);
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

double dot_f64(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

DepthErrorSums depth_error_sums(const double* pred, const double* gt, std::size_t n) {
    float64x2_t abs_rel = vdupq_n_f64(0.0);
    float64x2_t sq_rel = vdupq_n_f64(0.0);
    float64x2_t sq = vdupq_n_f64(0.0);
    DepthErrorSums sums;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t p = vld1q_f64(pred + i);
        const float64x2_t g = vld1q_f64(gt + i);
        const float64x2_t d = vsubq_f64(p, g);
        const float64x2_t d2 = vmulq_f64(d, d);
        abs_rel = vaddq_f64(abs_rel, vdivq_f64(vabsq_f64(d), g));
        sq_rel = vaddq_f64(sq_rel, vdivq_f64(d2, g));
        sq = vaddq_f64(sq, d2);
        const float64x2_t ratio = vmaxq_f64(vdivq_f64(p, g), vdivq_f64(g, p));
        for (int k = 0; k < 3; ++k) {
            const uint64x2_t lt = vcltq_f64(ratio, vdupq_n_f64(kDeltaThreshold[k]));
            sums.delta[k] += (vgetq_lane_u64(lt, 0) & 1) + (vgetq_lane_u64(lt, 1) & 1);
        }
    }
    sums.abs_rel = vaddvq_f64(abs_rel);
    sums.sq_rel = vaddvq_f64(sq_rel);
    sums.sq = vaddvq_f64(sq);
    depth_error_tail(pred, gt, i, n, sums);
    return sums;
}

}  // namespace

const KernelTable* neon_kernels() noexcept {
    static constexpr KernelTable table{
        Isa::neon,    add,      add_scalar, scale,   clamp,
        channel_mean, axpy_f32, axpy_f64,   dot_f32, dot_f64,
        depth_error_sums,
    };
    return &table;
}

}  // namespace nightforge::simd

#else

namespace nightforge::simd {
const KernelTable* neon_kernels() noexcept { return nullptr; }
}  // namespace nightforge::simd

#endif
