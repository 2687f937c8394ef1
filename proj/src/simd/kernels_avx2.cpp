// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

// Compiled with -mavx2 on x86-64 only. Never call into this file without a
// runtime check; dispatch.cpp owns that.

#include "kernels_internal.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

namespace nightforge::simd {
namespace {

void add(float* dst, const float* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 a = _mm256_loadu_ps(dst + i);
        const __m256 b = _mm256_loadu_ps(src + i);
        _mm256_storeu_ps(dst + i, _mm256_add_ps(a, b));
    }
    for (; i < n; ++i) dst[i] += src[i];
}

void add_scalar(float* dst, float value, std::size_t n) {
    const __m256 v = _mm256_set1_ps(value);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        _mm256_storeu_ps(dst + i, _mm256_add_ps(_mm256_loadu_ps(dst + i), v));
    }
    for (; i < n; ++i) dst[i] += value;
}

void scale(float* dst, float factor, std::size_t n) {
    const __m256 f = _mm256_set1_ps(factor);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        _mm256_storeu_ps(dst + i, _mm256_mul_ps(_mm256_loadu_ps(dst + i), f));
    }
    for (; i < n; ++i) dst[i] *= factor;
}

void clamp(float* dst, float lo, float hi, std::size_t n) {
    const __m256 vlo = _mm256_set1_ps(lo);
    const __m256 vhi = _mm256_set1_ps(hi);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        // Operand order mirrors clamp_one so signed zeros and NaN match.
        __m256 x = _mm256_max_ps(vlo, _mm256_loadu_ps(dst + i));
        x = _mm256_min_ps(vhi, x);
        _mm256_storeu_ps(dst + i, x);
    }
    for (; i < n; ++i) dst[i] = clamp_one(dst[i], lo, hi);
}

void channel_mean(const float* src, std::size_t pixels, std::size_t channels, float* dst) {
    const int stride = static_cast<int>(channels);
    const __m256i lane_offsets = _mm256_mullo_epi32(
        _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7), _mm256_set1_epi32(stride));
    const __m256 count = _mm256_set1_ps(static_cast<float>(channels));
    std::size_t p = 0;
    for (; p + 8 <= pixels; p += 8) {
        const float* base = src + p * channels;
        __m256 acc = _mm256_i32gather_ps(base, lane_offsets, 4);
        for (std::size_t c = 1; c < channels; ++c) {
            acc = _mm256_add_ps(acc, _mm256_i32gather_ps(base + c, lane_offsets, 4));
        }
        _mm256_storeu_ps(dst + p, _mm256_div_ps(acc, count));
    }
    channel_mean_tail(src, p, pixels, channels, dst);
}

void axpy_f32(float* y, float a, const float* x, std::size_t n) {
    const __m256 va = _mm256_set1_ps(a);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 prod = _mm256_mul_ps(va, _mm256_loadu_ps(x + i));
        _mm256_storeu_ps(y + i, _mm256_add_ps(_mm256_loadu_ps(y + i), prod));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void axpy_f64(double* y, double a, const double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

float hsum(__m256 v) {
    const __m128 lo = _mm256_castps256_ps128(v);
    const __m128 hi = _mm256_extractf128_ps(v, 1);
    __m128 s = _mm_add_ps(lo, hi);
    s = _mm_add_ps(s, _mm_movehl_ps(s, s));
    s = _mm_add_ss(s, _mm_shuffle_ps(s, s, 0x55));
    return _mm_cvtss_f32(s);
}

double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

float dot_f32(const float* a, const float* b, std::size_t n) {
    __m256 acc = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc = _mm256_add_ps(acc, _mm256_mul_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i)));
    }
    float total = hsum(acc);
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

double dot_f64(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

DepthErrorSums depth_error_sums(const double* pred, const double* gt, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d abs_rel = _mm256_setzero_pd();
    __m256d sq_rel = _mm256_setzero_pd();
    __m256d sq = _mm256_setzero_pd();
    __m256d thr[3];
    for (int k = 0; k < 3; ++k) thr[k] = _mm256_set1_pd(kDeltaThreshold[k]);

    DepthErrorSums sums;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d p = _mm256_loadu_pd(pred + i);
        const __m256d g = _mm256_loadu_pd(gt + i);
        const __m256d d = _mm256_sub_pd(p, g);
        const __m256d d2 = _mm256_mul_pd(d, d);
        abs_rel = _mm256_add_pd(abs_rel, _mm256_div_pd(_mm256_andnot_pd(sign, d), g));
        sq_rel = _mm256_add_pd(sq_rel, _mm256_div_pd(d2, g));
        sq = _mm256_add_pd(sq, d2);
        const __m256d ratio = _mm256_max_pd(_mm256_div_pd(g, p), _mm256_div_pd(p, g));
        for (int k = 0; k < 3; ++k) {
            const int mask = _mm256_movemask_pd(_mm256_cmp_pd(ratio, thr[k], _CMP_LT_OQ));
            sums.delta[k] += static_cast<std::uint64_t>(__builtin_popcount(mask));
        }
    }
    sums.abs_rel = hsum(abs_rel);
    sums.sq_rel = hsum(sq_rel);
    sums.sq = hsum(sq);
    depth_error_tail(pred, gt, i, n, sums);
    return sums;
}

}  // namespace

const KernelTable* avx2_kernels() noexcept {
    static constexpr KernelTable table{
        Isa::avx2,    add,      add_scalar, scale,   clamp,
        channel_mean, axpy_f32, axpy_f64,   dot_f32, dot_f64,
        depth_error_sums,
    };
    return &table;
}

}  // namespace nightforge::simd

#else

namespace nightforge::simd {
const KernelTable* avx2_kernels() noexcept { return nullptr; }
}  // namespace nightforge::simd

#endif
