// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#pragma once

// Illumination-guided multiscale feature fusion.
//
//   guidance = mean over channels of the low-light image
//   x        = concat(image, guidance)                      H x W x (C1 + C2)
//   E_i      = conv_{k_i}(x), k = 1, 3, 5, zero "same" pad  H x W x C3
//   l_i      = W_i E_i + b_i   (pointwise C3 -> C3)
//   alpha_i  = softmax over i of (l_1, l_2, l_3), per (h, w, c)
//   fused    = sum_i alpha_i * E_i
//   output   = conv_{1x1}(fused)                             H x W x C1
//
// The softmax runs across the three scales at every position so that the
// attention weights form a convex combination of the branch features.

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nightforge/plane.hpp"

namespace nightforge {

template <typename Real>
using FeaturePlane = Plane<Real>;

inline constexpr std::array<int, 3> kBranchKernels{1, 3, 5};

/// Square convolution, stride 1, zero padding kernel / 2 (same output size).
/// Weight layout [ky][kx][ci][co]: the innermost run is one output-channel
/// vector so the hot loop is an axpy.
template <typename Real>
struct Conv2d {
    int kernel = 1;
    int in_channels = 0;
    int out_channels = 0;
    std::vector<Real> weight;
    std::vector<Real> bias;

    Conv2d() = default;
    Conv2d(int kernel_size, int in_ch, int out_ch);

    std::size_t weight_index(int ky, int kx, int ci, int co) const noexcept {
        return ((static_cast<std::size_t>(ky) * kernel + kx) * in_channels + ci) * out_channels + co;
    }
    Real& w(int ky, int kx, int ci, int co) noexcept { return weight[weight_index(ky, kx, ci, co)]; }
    const Real& w(int ky, int kx, int ci, int co) const noexcept {
        return weight[weight_index(ky, kx, ci, co)];
    }

    friend bool operator==(const Conv2d&, const Conv2d&) = default;
};

template <typename Real>
Plane<Real> conv2d_same(const Plane<Real>& x, const Conv2d<Real>& conv);

/// Accumulates into grad_x (same shape as x) and grad_conv (same shape as conv).
template <typename Real>
void conv2d_same_backward(const Plane<Real>& x, const Conv2d<Real>& conv,
                          const Plane<Real>& grad_out, Plane<Real>& grad_x, Conv2d<Real>& grad_conv);

template <typename Real>
struct FusionParams {
    int image_channels = 0;     // C1
    int guidance_channels = 0;  // C2
    int hidden_channels = 0;    // C3
    std::array<Conv2d<Real>, 3> branches;   // k x k, (C1 + C2) -> C3
    std::array<Conv2d<Real>, 3> attention;  // 1 x 1, C3 -> C3 (W_i, b_i)
    Conv2d<Real> projection;                // 1 x 1, C3 -> C1

    static FusionParams zeros(int c1, int c2, int c3);
    /// Every weight ~ U(-0.1, 0.1) from a seeded stream, every bias 0.
    static FusionParams random(int c1, int c2, int c3, std::uint64_t seed);

    /// Throws DimMismatch if any tensor disagrees with the channel counts.
    void validate() const;

    /// The seven tensors in serialization order: branches, attention, projection.
    std::array<Conv2d<Real>*, 7> tensors();
    std::array<const Conv2d<Real>*, 7> tensors() const;
    static std::string tensor_name(int index);

    friend bool operator==(const FusionParams&, const FusionParams&) = default;
};

template <typename To, typename From>
FusionParams<To> params_cast(const FusionParams<From>& p) {
    FusionParams<To> out;
    out.image_channels = p.image_channels;
    out.guidance_channels = p.guidance_channels;
    out.hidden_channels = p.hidden_channels;
    auto src = p.tensors();
    auto dst = out.tensors();
    for (std::size_t t = 0; t < src.size(); ++t) {
        *dst[t] = Conv2d<To>(src[t]->kernel, src[t]->in_channels, src[t]->out_channels);
        for (std::size_t i = 0; i < src[t]->weight.size(); ++i) dst[t]->weight[i] = static_cast<To>(src[t]->weight[i]);
        for (std::size_t i = 0; i < src[t]->bias.size(); ++i) dst[t]->bias[i] = static_cast<To>(src[t]->bias[i]);
    }
    return out;
}

/// Intermediates cached by the forward pass; owned by one forward/backward pair.
template <typename Real>
struct FusionTape {
    FusionParams<Real> params;
    Plane<Real> input;
    std::array<Plane<Real>, 3> features;  // E_i
    std::array<Plane<Real>, 3> weights;   // alpha_i
    Plane<Real> fused;
};

template <typename Real>
struct FusionResult {
    Plane<Real> output;
    FusionTape<Real> tape;
};

template <typename Real>
struct FusionGradients {
    Plane<Real> input;
    FusionParams<Real> params;
};

/// Mean over channels; H x W x 3 -> H x W x 1. Throws WrongChannelCount.
ImagePlane illumination_guidance(const ImagePlane& image);

/// Channels [0, C1) from `image`, [C1, C1 + C2) from `guidance`. Throws DimMismatch.
template <typename Real>
Plane<Real> concat_aux(const Plane<Real>& image, const Plane<Real>& guidance);

/// Throws DimMismatch.
template <typename Real>
FusionResult<Real> fusion_forward(const Plane<Real>& x, const FusionParams<Real>& params);

/// Gradients of a scalar loss whose gradient w.r.t. the output is
/// `grad_out`. Throws TapeMismatch.
template <typename Real>
FusionGradients<Real> fusion_backward(const FusionTape<Real>& tape, const Plane<Real>& grad_out);

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::string worst_entry;
    std::size_t entries_checked = 0;
    bool passed = false;
};

/// Compares analytic gradients of L = sum(output) against central finite
/// differences for every parameter and input element. Relative error is
/// |a - n| / max(|a|, |n|, 1e-6); passes iff the maximum is < tol.
GradCheckReport grad_check(const FusionParams<double>& params, const Plane<double>& x, double tol,
                           double step = 1e-4);

/// Binary parameter file, all integers and reals little-endian:
///   bytes 0-3   magic "NFFP"
///   u32         version (1)
///   u32 x 3     C1, C2, C3
///   f64 ...     for each tensor in tensors() order: weight [ky][kx][ci][co], then bias [co]
/// Tensor shapes follow from (C1, C2, C3); the file size must match exactly.
void save_fusion_params(const std::filesystem::path& path, const FusionParams<double>& params);
FusionParams<double> load_fusion_params(const std::filesystem::path& path);

}  // namespace nightforge
