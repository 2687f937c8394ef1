// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#include "nightforge/fusion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "nightforge/random.hpp"
#include "nightforge/simd/kernels.hpp"

namespace nightforge {

template <typename Real>
Conv2d<Real>::Conv2d(int kernel_size, int in_ch, int out_ch)
    : kernel(kernel_size), in_channels(in_ch), out_channels(out_ch) {
    if (kernel_size < 1 || kernel_size % 2 == 0 || in_ch < 1 || out_ch < 1) {
        throw Error(ErrorKind::InvalidDims, "conv needs odd kernel and positive channel counts");
    }
    weight.assign(static_cast<std::size_t>(kernel) * kernel * in_channels * out_channels, Real{0});
    bias.assign(static_cast<std::size_t>(out_channels), Real{0});
}

template <typename Real>
Plane<Real> conv2d_same(const Plane<Real>& x, const Conv2d<Real>& conv) {
    if (x.channels() != conv.in_channels) {
        throw Error(ErrorKind::DimMismatch, "conv input has " + std::to_string(x.channels()) +
                                                " channels, expected " + std::to_string(conv.in_channels));
    }
    const int pad = conv.kernel / 2;
    const int co = conv.out_channels;
    Plane<Real> out(x.height(), x.width(), co);
    for (int h = 0; h < x.height(); ++h) {
        for (int w = 0; w < x.width(); ++w) {
            std::span<Real> acc(&out(h, w, 0), static_cast<std::size_t>(co));
            std::copy(conv.bias.begin(), conv.bias.end(), acc.begin());
            for (int ky = 0; ky < conv.kernel; ++ky) {
                const int yy = h + ky - pad;
                if (yy < 0 || yy >= x.height()) continue;
                for (int kx = 0; kx < conv.kernel; ++kx) {
                    const int xx = w + kx - pad;
                    if (xx < 0 || xx >= x.width()) continue;
                    for (int ci = 0; ci < conv.in_channels; ++ci) {
                        simd::axpy(acc, x(yy, xx, ci),
                                   std::span<const Real>(&conv.w(ky, kx, ci, 0), static_cast<std::size_t>(co)));
                    }
                }
            }
        }
    }
    return out;
}

template <typename Real>
void conv2d_same_backward(const Plane<Real>& x, const Conv2d<Real>& conv, const Plane<Real>& grad_out,
                          Plane<Real>& grad_x, Conv2d<Real>& grad_conv) {
    const int pad = conv.kernel / 2;
    const auto co = static_cast<std::size_t>(conv.out_channels);
    for (int h = 0; h < x.height(); ++h) {
        for (int w = 0; w < x.width(); ++w) {
            std::span<const Real> g(&grad_out(h, w, 0), co);
            simd::axpy(std::span<Real>(grad_conv.bias), Real{1}, g);
            for (int ky = 0; ky < conv.kernel; ++ky) {
                const int yy = h + ky - pad;
                if (yy < 0 || yy >= x.height()) continue;
                for (int kx = 0; kx < conv.kernel; ++kx) {
                    const int xx = w + kx - pad;
                    if (xx < 0 || xx >= x.width()) continue;
                    for (int ci = 0; ci < conv.in_channels; ++ci) {
                        simd::axpy(std::span<Real>(&grad_conv.w(ky, kx, ci, 0), co), x(yy, xx, ci), g);
                        grad_x(yy, xx, ci) += simd::dot(std::span<const Real>(&conv.w(ky, kx, ci, 0), co), g);
                    }
                }
            }
        }
    }
}

template <typename Real>
FusionParams<Real> FusionParams<Real>::zeros(int c1, int c2, int c3) {
    FusionParams p;
    p.image_channels = c1;
    p.guidance_channels = c2;
    p.hidden_channels = c3;
    for (int i = 0; i < 3; ++i) {
        p.branches[i] = Conv2d<Real>(kBranchKernels[i], c1 + c2, c3);
        p.attention[i] = Conv2d<Real>(1, c3, c3);
    }
    p.projection = Conv2d<Real>(1, c3, c1);
    return p;
}

template <typename Real>
FusionParams<Real> FusionParams<Real>::random(int c1, int c2, int c3, std::uint64_t seed) {
    FusionParams p = zeros(c1, c2, c3);
    Rng rng(seed);
    for (Conv2d<Real>* t : p.tensors()) {
        for (Real& v : t->weight) v = static_cast<Real>(uniform(rng, -0.1, 0.1));
    }
    return p;
}

template <typename Real>
void FusionParams<Real>::validate() const {
    auto shaped = [](const Conv2d<Real>& c, int k, int in, int out) {
        return c.kernel == k && c.in_channels == in && c.out_channels == out &&
               c.weight.size() == static_cast<std::size_t>(k) * k * in * out &&
               c.bias.size() == static_cast<std::size_t>(out);
    };
    bool ok = image_channels > 0 && guidance_channels > 0 && hidden_channels > 0;
    for (int i = 0; i < 3 && ok; ++i) {
        ok = shaped(branches[i], kBranchKernels[i], image_channels + guidance_channels, hidden_channels) &&
             shaped(attention[i], 1, hidden_channels, hidden_channels);
    }
    ok = ok && shaped(projection, 1, hidden_channels, image_channels);
    if (!ok) throw Error(ErrorKind::DimMismatch, "fusion parameter shapes are inconsistent");
}

template <typename Real>
std::array<Conv2d<Real>*, 7> FusionParams<Real>::tensors() {
    return {&branches[0], &branches[1], &branches[2], &attention[0], &attention[1], &attention[2], &projection};
}

template <typename Real>
std::array<const Conv2d<Real>*, 7> FusionParams<Real>::tensors() const {
    return {&branches[0], &branches[1], &branches[2], &attention[0], &attention[1], &attention[2], &projection};
}

template <typename Real>
std::string FusionParams<Real>::tensor_name(int index) {
    static const char* kNames[] = {"branch1x1", "branch3x3",   "branch5x5", "attention1",
                                   "attention2", "attention3", "projection"};
    return kNames[index];
}

ImagePlane illumination_guidance(const ImagePlane& image) {
    if (image.channels() != 3) {
        throw Error(ErrorKind::WrongChannelCount,
                    "illumination guidance expects 3 channels, got " + std::to_string(image.channels()));
    }
    ImagePlane out(image.height(), image.width(), 1);
    simd::active().channel_mean(image.values().data(), image.pixel_count(), 3, out.values().data());
    return out;
}

template <typename Real>
Plane<Real> concat_aux(const Plane<Real>& image, const Plane<Real>& guidance) {
    if (image.dims() != guidance.dims()) {
        throw Error(ErrorKind::DimMismatch, "image and guidance must share H x W");
    }
    const int c1 = image.channels();
    const int c2 = guidance.channels();
    Plane<Real> out(image.height(), image.width(), c1 + c2);
    for (int h = 0; h < image.height(); ++h) {
        for (int w = 0; w < image.width(); ++w) {
            for (int c = 0; c < c1; ++c) out(h, w, c) = image(h, w, c);
            for (int c = 0; c < c2; ++c) out(h, w, c1 + c) = guidance(h, w, c);
        }
    }
    return out;
}

template <typename Real>
FusionResult<Real> fusion_forward(const Plane<Real>& x, const FusionParams<Real>& params) {
    params.validate();
    if (x.channels() != params.image_channels + params.guidance_channels) {
        throw Error(ErrorKind::DimMismatch, "fusion input channel count does not match parameters");
    }
    FusionResult<Real> result;
    FusionTape<Real>& tape = result.tape;
    tape.params = params;
    tape.input = x;

    std::array<Plane<Real>, 3> logits;
    for (int i = 0; i < 3; ++i) {
        tape.features[i] = conv2d_same(x, params.branches[i]);
        logits[i] = conv2d_same(tape.features[i], params.attention[i]);
        tape.weights[i] = Plane<Real>(x.height(), x.width(), params.hidden_channels);
    }

    tape.fused = Plane<Real>(x.height(), x.width(), params.hidden_channels);
    const std::size_t n = tape.fused.size();
    for (std::size_t j = 0; j < n; ++j) {
        const Real l0 = logits[0].values()[j];
        const Real l1 = logits[1].values()[j];
        const Real l2 = logits[2].values()[j];
        const Real m = std::max({l0, l1, l2});
        const Real e0 = std::exp(l0 - m);
        const Real e1 = std::exp(l1 - m);
        const Real e2 = std::exp(l2 - m);
        const Real sum = e0 + e1 + e2;
        const Real a[3] = {e0 / sum, e1 / sum, e2 / sum};
        Real fused = 0;
        for (int i = 0; i < 3; ++i) {
            tape.weights[i].values()[j] = a[i];
            fused += a[i] * tape.features[i].values()[j];
        }
        tape.fused.values()[j] = fused;
    }
    result.output = conv2d_same(tape.fused, params.projection);
    return result;
}

template <typename Real>
FusionGradients<Real> fusion_backward(const FusionTape<Real>& tape, const Plane<Real>& grad_out) {
    const FusionParams<Real>& params = tape.params;
    try {
        params.validate();
    } catch (const Error&) {
        throw Error(ErrorKind::TapeMismatch, "tape parameters are inconsistent");
    }
    auto hidden_ok = [&](const Plane<Real>& p) {
        return p.dims() == tape.input.dims() && p.channels() == params.hidden_channels;
    };
    bool ok = tape.input.channels() == params.image_channels + params.guidance_channels &&
              hidden_ok(tape.fused);
    for (int i = 0; i < 3; ++i) ok = ok && hidden_ok(tape.features[i]) && hidden_ok(tape.weights[i]);
    if (!ok) throw Error(ErrorKind::TapeMismatch, "tape intermediates do not match the recorded forward pass");
    if (grad_out.dims() != tape.input.dims() || grad_out.channels() != params.image_channels) {
        throw Error(ErrorKind::TapeMismatch, "output gradient does not match the recorded forward pass");
    }
    const int hgt = tape.input.height();
    const int wid = tape.input.width();
    const int c3 = params.hidden_channels;

    FusionGradients<Real> grads;
    grads.params = FusionParams<Real>::zeros(params.image_channels, params.guidance_channels, c3);
    grads.input = Plane<Real>(hgt, wid, tape.input.channels());

    // Projection.
    Plane<Real> grad_fused(hgt, wid, c3);
    conv2d_same_backward(tape.fused, params.projection, grad_out, grad_fused, grads.params.projection);

    // Convex combination and softmax across scales.
    std::array<Plane<Real>, 3> grad_features;
    std::array<Plane<Real>, 3> grad_logits;
    for (int i = 0; i < 3; ++i) {
        grad_features[i] = Plane<Real>(hgt, wid, c3);
        grad_logits[i] = Plane<Real>(hgt, wid, c3);
    }
    const std::size_t n = grad_fused.size();
    for (std::size_t j = 0; j < n; ++j) {
        const Real g = grad_fused.values()[j];
        Real grad_alpha[3];
        Real weighted = 0;
        for (int i = 0; i < 3; ++i) {
            const Real a = tape.weights[i].values()[j];
            grad_features[i].values()[j] = a * g;
            grad_alpha[i] = tape.features[i].values()[j] * g;
            weighted += a * grad_alpha[i];
        }
        for (int i = 0; i < 3; ++i) {
            grad_logits[i].values()[j] = tape.weights[i].values()[j] * (grad_alpha[i] - weighted);
        }
    }

    // Attention maps feed back into the features, then the branch convs.
    for (int i = 0; i < 3; ++i) {
        conv2d_same_backward(tape.features[i], params.attention[i], grad_logits[i], grad_features[i],
                             grads.params.attention[i]);
        conv2d_same_backward(tape.input, params.branches[i], grad_features[i], grads.input,
                             grads.params.branches[i]);
    }
    return grads;
}

namespace {

double loss_sum(const Plane<double>& x, const FusionParams<double>& params) {
    const auto out = fusion_forward(x, params).output;
    double total = 0.0;
    for (double v : out.values()) total += v;
    return total;
}

struct ErrorTracker {
    GradCheckReport& report;
    void record(double analytic, double numeric, const std::string& entry) {
        const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
        const double rel = std::abs(analytic - numeric) / denom;
        ++report.entries_checked;
        if (report.entries_checked == 1 || rel > report.max_rel_error) {
            report.max_rel_error = rel;
            report.worst_entry = entry;
        }
    }
};

}  // namespace

GradCheckReport grad_check(const FusionParams<double>& params, const Plane<double>& x, double tol,
                           double step) {
    GradCheckReport report;
    ErrorTracker tracker{report};

    const auto fwd = fusion_forward(x, params);
    const Plane<double> ones(fwd.output.height(), fwd.output.width(), fwd.output.channels(), 1.0);
    const auto grads = fusion_backward(fwd.tape, ones);

    FusionParams<double> probe = params;
    auto probe_tensors = probe.tensors();
    auto grad_tensors = grads.params.tensors();
    for (int t = 0; t < 7; ++t) {
        auto check_vector = [&](std::vector<double>& values, const std::vector<double>& analytic,
                                const char* part) {
            for (std::size_t i = 0; i < values.size(); ++i) {
                const double saved = values[i];
                values[i] = saved + step;
                const double up = loss_sum(x, probe);
                values[i] = saved - step;
                const double down = loss_sum(x, probe);
                values[i] = saved;
                tracker.record(analytic[i], (up - down) / (2.0 * step),
                               FusionParams<double>::tensor_name(t) + "." + part + "[" +
                                   std::to_string(i) + "]");
            }
        };
        check_vector(probe_tensors[t]->weight, grad_tensors[t]->weight, "weight");
        check_vector(probe_tensors[t]->bias, grad_tensors[t]->bias, "bias");
    }

    Plane<double> xp = x;
    auto xv = xp.values();
    for (std::size_t i = 0; i < xv.size(); ++i) {
        const double saved = xv[i];
        xv[i] = saved + step;
        const double up = loss_sum(xp, params);
        xv[i] = saved - step;
        const double down = loss_sum(xp, params);
        xv[i] = saved;
        tracker.record(grads.input.values()[i], (up - down) / (2.0 * step),
                       "input[" + std::to_string(i) + "]");
    }
    report.passed = report.max_rel_error < tol;
    return report;
}

namespace {

constexpr char kMagic[4] = {'N', 'F', 'F', 'P'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4] = {};
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

double get_f64(std::istream& in) {
    unsigned char b[8] = {};
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

}  // namespace

void save_fusion_params(const std::filesystem::path& path, const FusionParams<double>& params) {
    params.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(params.image_channels));
    put_u32(out, static_cast<std::uint32_t>(params.guidance_channels));
    put_u32(out, static_cast<std::uint32_t>(params.hidden_channels));
    for (const Conv2d<double>* t : params.tensors()) {
        for (double v : t->weight) put_f64(out, v);
        for (double v : t->bias) put_f64(out, v);
    }
    if (!out) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

FusionParams<double> load_fusion_params(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw Error(ErrorKind::DecodeError, path.string() + ": not a fusion parameter file");
    }
    if (get_u32(in) != kVersion) throw Error(ErrorKind::DecodeError, path.string() + ": unsupported version");
    const auto c1 = get_u32(in);
    const auto c2 = get_u32(in);
    const auto c3 = get_u32(in);
    if (!in || c1 == 0 || c2 == 0 || c3 == 0 || c1 > 4096 || c2 > 4096 || c3 > 4096) {
        throw Error(ErrorKind::DecodeError, path.string() + ": bad shape header");
    }
    auto params = FusionParams<double>::zeros(static_cast<int>(c1), static_cast<int>(c2), static_cast<int>(c3));
    for (Conv2d<double>* t : params.tensors()) {
        for (double& v : t->weight) v = get_f64(in);
        for (double& v : t->bias) v = get_f64(in);
    }
    if (!in) throw Error(ErrorKind::DecodeError, path.string() + ": truncated parameter data");
    in.peek();
    if (!in.eof()) throw Error(ErrorKind::DecodeError, path.string() + ": trailing bytes after parameters");
    return params;
}

#define NIGHTFORGE_INSTANTIATE(Real)                                                                  \
    template struct Conv2d<Real>;                                                                     \
    template struct FusionParams<Real>;                                                               \
    template Plane<Real> conv2d_same(const Plane<Real>&, const Conv2d<Real>&);                        \
    template void conv2d_same_backward(const Plane<Real>&, const Conv2d<Real>&, const Plane<Real>&,   \
                                       Plane<Real>&, Conv2d<Real>&);                                  \
    template Plane<Real> concat_aux(const Plane<Real>&, const Plane<Real>&);                          \
    template FusionResult<Real> fusion_forward(const Plane<Real>&, const FusionParams<Real>&);        \
    template FusionGradients<Real> fusion_backward(const FusionTape<Real>&, const Plane<Real>&);

NIGHTFORGE_INSTANTIATE(float)
NIGHTFORGE_INSTANTIATE(double)

#undef NIGHTFORGE_INSTANTIATE

}  // namespace nightforge
