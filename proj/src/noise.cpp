// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#include "nightforge/noise.hpp"

#include <cmath>
#include <random>

#include "nightforge/simd/kernels.hpp"

namespace nightforge {
namespace {

// Stream indices under model.seed.
constexpr std::uint64_t kShotStream = 1;
constexpr std::uint64_t kReadStream = 2;
constexpr std::uint64_t kRowStream = 3;
constexpr std::uint64_t kQuantStream = 4;

}  // namespace

void NoiseModel::validate() const {
    const bool ok = gain >= 0.0 && read_sigma >= 0.0 && row_variance >= 0.0 && quant_step >= 0.0 &&
                    std::isfinite(gain) && std::isfinite(read_sigma) &&
                    std::isfinite(row_variance) && std::isfinite(quant_step);
    if (!ok) throw Error(ErrorKind::InvalidConfig, "noise parameters must be finite and >= 0");
}

void NoiseModelRanges::validate() const {
    const bool ok = gain_min > 0.0 && gain_min <= gain_max && std::isfinite(gain_max) &&
                    std::isfinite(read_slope) && std::isfinite(read_intercept) &&
                    read_scatter >= 0.0 && row_variance_min >= 0.0 &&
                    row_variance_min <= row_variance_max && quant_step_min >= 0.0 &&
                    quant_step_min <= quant_step_max && std::isfinite(row_variance_max) &&
                    std::isfinite(quant_step_max);
    if (!ok) throw Error(ErrorKind::InvalidConfig, "noise ranges must be non-negative and ordered");
}

NoiseModel sample_noise_model(const NoiseModelRanges& ranges, Rng& rng) {
    ranges.validate();
    NoiseModel model;
    model.gain = log_uniform(rng, ranges.gain_min, ranges.gain_max);
    const double scatter = std::normal_distribution<double>(0.0, 1.0)(rng) * ranges.read_scatter;
    model.read_sigma = std::exp(ranges.read_slope * std::log(model.gain) + ranges.read_intercept + scatter);
    model.row_variance = uniform(rng, ranges.row_variance_min, ranges.row_variance_max);
    model.quant_step = uniform(rng, ranges.quant_step_min, ranges.quant_step_max);
    model.seed = rng();
    return model;
}

ImagePlane apply_shot_noise(const ImagePlane& signal, double gain, Rng& rng) {
    for (float s : signal.values()) {
        if (!(s >= 0.0f) || !std::isfinite(s)) {
            throw Error(ErrorKind::NegativeSignal, "shot noise needs a finite non-negative signal");
        }
    }
    if (!(gain >= 0.0) || !std::isfinite(gain)) throw Error(ErrorKind::InvalidConfig, "gain must be >= 0");
    ImagePlane out = signal;
    if (gain == 0.0) return out;
    for (float& v : out.values()) {
        if (v == 0.0f) continue;
        std::poisson_distribution<std::int64_t> photons(static_cast<double>(v) / gain);
        v = static_cast<float>(gain * static_cast<double>(photons(rng)));
    }
    return out;
}

ImagePlane apply_read_noise(const ImagePlane& signal, double sigma, Rng& rng) {
    if (!(sigma >= 0.0)) throw Error(ErrorKind::InvalidConfig, "read sigma must be >= 0");
    ImagePlane out = signal;
    if (sigma == 0.0) return out;
    std::normal_distribution<double> noise(0.0, sigma);
    for (float& v : out.values()) v = static_cast<float>(v + noise(rng));
    return out;
}

std::vector<float> draw_band_offsets(int count, double variance, Rng& rng) {
    if (!(variance >= 0.0)) throw Error(ErrorKind::InvalidConfig, "row variance must be >= 0");
    std::vector<float> offsets(static_cast<std::size_t>(count), 0.0f);
    if (variance == 0.0) return offsets;
    std::normal_distribution<double> noise(0.0, std::sqrt(variance));
    for (float& o : offsets) o = static_cast<float>(noise(rng));
    return offsets;
}

ImagePlane add_band_offsets(const ImagePlane& signal, std::span<const float> offsets,
                            BandOrientation orientation) {
    const int bands = orientation == BandOrientation::rows ? signal.height() : signal.width();
    if (static_cast<int>(offsets.size()) != bands) {
        throw Error(ErrorKind::DimMismatch, "one offset per band required");
    }
    ImagePlane out = signal;
    if (orientation == BandOrientation::rows) {
        for (int y = 0; y < out.height(); ++y) simd::add_scalar(out.row(y), offsets[y]);
    } else {
        // Each row is a contiguous run of (x, c) pairs; repeat the offsets
        // channel-wise once and add it to every row.
        std::vector<float> pattern(static_cast<std::size_t>(out.width()) * out.channels());
        for (int x = 0; x < out.width(); ++x) {
            for (int c = 0; c < out.channels(); ++c) pattern[x * out.channels() + c] = offsets[x];
        }
        for (int y = 0; y < out.height(); ++y) simd::add(out.row(y), pattern);
    }
    return out;
}

ImagePlane apply_row_noise(const ImagePlane& signal, double variance, Rng& rng,
                           BandOrientation orientation) {
    const int bands = orientation == BandOrientation::rows ? signal.height() : signal.width();
    if (variance == 0.0) return signal;
    return add_band_offsets(signal, draw_band_offsets(bands, variance, rng), orientation);
}

ImagePlane apply_quant_noise(const ImagePlane& signal, double step, Rng& rng) {
    if (!(step >= 0.0)) throw Error(ErrorKind::InvalidConfig, "quantization step must be >= 0");
    ImagePlane out = signal;
    if (step == 0.0) return out;
    const double half = step / 2.0;
    for (float& v : out.values()) v = static_cast<float>(v + uniform(rng, -half, half));
    return out;
}

ImagePlane apply_noise_unclamped(const ImagePlane& flare_image, const NoiseModel& model,
                                 BandOrientation orientation) {
    model.validate();
    Rng shot(mix_seed(model.seed, kShotStream));
    Rng read(mix_seed(model.seed, kReadStream));
    Rng row(mix_seed(model.seed, kRowStream));
    Rng quant(mix_seed(model.seed, kQuantStream));
    ImagePlane out = apply_shot_noise(flare_image, model.gain, shot);
    out = apply_read_noise(out, model.read_sigma, read);
    out = apply_row_noise(out, model.row_variance, row, orientation);
    return apply_quant_noise(out, model.quant_step, quant);
}

ImagePlane apply_noise(const ImagePlane& flare_image, const NoiseModel& model,
                       BandOrientation orientation) {
    ImagePlane out = apply_noise_unclamped(flare_image, model, orientation);
    simd::clamp(out.values(), 0.0f, 1.0f);
    return out;
}

}  // namespace nightforge
