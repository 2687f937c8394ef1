// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "nightforge/noise.hpp"
#include "test_support.hpp"

namespace nightforge {
namespace {

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

Moments moments(std::span<const float> v) {
    double sum = 0.0;
    for (float x : v) sum += x;
    const double mean = sum / v.size();
    double sq = 0.0;
    for (float x : v) sq += (x - mean) * (x - mean);
    return {mean, sq / (v.size() - 1)};
}

Moments moments_of_difference(const ImagePlane& out, const ImagePlane& in) {
    std::vector<float> d(out.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = out.values()[i] - in.values()[i];
    return moments(d);
}

TEST(SampleNoiseModel, PointRangesThroughCalibration) {
    NoiseModelRanges r;
    r.gain_min = r.gain_max = 2.0;
    r.read_slope = 1.0;
    r.read_intercept = 0.0;
    r.read_scatter = 0.0;
    r.row_variance_min = r.row_variance_max = 0.01;
    r.quant_step_min = r.quant_step_max = 0.1;
    Rng rng(5);
    const auto m = sample_noise_model(r, rng);
    EXPECT_EQ(m.gain, 2.0);
    EXPECT_DOUBLE_EQ(m.read_sigma, 2.0);
    EXPECT_EQ(m.row_variance, 0.01);
    EXPECT_EQ(m.quant_step, 0.1);
}

TEST(SampleNoiseModel, DeterministicUnderSeed) {
    const NoiseModelRanges r;
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng a(s), b(s);
        EXPECT_EQ(sample_noise_model(r, a), sample_noise_model(r, b));
    }
}

TEST(SampleNoiseModel, LogUniformGainMedian) {
    NoiseModelRanges r;
    r.gain_min = 0.1;
    r.gain_max = 10.0;
    constexpr int kDraws = 100000;
    std::vector<double> gains;
    gains.reserve(kDraws);
    Rng rng(77);
    for (int i = 0; i < kDraws; ++i) gains.push_back(sample_noise_model(r, rng).gain);
    std::nth_element(gains.begin(), gains.begin() + kDraws / 2, gains.end());
    // Standard error of the sample median: 1 / (2 f(m) sqrt(N)), with the
    // log-uniform density f(1) = 1 / ln(100).
    const double se = std::log(100.0) / (2.0 * std::sqrt(kDraws));
    EXPECT_NEAR(gains[kDraws / 2], 1.0, 3 * se);
}

TEST(SampleNoiseModel, InvalidRangesAreRejected) {
    NoiseModelRanges r;
    r.gain_min = 0.0;
    Rng rng(0);
    try {
        sample_noise_model(r, rng);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidConfig);
    }
    r = {};
    r.row_variance_min = 1.0;
    EXPECT_THROW(sample_noise_model(r, rng), Error);
}

TEST(ShotNoise, ZeroSignalStaysZero) {
    const ImagePlane zero(50, 50, 3, 0.0f);
    Rng rng(1);
    EXPECT_EQ(apply_shot_noise(zero, 0.05, rng), zero);
}

TEST(ShotNoise, TinyGainIsNearlyNoiseless) {
    const ImagePlane half(64, 64, 3, 0.5f);
    Rng rng(2);
    const auto out = apply_shot_noise(half, 1e-6, rng);
    for (float v : out.values()) ASSERT_LT(std::abs(v - 0.5f), 1e-2);
}

TEST(ShotNoise, MeanAndVarianceMatchPoisson) {
    constexpr double kGain = 0.01;
    const ImagePlane half(1000, 1000, 1, 0.5f);
    Rng rng(3);
    const auto m = moments(apply_shot_noise(half, kGain, rng).values());
    EXPECT_NEAR(m.mean, 0.5, 3 * std::sqrt(kGain * 0.5 / 1e6));
    EXPECT_NEAR(m.variance, kGain * 0.5, 0.02 * kGain * 0.5);
}

TEST(ShotNoise, NegativeOrNonFiniteSignalIsRejected) {
    for (float bad : {-0.01f, std::nanf(""), INFINITY}) {
        ImagePlane p(2, 2, 3, 0.5f);
        p(1, 1, 2) = bad;
        Rng rng(0);
        try {
            apply_shot_noise(p, 0.1, rng);
            FAIL() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::NegativeSignal);
        }
    }
}

TEST(ReadNoise, ZeroSigmaIsIdentity) {
    const auto p = testing::random_plane<float>(9, 9, 3, 4);
    Rng rng(0);
    EXPECT_EQ(apply_read_noise(p, 0.0, rng), p);
}

TEST(ReadNoise, StandardDeviationMatches) {
    const ImagePlane zero(1000, 1000, 1, 0.0f);
    Rng rng(5);
    const auto m = moments(apply_read_noise(zero, 0.1, rng).values());
    EXPECT_NEAR(std::sqrt(m.variance), 0.1, 0.001);
}

TEST(ReadNoise, SameSeedSameOutput) {
    const auto p = testing::random_plane<float>(20, 20, 3, 6);
    Rng a(9), b(9);
    EXPECT_EQ(apply_read_noise(p, 0.2, a), apply_read_noise(p, 0.2, b));
}

TEST(RowNoise, ZeroVarianceIsIdentity) {
    const auto p = testing::random_plane<float>(9, 9, 3, 4);
    Rng rng(0);
    EXPECT_EQ(apply_row_noise(p, 0.0, rng), p);
}

TEST(RowNoise, OffsetIsExactlyConstantAlongEachRow) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto p = testing::random_plane<float>(16, 23, 3, 100 + seed);
        Rng draw(seed), apply(seed);
        const auto offsets = draw_band_offsets(16, 0.01, draw);
        const auto out = apply_row_noise(p, 0.01, apply);
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 23; ++x)
                for (int c = 0; c < 3; ++c) ASSERT_EQ(out(y, x, c), p(y, x, c) + offsets[y]);
    }
}

TEST(RowNoise, DifferenceIsConstantAcrossColumnsAndChannels) {
    const ImagePlane zero(12, 31, 3, 0.0f);
    Rng rng(8);
    const auto out = apply_row_noise(zero, 0.04, rng);
    for (int y = 0; y < 12; ++y) {
        const float first = out(y, 0, 0);
        for (int x = 0; x < 31; ++x)
            for (int c = 0; c < 3; ++c) ASSERT_EQ(out(y, x, c), first);
    }
}

TEST(RowNoise, ColumnOrientationSharesOffsetDownColumns) {
    const ImagePlane zero(12, 7, 3, 0.0f);
    Rng rng(8);
    const auto out = apply_row_noise(zero, 0.04, rng, BandOrientation::columns);
    for (int x = 0; x < 7; ++x)
        for (int y = 0; y < 12; ++y)
            for (int c = 0; c < 3; ++c) ASSERT_EQ(out(y, x, c), out(0, x, 0));
}

TEST(RowNoise, OffsetVarianceMatches) {
    const ImagePlane zero(4096, 1, 1, 0.0f);
    Rng rng(10);
    const auto m = moments(apply_row_noise(zero, 0.04, rng).values());
    EXPECT_NEAR(m.variance, 0.04, 0.004);
}

TEST(RowNoise, WrongOffsetCountIsDimMismatch) {
    const ImagePlane p(4, 4, 3, 0.0f);
    const std::vector<float> three(3, 0.0f);
    try {
        add_band_offsets(p, three);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimMismatch);
    }
}

TEST(QuantNoise, ZeroStepIsIdentity) {
    const auto p = testing::random_plane<float>(9, 9, 3, 4);
    Rng rng(0);
    EXPECT_EQ(apply_quant_noise(p, 0.0, rng), p);
}

TEST(QuantNoise, BoundedSupport) {
    constexpr double kStep = 1.0 / 255.0;
    const auto p = testing::random_plane<float>(200, 200, 3, 11);
    Rng rng(12);
    const auto out = apply_quant_noise(p, kStep, rng);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const float v = p.values()[i];
        // One ulp of slack for the float rounding of the sum.
        const float ulp = std::nextafter(std::max(std::abs(v), 1.0f), 2.0f) - std::max(std::abs(v), 1.0f);
        ASSERT_LE(std::abs(out.values()[i] - v), kStep / 2 + ulp);
    }
}

TEST(QuantNoise, VarianceMatchesUniform) {
    constexpr double kStep = 1.0 / 255.0;
    const ImagePlane zero(1000, 1000, 1, 0.0f);
    Rng rng(13);
    const auto m = moments(apply_quant_noise(zero, kStep, rng).values());
    EXPECT_NEAR(m.variance, kStep * kStep / 12, 0.05 * kStep * kStep / 12);
}

TEST(ApplyNoise, ZeroModelIsIdentity) {
    const auto p = testing::random_plane<float>(30, 40, 3, 14);
    NoiseModel m;
    m.seed = 1234;
    EXPECT_EQ(apply_noise(p, m), p);
}

TEST(ApplyNoise, SameSeedIsBitIdentical) {
    const auto p = testing::random_plane<float>(30, 40, 3, 15);
    const NoiseModel m{0.05, 0.02, 1e-4, 1.0 / 255.0, 42};
    EXPECT_EQ(apply_noise(p, m), apply_noise(p, m));
    NoiseModel other = m;
    other.seed = 43;
    EXPECT_NE(apply_noise(p, m), apply_noise(p, other));
}

TEST(ApplyNoise, OutputIsClampedToUnitRange) {
    const auto p = testing::random_plane<float>(50, 50, 3, 16);
    const NoiseModel m{0.2, 0.3, 0.01, 0.1, 7};
    const auto out = apply_noise(p, m);
    for (float v : out.values()) ASSERT_TRUE(v >= 0.0f && v <= 1.0f);
}

TEST(ApplyNoise, ShotPlusReadVarianceAdds) {
    const ImagePlane quarter(1000, 1000, 1, 0.25f);
    const NoiseModel m{0.02, 0.05, 0.0, 0.0, 99};
    const auto d = moments_of_difference(apply_noise_unclamped(quarter, m), quarter);
    const double expected = 0.02 * 0.25 + 0.05 * 0.05;
    EXPECT_NEAR(d.variance, expected, 0.05 * expected);
}

TEST(ApplyNoise, AllComponentsPreserveMeanAndAddVariance) {
    const ImagePlane quarter(1000, 1000, 1, 0.25f);
    const NoiseModel m{0.02, 0.05, 1e-4, 1.0 / 255.0, 2026};
    const auto d = moments_of_difference(apply_noise_unclamped(quarter, m), quarter);
    const double expected = 0.02 * 0.25 + 0.05 * 0.05 + 1e-4 + (1.0 / 255.0) * (1.0 / 255.0) / 12.0;
    EXPECT_NEAR(d.variance, expected, 0.05 * expected);
    // Row offsets are shared by the 1000 pixels of a row, so the standard
    // error of the mean is dominated by the 1000 independent row draws.
    const double se = std::sqrt((expected - 1e-4) / 1e6 + 1e-4 / 1000.0);
    EXPECT_NEAR(d.mean, 0.0, 3 * se);
}

}  // namespace
}  // namespace nightforge
