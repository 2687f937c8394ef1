// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

// Every compiled-in kernel table against the scalar reference. Elementwise
// kernels must agree bit for bit; reductions to a few ulps.

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "nightforge/random.hpp"
#include "nightforge/simd/kernels.hpp"

namespace nightforge::simd {
namespace {

std::vector<float> random_floats(std::size_t n, std::uint64_t seed, double lo = -2.0, double hi = 2.0) {
    Rng rng(seed);
    std::vector<float> v(n);
    for (float& x : v) x = static_cast<float>(uniform(rng, lo, hi));
    return v;
}

std::vector<double> random_doubles(std::size_t n, std::uint64_t seed, double lo, double hi) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = uniform(rng, lo, hi);
    return v;
}

bool bit_equal(const std::vector<float>& a, const std::vector<float>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

class KernelEquivalence : public ::testing::TestWithParam<Isa> {
protected:
    const KernelTable& ref = scalar_table();
    const KernelTable& simd = *table_for(GetParam());
};

// Lengths straddle every vector width and leave ragged tails.
constexpr std::size_t kLengths[] = {0, 1, 3, 7, 8, 9, 15, 16, 17, 31, 64, 1000, 1027};

TEST_P(KernelEquivalence, ElementwiseAddScaleClampAreBitExact) {
    for (std::size_t n : kLengths) {
        const auto src = random_floats(n, 11 + n);
        auto a = random_floats(n, 7 + n);
        auto b = a;
        ref.add(a.data(), src.data(), n);
        simd.add(b.data(), src.data(), n);
        EXPECT_TRUE(bit_equal(a, b)) << "add n=" << n;

        ref.add_scalar(a.data(), 0.3141f, n);
        simd.add_scalar(b.data(), 0.3141f, n);
        EXPECT_TRUE(bit_equal(a, b)) << "add_scalar n=" << n;

        ref.scale(a.data(), 0.731f, n);
        simd.scale(b.data(), 0.731f, n);
        EXPECT_TRUE(bit_equal(a, b)) << "scale n=" << n;

        ref.clamp(a.data(), 0.0f, 1.0f, n);
        simd.clamp(b.data(), 0.0f, 1.0f, n);
        EXPECT_TRUE(bit_equal(a, b)) << "clamp n=" << n;
    }
}

TEST_P(KernelEquivalence, ClampKeepsSignedZeroLikeScalar) {
    std::vector<float> a = {-0.0f, 0.0f, -1.0f, 2.0f, 0.5f, -0.0f, 1.0f, 0.25f, -0.0f};
    auto b = a;
    ref.clamp(a.data(), 0.0f, 1.0f, a.size());
    simd.clamp(b.data(), 0.0f, 1.0f, b.size());
    EXPECT_TRUE(bit_equal(a, b));
}

TEST_P(KernelEquivalence, ChannelMeanIsBitExact) {
    for (std::size_t channels : {1u, 2u, 3u, 4u, 7u}) {
        for (std::size_t pixels : {0u, 1u, 5u, 8u, 13u, 257u}) {
            const auto src = random_floats(pixels * channels, 3 * pixels + channels, 0.0, 1.0);
            std::vector<float> a(pixels), b(pixels);
            ref.channel_mean(src.data(), pixels, channels, a.data());
            simd.channel_mean(src.data(), pixels, channels, b.data());
            EXPECT_TRUE(bit_equal(a, b)) << "C=" << channels << " P=" << pixels;
        }
    }
}

TEST_P(KernelEquivalence, AxpyIsBitExact) {
    for (std::size_t n : kLengths) {
        const auto xf = random_floats(n, 100 + n);
        auto yf_ref = random_floats(n, 200 + n);
        auto yf = yf_ref;
        ref.axpy_f32(yf_ref.data(), -0.37f, xf.data(), n);
        simd.axpy_f32(yf.data(), -0.37f, xf.data(), n);
        EXPECT_TRUE(bit_equal(yf_ref, yf)) << "axpy_f32 n=" << n;

        const auto xd = random_doubles(n, 300 + n, -3, 3);
        auto yd_ref = random_doubles(n, 400 + n, -3, 3);
        auto yd = yd_ref;
        ref.axpy_f64(yd_ref.data(), 1.7, xd.data(), n);
        simd.axpy_f64(yd.data(), 1.7, xd.data(), n);
        EXPECT_EQ(0, std::memcmp(yd_ref.data(), yd.data(), n * sizeof(double))) << "axpy_f64 n=" << n;
    }
}

TEST_P(KernelEquivalence, DotMatchesWithinRoundoff) {
    for (std::size_t n : kLengths) {
        const auto af = random_floats(n, 500 + n);
        const auto bf = random_floats(n, 600 + n);
        double abs_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) abs_sum += std::abs(af[i] * bf[i]);
        EXPECT_NEAR(ref.dot_f32(af.data(), bf.data(), n), simd.dot_f32(af.data(), bf.data(), n),
                    4e-7 * abs_sum + 1e-30)
            << "n=" << n;

        const auto ad = random_doubles(n, 700 + n, -1, 1);
        const auto bd = random_doubles(n, 800 + n, -1, 1);
        EXPECT_NEAR(ref.dot_f64(ad.data(), bd.data(), n), simd.dot_f64(ad.data(), bd.data(), n), 1e-13 * (n + 1));
    }
}

TEST_P(KernelEquivalence, DepthErrorSumsAgree) {
    for (std::size_t n : kLengths) {
        const auto g = random_doubles(n, 900 + n, 0.5, 60.0);
        auto p = random_doubles(n, 1000 + n, 0.5, 60.0);
        // Put some samples exactly on the delta thresholds.
        for (std::size_t i = 0; i < n; i += 5) p[i] = g[i] * 1.25;
        const DepthErrorSums a = ref.depth_error_sums(p.data(), g.data(), n);
        const DepthErrorSums b = simd.depth_error_sums(p.data(), g.data(), n);
        EXPECT_NEAR(a.abs_rel, b.abs_rel, 1e-12 * (1 + a.abs_rel));
        EXPECT_NEAR(a.sq_rel, b.sq_rel, 1e-12 * (1 + a.sq_rel));
        EXPECT_NEAR(a.sq, b.sq, 1e-12 * (1 + a.sq));
        for (int k = 0; k < 3; ++k) EXPECT_EQ(a.delta[k], b.delta[k]) << "k=" << k << " n=" << n;
    }
}

std::vector<Isa> non_scalar_isas() {
    std::vector<Isa> out;
    for (Isa isa : supported_isas()) {
        if (isa != Isa::scalar) out.push_back(isa);
    }
    // Always run at least the scalar-vs-scalar instantiation so the suite is
    // never empty on machines without vector units.
    if (out.empty()) out.push_back(Isa::scalar);
    return out;
}

INSTANTIATE_TEST_SUITE_P(AllTables, KernelEquivalence, ::testing::ValuesIn(non_scalar_isas()),
                         [](const auto& info) { return std::string(isa_name(info.param)); });

TEST(Dispatch, ActiveTableIsSupported) {
    const auto isas = supported_isas();
    ASSERT_FALSE(isas.empty());
    EXPECT_EQ(isas.front(), Isa::scalar);
    EXPECT_NE(table_for(active().isa), nullptr);
}

}  // namespace
}  // namespace nightforge::simd
