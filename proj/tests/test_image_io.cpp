// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#include <gtest/gtest.h>

#include <cstring>
#include <fstream>

#include "nightforge/image_io.hpp"
#include "nightforge/resample.hpp"
#include "test_support.hpp"

namespace nightforge {
namespace {

using testing::TempDir;

TEST(Pfm, RoundTripIsBitExactForRandomShapes) {
    TempDir dir("pfm");
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int h = 1 + static_cast<int>(uniform_index(rng, 17));
        const int w = 1 + static_cast<int>(uniform_index(rng, 23));
        const int c = uniform01(rng) < 0.5 ? 1 : 3;
        const auto plane = testing::random_plane<float>(h, w, c, 40 + trial, -50.0, 50.0);
        io::write_pfm(dir / "x.pfm", plane);
        EXPECT_EQ(io::read_pfm(dir / "x.pfm"), plane) << h << "x" << w << "x" << c;
    }
}

TEST(Pfm, StoresRowsBottomToTopLittleEndian) {
    TempDir dir("pfm_layout");
    Plane<float> p(2, 1, 1);
    p(0, 0) = 1.0f;  // top row
    p(1, 0) = 2.0f;
    io::write_pfm(dir / "l.pfm", p);
    std::ifstream in(dir / "l.pfm", std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), {});
    const std::string header = "Pf\n1 2\n-1.0\n";
    ASSERT_EQ(bytes.substr(0, header.size()), header);
    float first = 0.0f;
    std::memcpy(&first, bytes.data() + header.size(), 4);
    EXPECT_EQ(first, 2.0f);
}

TEST(Pfm, ReadsBigEndianFiles) {
    TempDir dir("pfm_be");
    {
        std::ofstream out(dir / "be.pfm", std::ios::binary);
        out << "Pf\n1 1\n1.0\n";
        const unsigned char be_half[4] = {0x3F, 0x00, 0x00, 0x00};  // 0.5f
        out.write(reinterpret_cast<const char*>(be_half), 4);
    }
    EXPECT_EQ(io::read_pfm(dir / "be.pfm")(0, 0), 0.5f);
}

TEST(Pfm, TruncatedRasterIsDecodeError) {
    TempDir dir("pfm_trunc");
    {
        std::ofstream out(dir / "t.pfm", std::ios::binary);
        out << "PF\n4 4\n-1.0\nabc";
    }
    try {
        io::read_pfm(dir / "t.pfm");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DecodeError);
    }
}

TEST(Png, SixteenBitRoundTripIsExactOnCodeValues) {
    TempDir dir("png16");
    ImagePlane p(3, 5, 3);
    Rng rng(1);
    for (float& v : p.values()) v = static_cast<float>(uniform_index(rng, 65536) / 65535.0);
    io::write_png16(dir / "a.png", p);
    EXPECT_EQ(io::read_png_rgb(dir / "a.png"), p);
}

TEST(Png, EightBitNormalizesBy255) {
    TempDir dir("png8");
    ImagePlane p(1, 2, 3, 0.0f);
    p(0, 1, 0) = 128.0f / 255.0f;
    p(0, 1, 2) = 1.0f;
    io::write_png8(dir / "b.png", p);
    const auto back = io::read_png_rgb(dir / "b.png");
    EXPECT_FLOAT_EQ(back(0, 1, 0), 128.0f / 255.0f);
    EXPECT_EQ(back(0, 1, 2), 1.0f);
    EXPECT_EQ(back(0, 0, 1), 0.0f);
}

TEST(Png, GrayIsReplicatedToThreeChannels) {
    TempDir dir("png_gray");
    ImagePlane gray(2, 2, 1, 0.0f);
    gray(1, 0) = 51.0f / 255.0f;
    io::write_png8(dir / "g.png", gray);
    const auto rgb = io::read_png_rgb(dir / "g.png");
    ASSERT_EQ(rgb.channels(), 3);
    for (int c = 0; c < 3; ++c) EXPECT_FLOAT_EQ(rgb(1, 0, c), 0.2f);
}

TEST(Png, GarbageIsDecodeError) {
    TempDir dir("png_bad");
    {
        std::ofstream out(dir / "bad.png", std::ios::binary);
        out << "\x89PNG\r\n\x1a\n this is not a png stream";
    }
    try {
        io::read_png_rgb(dir / "bad.png");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DecodeError);
        EXPECT_NE(std::string(e.what()).find("bad.png"), std::string::npos);
    }
}

TEST(Resample, BilinearHalvingAveragesTwoByTwoBlocks) {
    const auto src = testing::random_plane<float>(8, 6, 3, 9);
    const auto out = resize_bilinear(src, {4, 3});
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 3; ++x) {
            for (int c = 0; c < 3; ++c) {
                const float mean = (src(2 * y, 2 * x, c) + src(2 * y, 2 * x + 1, c) + src(2 * y + 1, 2 * x, c) +
                                    src(2 * y + 1, 2 * x + 1, c)) / 4.0f;
                EXPECT_NEAR(out(y, x, c), mean, 1e-6);
            }
        }
    }
}

TEST(Resample, NearestDepthKeepsValuesAndValidity) {
    Plane<float> m(2, 2, 1);
    m(0, 0) = 1.0f;
    m(0, 1) = 2.0f;
    m(1, 0) = 0.0f;  // invalid
    m(1, 1) = 4.0f;
    const auto d = DepthMap::from_meters(m);
    const auto up = resize_nearest(d, {4, 4});
    EXPECT_EQ(up.meters(3, 3), 4.0f);
    EXPECT_EQ(up.meters(0, 3), 2.0f);
    EXPECT_EQ(up.valid[up.meters.index(3, 0, 0)], 0);
    EXPECT_EQ(up.valid[up.meters.index(0, 0, 0)], 1);
}

}  // namespace
}  // namespace nightforge
