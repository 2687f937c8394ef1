// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nightforge/error.hpp"

namespace nightforge {

struct Dims {
    int height = 0;
    int width = 0;

    friend bool operator==(const Dims&, const Dims&) = default;
};

/// Dense H x W x C array, channels interleaved (HWC), row-major.
template <typename T>
class Plane {
public:
    using value_type = T;

    Plane() = default;
    Plane(int height, int width, int channels, T fill = T{})
        : height_(height), width_(width), channels_(channels) {
        if (height < 0 || width < 0 || channels < 0) {
            throw Error(ErrorKind::InvalidDims, "negative plane dimension");
        }
        data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
    }

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    int channels() const noexcept { return channels_; }
    Dims dims() const noexcept { return {height_, width_}; }
    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(height_) * width_;
    }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    std::size_t index(int h, int w, int c) const noexcept {
        return (static_cast<std::size_t>(h) * width_ + w) * channels_ + c;
    }
    T& operator()(int h, int w, int c = 0) noexcept {
        assert(h >= 0 && h < height_ && w >= 0 && w < width_ && c >= 0 && c < channels_);
        return data_[index(h, w, c)];
    }
    const T& operator()(int h, int w, int c = 0) const noexcept {
        assert(h >= 0 && h < height_ && w >= 0 && w < width_ && c >= 0 && c < channels_);
        return data_[index(h, w, c)];
    }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }

    /// One image row, all channels.
    std::span<T> row(int h) noexcept {
        return std::span<T>(data_).subspan(static_cast<std::size_t>(h) * width_ * channels_,
                                           static_cast<std::size_t>(width_) * channels_);
    }
    std::span<const T> row(int h) const noexcept {
        return std::span<const T>(data_).subspan(
            static_cast<std::size_t>(h) * width_ * channels_,
            static_cast<std::size_t>(width_) * channels_);
    }

    bool same_shape(const Plane& other) const noexcept {
        return height_ == other.height_ && width_ == other.width_ &&
               channels_ == other.channels_;
    }

    friend bool operator==(const Plane&, const Plane&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    std::vector<T> data_;
};

/// Linear-light image, 32-bit reals.
using ImagePlane = Plane<float>;

template <typename To, typename From>
Plane<To> plane_cast(const Plane<From>& src) {
    Plane<To> out(src.height(), src.width(), src.channels());
    auto in = src.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < in.size(); ++i) dst[i] = static_cast<To>(in[i]);
    return out;
}

/// Depth in meters plus a per-pixel validity flag (1 = valid).
struct DepthMap {
    Plane<float> meters;
    std::vector<std::uint8_t> valid;

    /// Marks every finite, strictly positive sample valid.
    static DepthMap from_meters(Plane<float> meters);

    int height() const noexcept { return meters.height(); }
    int width() const noexcept { return meters.width(); }
    Dims dims() const noexcept { return meters.dims(); }

    friend bool operator==(const DepthMap&, const DepthMap&) = default;
};

}  // namespace nightforge
