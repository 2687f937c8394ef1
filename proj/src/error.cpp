// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#include <cmath>

#include "nightforge/error.hpp"
#include "nightforge/plane.hpp"

namespace nightforge {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::EmptyCatalog: return "EmptyCatalog";
        case ErrorKind::DecodeError: return "DecodeError";
        case ErrorKind::InvalidDims: return "InvalidDims";
        case ErrorKind::DepthOutOfRange: return "DepthOutOfRange";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::DimMismatch: return "DimMismatch";
        case ErrorKind::NegativeSignal: return "NegativeSignal";
        case ErrorKind::WrongChannelCount: return "WrongChannelCount";
        case ErrorKind::TapeMismatch: return "TapeMismatch";
        case ErrorKind::EmptyMask: return "EmptyMask";
        case ErrorKind::ZeroMedian: return "ZeroMedian";
        case ErrorKind::EmptyList: return "EmptyList";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::InvalidManifest: return "InvalidManifest";
    }
    return "Unknown";
}

DepthMap DepthMap::from_meters(Plane<float> meters) {
    if (meters.channels() != 1) {
        throw Error(ErrorKind::WrongChannelCount, "depth map must have one channel");
    }
    DepthMap map;
    map.valid.resize(meters.size());
    auto v = meters.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        map.valid[i] = std::isfinite(v[i]) && v[i] > 0.0f ? 1 : 0;
    }
    map.meters = std::move(meters);
    return map;
}

}  // namespace nightforge
