// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#include "nightforge/resample.hpp"

#include <algorithm>
#include <cmath>

namespace nightforge {

void sample_bilinear(const ImagePlane& src, double y, double x, float* out) {
    const int h = src.height();
    const int w = src.width();
    const int c = src.channels();
    y = std::clamp(y, 0.0, static_cast<double>(h - 1));
    x = std::clamp(x, 0.0, static_cast<double>(w - 1));
    const int y0 = static_cast<int>(std::floor(y));
    const int x0 = static_cast<int>(std::floor(x));
    const int y1 = std::min(y0 + 1, h - 1);
    const int x1 = std::min(x0 + 1, w - 1);
    const float fy = static_cast<float>(y - y0);
    const float fx = static_cast<float>(x - x0);
    for (int ch = 0; ch < c; ++ch) {
        const float top = src(y0, x0, ch) + fx * (src(y0, x1, ch) - src(y0, x0, ch));
        const float bot = src(y1, x0, ch) + fx * (src(y1, x1, ch) - src(y1, x0, ch));
        out[ch] = top + fy * (bot - top);
    }
}

ImagePlane resample_window(const ImagePlane& src, double top, double left, double h, double w,
                           Dims target) {
    if (target.height < 1 || target.width < 1 || src.empty()) {
        throw Error(ErrorKind::InvalidDims, "resample target and source must be non-empty");
    }
    ImagePlane out(target.height, target.width, src.channels());
    const double sy = h / target.height;
    const double sx = w / target.width;
    for (int y = 0; y < target.height; ++y) {
        const double srcy = top + (y + 0.5) * sy - 0.5;
        for (int x = 0; x < target.width; ++x) {
            const double srcx = left + (x + 0.5) * sx - 0.5;
            sample_bilinear(src, srcy, srcx, &out(y, x, 0));
        }
    }
    return out;
}

ImagePlane resize_bilinear(const ImagePlane& src, Dims target) {
    if (src.dims() == target) return src;
    return resample_window(src, 0.0, 0.0, src.height(), src.width(), target);
}

DepthMap resize_nearest(const DepthMap& src, Dims target) {
    if (target.height < 1 || target.width < 1) {
        throw Error(ErrorKind::InvalidDims, "resize target must be at least 1x1");
    }
    if (src.dims() == target) return src;
    DepthMap out;
    out.meters = Plane<float>(target.height, target.width, 1);
    out.valid.assign(out.meters.size(), 0);
    for (int y = 0; y < target.height; ++y) {
        const int sy = std::min(src.height() - 1,
                                static_cast<int>((y + 0.5) * src.height() / target.height));
        for (int x = 0; x < target.width; ++x) {
            const int sx = std::min(src.width() - 1,
                                    static_cast<int>((x + 0.5) * src.width() / target.width));
            out.meters(y, x) = src.meters(sy, sx);
            out.valid[out.meters.index(y, x, 0)] = src.valid[src.meters.index(sy, sx, 0)];
        }
    }
    return out;
}

}  // namespace nightforge
