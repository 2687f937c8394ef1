// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#pragma once

#include "nightforge/plane.hpp"

namespace nightforge {

/// Bilinear resize with half-pixel centers and edge clamping. A constant
/// plane stays constant (weights sum to one).
ImagePlane resize_bilinear(const ImagePlane& src, Dims target);

/// Bilinear resample of the window [top, top+h) x [left, left+w) of `src`
/// onto `target`.
ImagePlane resample_window(const ImagePlane& src, double top, double left, double h,
                           double w, Dims target);

/// Nearest-neighbour resize; used for depth so no new depth values appear.
DepthMap resize_nearest(const DepthMap& src, Dims target);

/// Samples `src` at continuous pixel coordinates (y, x), pixel centers at
/// integers, clamped to the border.
void sample_bilinear(const ImagePlane& src, double y, double x, float* out);

}  // namespace nightforge
