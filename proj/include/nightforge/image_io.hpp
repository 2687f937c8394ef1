// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#pragma once

#include <filesystem>

#include "nightforge/plane.hpp"

namespace nightforge::io {

/// Reads a Portable Float Map ("PF" colour or "Pf" gray). Handles either
/// byte order; rows are returned top-to-bottom. Throws Error(DecodeError).
Plane<float> read_pfm(const std::filesystem::path& path);

/// Writes little-endian PFM (scale -1.0), bottom-to-top rows per the format.
/// Only 1- or 3-channel planes are representable. Throws Error(IoError).
void write_pfm(const std::filesystem::path& path, const Plane<float>& plane);

/// Decodes an 8- or 16-bit PNG into 3-channel [0,1] floats. Gray is
/// replicated, alpha dropped, palettes expanded. 8-bit divides by 255 and
/// 16-bit by 65535. Throws Error(DecodeError).
ImagePlane read_png_rgb(const std::filesystem::path& path);

/// Quantizes [0,1] values to 16-bit (round to nearest, clamped) and writes
/// an RGB or gray PNG. Output bytes depend only on the pixel values.
void write_png16(const std::filesystem::path& path, const ImagePlane& plane);

/// Writes an 8-bit PNG; used for previews and test fixtures.
void write_png8(const std::filesystem::path& path, const ImagePlane& plane);

/// PNG or PFM by extension (case-insensitive), normalized to 3 channels in
/// [0,1]; PFM values are clamped. Throws Error(DecodeError).
ImagePlane read_rgb_image(const std::filesystem::path& path);

/// True for ".png" / ".pfm" (any case).
bool has_image_extension(const std::filesystem::path& path);

}  // namespace nightforge::io
