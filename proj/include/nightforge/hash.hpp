// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace nightforge {

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// Lowercase hex SHA-256 of a file's contents. Throws Error(IoError).
std::string sha256_file(const std::filesystem::path& path);

}  // namespace nightforge
