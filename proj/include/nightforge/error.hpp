// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#pragma once

#include <stdexcept>
#include <string>

namespace nightforge {

enum class ErrorKind {
    EmptyCatalog,
    DecodeError,
    InvalidDims,
    DepthOutOfRange,
    InvalidConfig,
    DimMismatch,
    NegativeSignal,
    WrongChannelCount,
    TapeMismatch,
    EmptyMask,
    ZeroMedian,
    EmptyList,
    IoError,
    InvalidManifest,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (and the CLI's
/// exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace nightforge
