// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nightforge {

/// Per-worker generator. Never shared between threads.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a parent seed and a stream index.
/// Depends only on (parent, index), never on call order.
constexpr std::uint64_t mix_seed(std::uint64_t parent, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(parent) ^ splitmix64(index + 0xD1B54A32D192ED03ULL));
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi); returns lo exactly when lo == hi.
inline double uniform(Rng& rng, double lo, double hi) noexcept {
    const double u = uniform01(rng);
    return lo == hi ? lo : lo + (hi - lo) * u;
}

/// exp(U(ln lo, ln hi)); exact point mass when lo == hi.
inline double log_uniform(Rng& rng, double lo, double hi) noexcept {
    const double u = uniform01(rng);
    if (lo == hi) return lo;
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * u);
}

/// Uniform index in [0, n), n > 0. Lemire-style rejection keeps it unbiased.
inline std::size_t uniform_index(Rng& rng, std::size_t n) noexcept {
    const std::uint64_t bound = n;
    const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % bound;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return static_cast<std::size_t>(draw % bound);
}

}  // namespace nightforge
