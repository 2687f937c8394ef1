// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#include <cstdlib>
#include <iostream>
#include <string_view>

#include "kernels_internal.hpp"

namespace nightforge::simd {

// Defined in the per-ISA translation units; nullptr when not compiled in.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

const KernelTable* avx2_table() noexcept {
#if defined(__x86_64__) || defined(__i386__)
    if (avx2_kernels() != nullptr && __builtin_cpu_supports("avx2")) return avx2_kernels();
#endif
    return nullptr;
}

const KernelTable* neon_table() noexcept { return neon_kernels(); }

const KernelTable* table_for(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return &scalar_table();
        case Isa::avx2: return avx2_table();
        case Isa::neon: return neon_table();
    }
    return nullptr;
}

std::vector<Isa> supported_isas() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
        if (table_for(isa) != nullptr) out.push_back(isa);
    }
    return out;
}

namespace {

const KernelTable& resolve() noexcept {
    if (const char* forced = std::getenv("NIGHTFORGE_SIMD")) {
        const std::string_view name(forced);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (name == isa_name(isa)) {
                if (const KernelTable* t = table_for(isa)) return *t;
                std::cerr << "nightforge: NIGHTFORGE_SIMD=" << name
                          << " unsupported on this CPU, falling back\n";
            }
        }
    }
    if (const KernelTable* t = avx2_table()) return *t;
    if (const KernelTable* t = neon_table()) return *t;
    return scalar_table();
}

}  // namespace

const KernelTable& active() noexcept {
    static const KernelTable& table = resolve();
    return table;
}

}  // namespace nightforge::simd
