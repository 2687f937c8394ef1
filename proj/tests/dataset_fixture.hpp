// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#pragma once

// Small on-disk RGB-D datasets and CLI helpers shared by the pipeline tests
// and the acceptance runner.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include "nightforge/hash.hpp"
#include "nightforge/image_io.hpp"
#include "test_support.hpp"

namespace nightforge::testing {

namespace fs = std::filesystem;

struct Dataset {
    fs::path manifest;
    int records = 0;
};

/// `count` RGB PNG + depth PFM pairs under dir/rgb and dir/depth, listed in
/// dir/input.tsv. Depth files whose index is in `corrupt_depth` hold junk.
inline Dataset make_dataset(const fs::path& dir, int count, Dims dims, std::uint64_t seed,
                            const std::set<int>& corrupt_depth = {}) {
    fs::create_directories(dir / "rgb");
    fs::create_directories(dir / "depth");
    Dataset ds{dir / "input.tsv", count};
    std::ofstream manifest(ds.manifest);
    manifest << "# rgb\tdepth\n";
    for (int i = 0; i < count; ++i) {
        const std::string stem = "scene" + std::to_string(i);
        io::write_png8(dir / "rgb" / (stem + ".png"),
                       random_plane<float>(dims.height, dims.width, 3, seed * 1000 + i, 0.05, 0.95));
        const fs::path depth = dir / "depth" / (stem + ".pfm");
        if (corrupt_depth.count(i)) {
            std::ofstream(depth, std::ios::binary) << "Pf\nnot a depth map";
        } else {
            io::write_pfm(depth, random_plane<float>(dims.height, dims.width, 1, seed * 1000 + 500 + i, 1.0, 80.0));
        }
        manifest << "rgb/" << stem << ".png\tdepth/" << stem << ".pfm\n";
    }
    return ds;
}

/// SHA-256 of every regular file below `root`, keyed by relative path.
inline std::map<std::string, std::string> hash_tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = sha256_file(e.path());
    }
    return out;
}

/// Runs the CLI with `args`, output appended to `log`; returns the exit code.
/// `env` is an optional "NAME=value" prefix.
inline int run_cli(const std::string& args, const fs::path& log, const std::string& env = {}) {
    const std::string cmd = (env.empty() ? std::string() : "env " + env + " ") + "\"" + NIGHTFORGE_CLI_PATH + "\" " +
                            args + " >>\"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

inline std::string read_text(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace nightforge::testing
