// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#include "nightforge/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "nightforge/hash.hpp"

namespace nightforge {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw Error(ErrorKind::InvalidConfig,
                "bad value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

double parse_real(std::string_view key, std::string_view value) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value);
    return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value);
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad_value(key, value);
}

std::string format_real(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

// One entry per config key, in canonical order.
struct Field {
    std::string key;
    std::function<void(PipelineConfig&, std::string_view)> set;
    std::function<std::string(const PipelineConfig&)> get;
    bool is_path = false;
};

template <typename Group>
Field real_field(std::string key, Group PipelineConfig::*group, double Group::*member) {
    return {key,
            [key, group, member](PipelineConfig& c, std::string_view v) { c.*group.*member = parse_real(key, v); },
            [group, member](const PipelineConfig& c) { return format_real(c.*group.*member); }};
}

const std::vector<Field>& schema() {
    static const std::vector<Field> fields = [] {
        using C = PipelineConfig;
        std::vector<Field> f;
        f.push_back({"assets", [](C& c, std::string_view v) { c.asset_dir = std::string(v); },
                     [](const C& c) { return c.asset_dir; }, true});
        f.push_back({"output", [](C& c, std::string_view v) { c.output_dir = std::string(v); },
                     [](const C& c) { return c.output_dir; }, true});
        f.push_back({"seed", [](C& c, std::string_view v) { c.global_seed = parse_u64("seed", v); },
                     [](const C& c) { return std::to_string(c.global_seed); }});
        f.push_back({"resize",
                     [](C& c, std::string_view v) {
                         if (v == "none") {
                             c.target.reset();
                             return;
                         }
                         if (v == "preset518") {
                             c.target = Dims{kTrainingResolution, kTrainingResolution};
                             return;
                         }
                         const auto x = v.find('x');
                         if (x == std::string_view::npos) bad_value("resize", v);
                         const auto h = parse_u64("resize", v.substr(0, x));
                         const auto w = parse_u64("resize", v.substr(x + 1));
                         if (h < 1 || w < 1 || h > 65535 || w > 65535) bad_value("resize", v);
                         c.target = Dims{static_cast<int>(h), static_cast<int>(w)};
                     },
                     [](const C& c) {
                         return c.target ? std::to_string(c.target->height) + "x" + std::to_string(c.target->width)
                                         : std::string("none");
                     }});
        f.push_back({"emit_guidance", [](C& c, std::string_view v) { c.emit_guidance = parse_bool("emit_guidance", v); },
                     [](const C& c) { return std::string(c.emit_guidance ? "true" : "false"); }});

        f.push_back(real_field("flare.source_scale_min", &C::flare, &FlareConfig::source_scale_min));
        f.push_back(real_field("flare.source_scale_max", &C::flare, &FlareConfig::source_scale_max));
        f.push_back(real_field("flare.peak_min", &C::flare, &FlareConfig::peak_min));
        f.push_back(real_field("flare.peak_max", &C::flare, &FlareConfig::peak_max));
        f.push_back(real_field("flare.brightness_min", &C::flare, &FlareConfig::brightness_min));
        f.push_back(real_field("flare.brightness_max", &C::flare, &FlareConfig::brightness_max));
        f.push_back(real_field("flare.gamma_min", &C::flare, &FlareConfig::gamma_min));
        f.push_back(real_field("flare.gamma_max", &C::flare, &FlareConfig::gamma_max));
        f.push_back(real_field("flare.depth_min", &C::flare, &FlareConfig::depth_min));
        f.push_back(real_field("flare.depth_max", &C::flare, &FlareConfig::depth_max));
        f.push_back(real_field("flare.reference_depth", &C::flare, &FlareConfig::reference_depth));
        f.push_back({"flare.depth_attenuation",
                     [](C& c, std::string_view v) { c.flare.depth_attenuation = parse_bool("flare.depth_attenuation", v); },
                     [](const C& c) { return std::string(c.flare.depth_attenuation ? "true" : "false"); }});

        f.push_back(real_field("augment.crop_probability", &C::augment, &AugmentOptions::crop_probability));
        f.push_back(real_field("augment.crop_min", &C::augment, &AugmentOptions::crop_min));
        f.push_back(real_field("augment.crop_max", &C::augment, &AugmentOptions::crop_max));
        f.push_back(real_field("augment.flip_probability", &C::augment, &AugmentOptions::flip_probability));

        f.push_back({"noise.enabled", [](C& c, std::string_view v) { c.noise_enabled = parse_bool("noise.enabled", v); },
                     [](const C& c) { return std::string(c.noise_enabled ? "true" : "false"); }});
        f.push_back({"noise.orientation",
                     [](C& c, std::string_view v) {
                         if (v == "rows") c.band_orientation = BandOrientation::rows;
                         else if (v == "columns") c.band_orientation = BandOrientation::columns;
                         else bad_value("noise.orientation", v);
                     },
                     [](const C& c) {
                         return std::string(c.band_orientation == BandOrientation::rows ? "rows" : "columns");
                     }});
        f.push_back(real_field("noise.gain_min", &C::noise, &NoiseModelRanges::gain_min));
        f.push_back(real_field("noise.gain_max", &C::noise, &NoiseModelRanges::gain_max));
        f.push_back(real_field("noise.read_slope", &C::noise, &NoiseModelRanges::read_slope));
        f.push_back(real_field("noise.read_intercept", &C::noise, &NoiseModelRanges::read_intercept));
        f.push_back(real_field("noise.read_scatter", &C::noise, &NoiseModelRanges::read_scatter));
        f.push_back(real_field("noise.row_variance_min", &C::noise, &NoiseModelRanges::row_variance_min));
        f.push_back(real_field("noise.row_variance_max", &C::noise, &NoiseModelRanges::row_variance_max));
        f.push_back(real_field("noise.quant_step_min", &C::noise, &NoiseModelRanges::quant_step_min));
        f.push_back(real_field("noise.quant_step_max", &C::noise, &NoiseModelRanges::quant_step_max));

        // Intrinsics: "auto" (centered default) or four reals "fx fy cx cy".
        f.push_back({"camera.intrinsics",
                     [](C& c, std::string_view v) {
                         if (v == "auto") {
                             c.intrinsics.reset();
                             return;
                         }
                         std::istringstream in{std::string(v)};
                         std::string tok[4];
                         CameraIntrinsics k;
                         if (!(in >> tok[0] >> tok[1] >> tok[2] >> tok[3])) bad_value("camera.intrinsics", v);
                         k.fx = parse_real("camera.intrinsics", tok[0]);
                         k.fy = parse_real("camera.intrinsics", tok[1]);
                         k.cx = parse_real("camera.intrinsics", tok[2]);
                         k.cy = parse_real("camera.intrinsics", tok[3]);
                         c.intrinsics = k;
                     },
                     [](const C& c) {
                         if (!c.intrinsics) return std::string("auto");
                         const auto& k = *c.intrinsics;
                         return format_real(k.fx) + " " + format_real(k.fy) + " " + format_real(k.cx) + " " +
                                format_real(k.cy);
                     }});
        return f;
    }();
    return fields;
}

}  // namespace

void PipelineConfig::validate() const {
    flare.validate();
    noise.validate();
    augment.validate();
    if (intrinsics) intrinsics->validate();
    if (target && (target->height < 1 || target->width < 1)) {
        throw Error(ErrorKind::InvalidConfig, "resize target must be at least 1x1");
    }
}

PipelineConfig parse_config(std::string_view text) {
    std::map<std::string, const Field*, std::less<>> by_key;
    for (const auto& f : schema()) by_key.emplace(f.key, &f);

    PipelineConfig cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto it = by_key.find(key);
        if (it == by_key.end()) {
            throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(line_no) + ": unknown key '" +
                                                      std::string(key) + "'");
        }
        it->second->set(cfg, value);
    }
    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidConfig, "cannot read config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string to_config_text(const PipelineConfig& cfg) {
    std::string out;
    for (const auto& f : schema()) out += f.key + " = " + f.get(cfg) + "\n";
    return out;
}

std::string config_digest(const PipelineConfig& cfg) {
    std::string text;
    for (const auto& f : schema()) {
        if (!f.is_path) text += f.key + " = " + f.get(cfg) + "\n";
    }
    return sha256_hex(text);
}

}  // namespace nightforge
