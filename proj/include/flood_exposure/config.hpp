// Copyright 2026 The flood-exposure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLOOD_EXPOSURE_CONFIG_HPP
#define FLOOD_EXPOSURE_CONFIG_HPP

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <toml.hpp>

#include "flood_exposure/equity.hpp"
#include "flood_exposure/errors.hpp"
#include "flood_exposure/exposure.hpp"

namespace flood_exposure {

struct EmitFlags {
    bool csv = true;
    bool geojson = true;
    bool summary_json = true;
    bool chart_json = true;
};

// Everything a CLI run needs. Loaded from a flat TOML file whose keys match
// the command-line flag names.
struct RunConfig {
    std::filesystem::path facilities;
    std::filesystem::path tracts;
    std::filesystem::path flood_current;
    std::filesystem::path flood_future;
    std::string current_label = "2018";
    std::string future_label = "2050";
    ExposureConfig exposure;
    Weighting weighting = Weighting::unweighted;
    std::filesystem::path output_dir = "out";
    EmitFlags emit;
    unsigned threads = 0;  // 0 = auto
};

// Optional overrides, one per config key.
struct ConfigOverrides {
    std::optional<std::string> facilities, tracts, flood_current, flood_future, current_label, future_label, output_dir,
        weighting;
    std::optional<double> flood_buffer_m, snap_resolution_m, inclusion_threshold;
    std::optional<std::vector<double>> radii_m;
    std::optional<int> disc_segments;
    std::optional<bool> disc_area_correction, emit_csv, emit_geojson, emit_summary_json, emit_chart_json;
    std::optional<unsigned> threads;
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& file, const std::string& key, const std::string& reason) {
    throw ValidationError(ValidationError::Kind::schema, file, "", key, reason);
}

inline Weighting parse_weighting(const std::string& s, const std::string& file) {
    if (s == "unweighted") return Weighting::unweighted;
    if (s == "population") return Weighting::population;
    config_error(file, "weighting", "expected 'unweighted' or 'population'");
}

}  // namespace detail

inline RunConfig load_config(const std::filesystem::path& path) {
    const std::string file = path.string();
    if (!std::filesystem::exists(path)) throw IoError("config file not found: " + file);
    toml::table tbl;
    try {
        tbl = toml::parse_file(file);
    } catch (const toml::parse_error& e) {
        throw ValidationError(ValidationError::Kind::schema, file, "", "", std::string("invalid TOML: ") + std::string(e.description()));
    }
    const std::filesystem::path base = path.parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path q(p);
        return q.is_relative() ? base / q : q;
    };
    RunConfig cfg;
    for (const auto& [k, node] : tbl) {
        const std::string key(k.str());
        auto str = [&]() -> std::string {
            if (auto v = node.value<std::string>()) return *v;
            detail::config_error(file, key, "expected a string");
        };
        auto num = [&]() -> double {
            if (auto v = node.value<double>()) return *v;
            detail::config_error(file, key, "expected a number");
        };
        auto boolean = [&]() -> bool {
            if (auto v = node.value<bool>()) return *v;
            detail::config_error(file, key, "expected a boolean");
        };
        if (key == "facilities") cfg.facilities = resolve(str());
        else if (key == "tracts") cfg.tracts = resolve(str());
        else if (key == "flood_current") cfg.flood_current = resolve(str());
        else if (key == "flood_future") cfg.flood_future = resolve(str());
        else if (key == "current_label") cfg.current_label = str();
        else if (key == "future_label") cfg.future_label = str();
        else if (key == "output_dir") cfg.output_dir = resolve(str());
        else if (key == "flood_buffer_m") cfg.exposure.flood_buffer = num();
        else if (key == "snap_resolution_m") cfg.exposure.snap.resolution = num();
        else if (key == "inclusion_threshold") cfg.exposure.inclusion_threshold = num();
        else if (key == "disc_segments") {
            auto v = node.value<int64_t>();
            if (!v) detail::config_error(file, key, "expected an integer");
            cfg.exposure.disc_segments = static_cast<int>(*v);
        } else if (key == "disc_area_correction") cfg.exposure.disc_area_correction = boolean();
        else if (key == "radii_m") {
            const toml::array* arr = node.as_array();
            if (!arr) detail::config_error(file, key, "expected an array of numbers");
            cfg.exposure.radii.clear();
            for (const auto& e : *arr) {
                auto v = e.value<double>();
                if (!v) detail::config_error(file, key, "expected an array of numbers");
                cfg.exposure.radii.push_back(*v);
            }
        } else if (key == "weighting") cfg.weighting = detail::parse_weighting(str(), file);
        else if (key == "emit_csv") cfg.emit.csv = boolean();
        else if (key == "emit_geojson") cfg.emit.geojson = boolean();
        else if (key == "emit_summary_json") cfg.emit.summary_json = boolean();
        else if (key == "emit_chart_json") cfg.emit.chart_json = boolean();
        else if (key == "threads") {
            auto v = node.value<int64_t>();
            if (!v || *v < 0) detail::config_error(file, key, "expected a non-negative integer");
            cfg.threads = static_cast<unsigned>(*v);
        } else {
            detail::config_error(file, key, "unknown configuration key");
        }
    }
    return cfg;
}

inline void apply_overrides(RunConfig& cfg, const ConfigOverrides& o) {
    if (o.facilities) cfg.facilities = *o.facilities;
    if (o.tracts) cfg.tracts = *o.tracts;
    if (o.flood_current) cfg.flood_current = *o.flood_current;
    if (o.flood_future) cfg.flood_future = *o.flood_future;
    if (o.current_label) cfg.current_label = *o.current_label;
    if (o.future_label) cfg.future_label = *o.future_label;
    if (o.output_dir) cfg.output_dir = *o.output_dir;
    if (o.weighting) cfg.weighting = detail::parse_weighting(*o.weighting, "--weighting");
    if (o.flood_buffer_m) cfg.exposure.flood_buffer = *o.flood_buffer_m;
    if (o.snap_resolution_m) cfg.exposure.snap.resolution = *o.snap_resolution_m;
    if (o.inclusion_threshold) cfg.exposure.inclusion_threshold = *o.inclusion_threshold;
    if (o.radii_m) cfg.exposure.radii = *o.radii_m;
    if (o.disc_segments) cfg.exposure.disc_segments = *o.disc_segments;
    if (o.disc_area_correction) cfg.exposure.disc_area_correction = *o.disc_area_correction;
    if (o.emit_csv) cfg.emit.csv = *o.emit_csv;
    if (o.emit_geojson) cfg.emit.geojson = *o.emit_geojson;
    if (o.emit_summary_json) cfg.emit.summary_json = *o.emit_summary_json;
    if (o.emit_chart_json) cfg.emit.chart_json = *o.emit_chart_json;
    if (o.threads) cfg.threads = *o.threads;
}

/// Worker count: FLOOD_EXPOSURE_THREADS when set, else the config value;
/// 0 means one worker per hardware thread.
inline unsigned effective_workers(const RunConfig& cfg) {
    unsigned n = cfg.threads;
    if (const char* env = std::getenv("FLOOD_EXPOSURE_THREADS"); env && *env) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0') n = static_cast<unsigned>(v);
    }
    return detail::resolve_workers(n);
}

}  // namespace flood_exposure

#endif
