#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "rustseg/colorfilter.hpp"
#include "rustseg/dbscan.hpp"
#include "rustseg/retinex.hpp"

namespace rustseg {

struct EmitFlags {
    bool mask = false;
    bool premask = false;
    bool overlay = false;
    bool report = true;

    friend bool operator==(const EmitFlags&, const EmitFlags&) = default;
};

/// Parses "mask,overlay,report,premask" (any subset, comma separated).
EmitFlags parse_emit(std::string_view list);

struct PipelineConfig {
    SsrParams ssr;
    FilterConfig filter{default_rust_ranges(), Fusion::AndWithThreshold};
    DbscanParams db;
    std::size_t min_area = 64;
    double rust_threshold_pct = 0.5;
    EmitFlags emit;

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Throws ConfigError listing every invalid field.
void validate(const PipelineConfig& config);

// Canonical JSON: fixed key order, two-space indent, trailing newline.
// Keys: ssr{sigma, epsilon_floor}, ranges[], fusion, dbscan{eps, min_pts, decimate},
// min_area, rust_threshold_pct. Missing keys take defaults; unknown keys are rejected.
std::string config_to_json(const PipelineConfig& config);
PipelineConfig config_from_json(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace rustseg
