#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rustseg/colorspace.hpp"
#include "rustseg/config.hpp"
#include "rustseg/dbscan.hpp"
#include "rustseg/imaging.hpp"

namespace rustseg {

enum class Classification { Clean, Rusty };

std::string_view to_string(Classification c);

/// RUSTY iff percentage >= threshold.
Classification classify(double rust_percentage, double rust_threshold_pct);

struct RustReport {
    std::string image_id;
    int width = 0;
    int height = 0;
    std::size_t rust_pixel_count = 0;
    std::size_t total_pixels = 0;
    double rust_percentage = 0.0;
    std::vector<ClusterInfo> clusters;
    Classification classification = Classification::Clean;
    PipelineConfig config;
};

std::string report_to_json(const RustReport& report);

/// Every intermediate of one run, in stage order.
struct AnalysisResult {
    RustReport report;
    BinaryMask color_mask;
    BinaryMask threshold_mask;
    BinaryMask fused_mask;  // pre-DBSCAN
    ClusterSet clusters;    // after min_area filtering
    BinaryMask final_mask;
    bool threshold_degenerate = false;
};

/// Stages that depend only on the image and the SSR parameters. The
/// calibration service caches these.
struct ThresholdStage {
    double sigma = 0.0;
    FloatPlane stretched;
    BinaryMask mask;
    bool degenerate = false;
};

double effective_sigma(const SsrParams& ssr, int width, int height);
ThresholdStage threshold_stage(const HsvImage& hsv, const SsrParams& ssr);
BinaryMask premask(const HsvImage& hsv, const ThresholdStage& stage, const FilterConfig& filter);

AnalysisResult analyze(const RgbImage& image, const PipelineConfig& config, std::string image_id = {});
AnalysisResult analyze(const RgbImage& image, const HsvImage& hsv, const ThresholdStage& stage,
                       const PipelineConfig& config, std::string image_id = {});

/// 12 hex chars of FNV-1a-64 over name, a NUL byte, then the content bytes.
std::string make_image_id(std::string_view name, std::span<const std::uint8_t> content);

struct ArtifactPaths {
    std::optional<std::filesystem::path> mask;
    std::optional<std::filesystem::path> premask;
    std::optional<std::filesystem::path> overlay;
    std::optional<std::filesystem::path> report;
};

/// Writes <stem>.mask.png, <stem>.premask.png, <stem>.overlay.png, <stem>.report.json per config.emit.
ArtifactPaths write_artifacts(const RgbImage& image, const AnalysisResult& result,
                              const std::filesystem::path& out_dir, std::string_view stem,
                              const EmitFlags& emit);

struct BatchFailure {
    std::filesystem::path path;
    std::string message;
};

struct BatchItem {
    std::filesystem::path path;
    std::optional<RustReport> report;
    std::optional<std::string> error;
};

struct BatchResult {
    std::vector<BatchItem> items;  // input order
    std::size_t rusty = 0;
    std::size_t clean = 0;
    std::size_t failed = 0;
};

/// Expands directories to their PNG/JPEG files (name order).
std::vector<std::filesystem::path> expand_inputs(std::span<const std::filesystem::path> inputs);

/// Analyzes every input with up to `workers` threads. Per-image failures are
/// recorded; throws ErrorCode::Batch when no input could be analyzed.
BatchResult run_batch(std::span<const std::filesystem::path> paths, const PipelineConfig& config,
                      const std::optional<std::filesystem::path>& out_dir, unsigned workers = 1);

std::string batch_summary_json(const BatchResult& batch);

}  // namespace rustseg
