#include "rustseg/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <thread>

#include "config_json.hpp"
#include "rustseg/colorfilter.hpp"
#include "rustseg/error.hpp"
#include "rustseg/retinex.hpp"
#include "rustseg/threshold.hpp"

namespace rustseg {

std::string_view to_string(Classification c) {
    return c == Classification::Rusty ? "RUSTY" : "CLEAN";
}

Classification classify(double rust_percentage, double rust_threshold_pct) {
    return rust_percentage >= rust_threshold_pct ? Classification::Rusty : Classification::Clean;
}

double effective_sigma(const SsrParams& ssr, int width, int height) {
    return ssr.sigma.value_or(auto_sigma(width, height));
}

ThresholdStage threshold_stage(const HsvImage& hsv, const SsrParams& ssr_params) {
    ThresholdStage stage;
    stage.sigma = effective_sigma(ssr_params, hsv.width(), hsv.height());
    SsrParams resolved = ssr_params;
    resolved.sigma = stage.sigma;
    stage.stretched = linear_stretch(ssr(extract_saturation(hsv), resolved));
    IteratedThreshold t = iterated_threshold_detail(stage.stretched);
    stage.mask = std::move(t.mask);
    stage.degenerate = t.degenerate;
    return stage;
}

BinaryMask premask(const HsvImage& hsv, const ThresholdStage& stage, const FilterConfig& filter) {
    return fuse_masks(apply_ranges(hsv, filter), stage.mask, filter.fusion);
}

AnalysisResult analyze(const RgbImage& image, const PipelineConfig& config, std::string image_id) {
    validate(config);
    if (image.empty()) throw Error(ErrorCode::Dimension, "cannot analyze an empty image");
    const HsvImage hsv = rgb_image_to_hsv(image);
    const ThresholdStage stage = threshold_stage(hsv, config.ssr);
    return analyze(image, hsv, stage, config, std::move(image_id));
}

AnalysisResult analyze(const RgbImage& image, const HsvImage& hsv, const ThresholdStage& stage,
                       const PipelineConfig& config, std::string image_id) {
    validate(config);
    AnalysisResult r;
    r.threshold_mask = stage.mask;
    r.threshold_degenerate = stage.degenerate;
    r.color_mask = apply_ranges(hsv, config.filter);
    r.fused_mask = fuse_masks(r.color_mask, r.threshold_mask, config.filter.fusion);
    r.clusters = cluster_mask_pixels(r.fused_mask, config.db, config.min_area);
    r.final_mask = cluster_mask(r.clusters, image.width(), image.height());

    RustReport& rep = r.report;
    rep.image_id = std::move(image_id);
    rep.width = image.width();
    rep.height = image.height();
    rep.total_pixels = image.pixel_count();
    for (const ClusterInfo& c : r.clusters.clusters) rep.rust_pixel_count += c.pixel_count;
    rep.rust_percentage = 100.0 * static_cast<double>(rep.rust_pixel_count) / static_cast<double>(rep.total_pixels);
    rep.clusters = r.clusters.clusters;
    rep.classification = classify(rep.rust_percentage, config.rust_threshold_pct);
    rep.config = config;
    return r;
}

std::string report_to_json(const RustReport& report) {
    detail::Json j;
    j["image_id"] = report.image_id;
    j["width"] = report.width;
    j["height"] = report.height;
    j["rust_pixel_count"] = report.rust_pixel_count;
    j["total_pixels"] = report.total_pixels;
    j["rust_percentage"] = report.rust_percentage;
    j["clusters"] = detail::Json::array();
    for (const ClusterInfo& c : report.clusters) j["clusters"].push_back(detail::cluster_to_object(c));
    j["classification"] = std::string(to_string(report.classification));
    j["config"] = detail::config_to_object(report.config);
    return j.dump(2) + "\n";
}

std::string make_image_id(std::string_view name, std::span<const std::uint8_t> content) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint8_t b) {
        h ^= b;
        h *= 0x100000001b3ULL;
    };
    for (char c : name) mix(static_cast<std::uint8_t>(c));
    mix(0);
    for (std::uint8_t b : content) mix(b);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf, 12);
}

ArtifactPaths write_artifacts(const RgbImage& image, const AnalysisResult& result,
                              const std::filesystem::path& out_dir, std::string_view stem, const EmitFlags& emit) {
    std::filesystem::create_directories(out_dir);
    ArtifactPaths paths;
    const std::string base(stem);
    if (emit.mask) {
        paths.mask = out_dir / (base + ".mask.png");
        save_mask(result.final_mask, *paths.mask);
    }
    if (emit.premask) {
        paths.premask = out_dir / (base + ".premask.png");
        save_mask(result.fused_mask, *paths.premask);
    }
    if (emit.overlay) {
        paths.overlay = out_dir / (base + ".overlay.png");
        save_rgb(render_overlay(image, result.clusters), *paths.overlay);
    }
    if (emit.report) {
        paths.report = out_dir / (base + ".report.json");
        const std::string body = report_to_json(result.report);
        write_file(*paths.report, std::span(reinterpret_cast<const std::uint8_t*>(body.data()), body.size()));
    }
    return paths;
}

namespace {

bool is_image_file(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

}  // namespace

std::vector<std::filesystem::path> expand_inputs(std::span<const std::filesystem::path> inputs) {
    std::vector<std::filesystem::path> out;
    for (const auto& in : inputs) {
        std::error_code ec;
        if (std::filesystem::is_directory(in, ec)) {
            std::vector<std::filesystem::path> files;
            for (const auto& e : std::filesystem::directory_iterator(in))
                if (e.is_regular_file() && is_image_file(e.path())) files.push_back(e.path());
            std::sort(files.begin(), files.end(),
                      [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
            out.insert(out.end(), files.begin(), files.end());
        } else {
            out.push_back(in);
        }
    }
    return out;
}

BatchResult run_batch(std::span<const std::filesystem::path> paths, const PipelineConfig& config,
                      const std::optional<std::filesystem::path>& out_dir, unsigned workers) {
    validate(config);
    if (paths.empty()) throw Error(ErrorCode::Batch, "no input images");

    BatchResult batch;
    batch.items.resize(paths.size());
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t i = next++; i < paths.size(); i = next++) {
            BatchItem& item = batch.items[i];
            item.path = paths[i];
            try {
                const auto bytes = read_file(item.path);
                const RgbImage image = decode_rgb(bytes);
                AnalysisResult result = analyze(image, config, make_image_id(item.path.filename().string(), bytes));
                if (out_dir) write_artifacts(image, result, *out_dir, item.path.stem().string(), config.emit);
                item.report = std::move(result.report);
            } catch (const std::exception& e) {
                item.error = e.what();
            }
        }
    };

    workers = std::clamp(workers, 1u, static_cast<unsigned>(paths.size()));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    for (const BatchItem& item : batch.items) {
        if (!item.report) ++batch.failed;
        else if (item.report->classification == Classification::Rusty) ++batch.rusty;
        else ++batch.clean;
    }
    if (batch.failed == batch.items.size()) {
        std::string msg = "no input image could be analyzed";
        for (const BatchItem& item : batch.items) msg += "; " + item.path.string() + ": " + *item.error;
        throw Error(ErrorCode::Batch, msg);
    }
    return batch;
}

std::string batch_summary_json(const BatchResult& batch) {
    detail::Json j;
    j["images"] = batch.items.size();
    j["reports"] = batch.items.size() - batch.failed;
    j["rusty"] = batch.rusty;
    j["clean"] = batch.clean;
    j["failed"] = batch.failed;
    j["items"] = detail::Json::array();
    for (const BatchItem& item : batch.items) {
        detail::Json e;
        e["path"] = item.path.string();
        if (item.report) {
            e["image_id"] = item.report->image_id;
            e["rust_percentage"] = item.report->rust_percentage;
            e["classification"] = std::string(to_string(item.report->classification));
        } else {
            e["error"] = *item.error;
        }
        j["items"].push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

}  // namespace rustseg
