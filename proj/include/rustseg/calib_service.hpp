#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rustseg/config.hpp"
#include "rustseg/pipeline.hpp"

namespace rustseg {

struct ImageEntry {
    std::string id;
    std::string name;
    int width = 0;
    int height = 0;
};

/// In-process calibration backend: an immutable image store, a single session
/// config, and a cache of threshold stages keyed by (image, sigma, epsilon_floor).
class CalibrationSession {
public:
    explicit CalibrationSession(const std::filesystem::path& image_dir, PipelineConfig initial = {});
    ~CalibrationSession();

    CalibrationSession(const CalibrationSession&) = delete;
    CalibrationSession& operator=(const CalibrationSession&) = delete;

    std::vector<ImageEntry> list_images() const;

    /// Throws ErrorCode::NotFound for unknown ids.
    const RgbImage& image(const std::string& id) const;
    std::vector<std::uint8_t> image_png(const std::string& id) const;

    BinaryMask preview_mask(const std::string& id, const FilterConfig& filter, const SsrParams& ssr) const;
    std::vector<std::uint8_t> preview_mask_png(const std::string& id, const FilterConfig& filter,
                                               const SsrParams& ssr) const;
    RustReport analyze_now(const std::string& id, const PipelineConfig& config) const;

    PipelineConfig config() const;
    void set_config(PipelineConfig config);
    std::string export_config() const;
    void import_config(const std::string& json);

    std::size_t cached_stages() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct ServiceOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::optional<std::filesystem::path> ui_dir;
};

/// HTTP front end over a CalibrationSession.
class CalibrationServer {
public:
    CalibrationServer(std::shared_ptr<CalibrationSession> session, ServiceOptions options);
    ~CalibrationServer();

    CalibrationServer(const CalibrationServer&) = delete;
    CalibrationServer& operator=(const CalibrationServer&) = delete;

    /// Binds and serves on a background thread; returns the bound port (port 0 picks one).
    int start();
    /// Binds and serves on the calling thread until stop().
    void run();
    void stop();
    bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace rustseg
