#include "rustseg/rustseg.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "rustseg/calib_service.hpp"
#include "rustseg/error.hpp"
#include "rustseg/pipeline.hpp"

struct rs_image {
    rustseg::RgbImage image;
};

struct rs_config {
    rustseg::PipelineConfig config;
};

struct rs_report {
    rustseg::RustReport report;
};

struct rs_batch {
    rustseg::BatchResult result;
    std::vector<std::unique_ptr<rs_report>> reports;
    std::vector<std::string> paths;
};

struct rs_service {
    std::shared_ptr<rustseg::CalibrationSession> session;
    std::unique_ptr<rustseg::CalibrationServer> server;
};

namespace {

thread_local std::string g_last_error;

rs_status to_status(rustseg::ErrorCode code) {
    using rustseg::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return RS_ERR_INVALID_ARGUMENT;
        case ErrorCode::Io: return RS_ERR_IO;
        case ErrorCode::UnsupportedFormat: return RS_ERR_UNSUPPORTED_FORMAT;
        case ErrorCode::Dimension: return RS_ERR_DIMENSION;
        case ErrorCode::Config: return RS_ERR_CONFIG;
        case ErrorCode::Degenerate: return RS_ERR_DEGENERATE;
        case ErrorCode::Batch: return RS_ERR_BATCH;
        case ErrorCode::NotFound: return RS_ERR_NOT_FOUND;
    }
    return RS_ERR_INTERNAL;
}

template <typename Fn>
rs_status guard(Fn&& fn) noexcept {
    g_last_error.clear();
    try {
        fn();
        return RS_OK;
    } catch (const rustseg::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return RS_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return RS_ERR_INTERNAL;
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw rustseg::Error(rustseg::ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}


// Applies a change to a copy and commits only if the whole config stays valid.
template <typename Fn>
rs_status update(rs_config* config, Fn&& fn) {
    return guard([&] {
        require(config != nullptr, "null config");
        rustseg::PipelineConfig next = config->config;
        fn(next);
        rustseg::validate(next);
        config->config = std::move(next);
    });
}

}  // namespace

extern "C" {

const char* rs_version(void) { return "1.0.0"; }

const char* rs_status_string(rs_status status) {
    switch (status) {
        case RS_OK: return "ok";
        case RS_ERR_INVALID_ARGUMENT: return "invalid argument";
        case RS_ERR_IO: return "i/o error";
        case RS_ERR_UNSUPPORTED_FORMAT: return "unsupported format";
        case RS_ERR_DIMENSION: return "dimension mismatch";
        case RS_ERR_CONFIG: return "invalid config";
        case RS_ERR_DEGENERATE: return "degenerate input";
        case RS_ERR_BATCH: return "batch error";
        case RS_ERR_NOT_FOUND: return "not found";
        case RS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* rs_last_error(void) { return g_last_error.c_str(); }

void rs_string_free(char* s) { std::free(s); }

rs_status rs_image_load(const char* path, rs_image** out) {
    return guard([&] {
        require(path && out, "rs_image_load: null argument");
        *out = new rs_image{rustseg::load_rgb(path)};
    });
}

rs_status rs_image_from_rgb8(const uint8_t* rgb, uint32_t width, uint32_t height, rs_image** out) {
    return guard([&] {
        require(rgb && out, "rs_image_from_rgb8: null argument");
        require(width > 0 && height > 0, "rs_image_from_rgb8: zero dimension");
        const std::size_t n = static_cast<std::size_t>(width) * height * 3;
        std::vector<double> data(n);
        for (std::size_t i = 0; i < n; ++i) data[i] = rgb[i] / 255.0;
        *out = new rs_image{rustseg::RgbImage(static_cast<int>(width), static_cast<int>(height), std::move(data))};
    });
}

rs_status rs_image_size(const rs_image* image, uint32_t* width, uint32_t* height) {
    return guard([&] {
        require(image && width && height, "rs_image_size: null argument");
        *width = static_cast<uint32_t>(image->image.width());
        *height = static_cast<uint32_t>(image->image.height());
    });
}

void rs_image_free(rs_image* image) { delete image; }

rs_status rs_config_default(rs_config** out) {
    return guard([&] {
        require(out, "rs_config_default: null argument");
        *out = new rs_config{};
    });
}

rs_status rs_config_from_json(const char* json, rs_config** out) {
    return guard([&] {
        require(json && out, "rs_config_from_json: null argument");
        *out = new rs_config{rustseg::config_from_json(json)};
    });
}

rs_status rs_config_load(const char* path, rs_config** out) {
    return guard([&] {
        require(path && out, "rs_config_load: null argument");
        *out = new rs_config{rustseg::load_config(path)};
    });
}

rs_status rs_config_to_json(const rs_config* config, char** out) {
    return guard([&] {
        require(config && out, "rs_config_to_json: null argument");
        *out = dup_string(rustseg::config_to_json(config->config));
    });
}


rs_status rs_config_set_sigma(rs_config* config, double sigma) {
    return update(config, [&](auto& c) {
        if (sigma > 0.0) c.ssr.sigma = sigma;
        else c.ssr.sigma.reset();
    });
}

rs_status rs_config_set_eps(rs_config* config, double eps) {
    return update(config, [&](auto& c) { c.db.eps = eps; });
}

rs_status rs_config_set_min_pts(rs_config* config, int32_t min_pts) {
    return update(config, [&](auto& c) { c.db.min_pts = min_pts; });
}

rs_status rs_config_set_min_area(rs_config* config, uint64_t min_area) {
    return update(config, [&](auto& c) { c.min_area = static_cast<std::size_t>(min_area); });
}

rs_status rs_config_set_rust_threshold_pct(rs_config* config, double pct) {
    return update(config, [&](auto& c) { c.rust_threshold_pct = pct; });
}

rs_status rs_config_set_fusion(rs_config* config, rs_fusion fusion) {
    return update(config, [&](auto& c) {
        switch (fusion) {
            case RS_FUSION_COLOR_ONLY: c.filter.fusion = rustseg::Fusion::ColorOnly; break;
            case RS_FUSION_AND_WITH_THRESHOLD: c.filter.fusion = rustseg::Fusion::AndWithThreshold; break;
            case RS_FUSION_OR_WITH_THRESHOLD: c.filter.fusion = rustseg::Fusion::OrWithThreshold; break;
            default: throw rustseg::Error(rustseg::ErrorCode::InvalidArgument, "unknown fusion mode");
        }
    });
}

rs_status rs_config_set_emit(rs_config* config, uint32_t flags) {
    return update(config, [&](auto& c) {
        c.emit.mask = flags & RS_EMIT_MASK;
        c.emit.premask = flags & RS_EMIT_PREMASK;
        c.emit.overlay = flags & RS_EMIT_OVERLAY;
        c.emit.report = flags & RS_EMIT_REPORT;
    });
}

rs_status rs_config_set_emit_list(rs_config* config, const char* list) {
    return update(config, [&](auto& c) {
        require(list != nullptr, "null emit list");
        c.emit = rustseg::parse_emit(list);
    });
}

void rs_config_free(rs_config* config) { delete config; }

rs_status rs_analyze(const rs_image* image, const rs_config* config, const char* image_id, rs_report** out) {
    return guard([&] {
        require(image && config && out, "rs_analyze: null argument");
        auto result = rustseg::analyze(image->image, config->config, image_id ? image_id : "");
        *out = new rs_report{std::move(result.report)};
    });
}

rs_status rs_analyze_file(const char* path, const rs_config* config, const char* out_dir, rs_report** out) {
    return guard([&] {
        require(path && config && out, "rs_analyze_file: null argument");
        const std::filesystem::path p(path);
        const auto bytes = rustseg::read_file(p);
        const rustseg::RgbImage image = rustseg::decode_rgb(bytes);
        auto result = rustseg::analyze(image, config->config, rustseg::make_image_id(p.filename().string(), bytes));
        if (out_dir) rustseg::write_artifacts(image, result, out_dir, p.stem().string(), config->config.emit);
        *out = new rs_report{std::move(result.report)};
    });
}

double rs_report_percentage(const rs_report* report) { return report ? report->report.rust_percentage : 0.0; }

uint64_t rs_report_rust_pixels(const rs_report* report) { return report ? report->report.rust_pixel_count : 0; }

uint64_t rs_report_total_pixels(const rs_report* report) { return report ? report->report.total_pixels : 0; }

size_t rs_report_cluster_count(const rs_report* report) { return report ? report->report.clusters.size() : 0; }

rs_classification rs_report_classification(const rs_report* report) {
    return report && report->report.classification == rustseg::Classification::Rusty ? RS_RUSTY : RS_CLEAN;
}

rs_status rs_report_to_json(const rs_report* report, char** out) {
    return guard([&] {
        require(report && out, "rs_report_to_json: null argument");
        *out = dup_string(rustseg::report_to_json(report->report));
    });
}

void rs_report_free(rs_report* report) { delete report; }

rs_classification rs_classify(double rust_percentage, double rust_threshold_pct) {
    return rustseg::classify(rust_percentage, rust_threshold_pct) == rustseg::Classification::Rusty ? RS_RUSTY
                                                                                                   : RS_CLEAN;
}

rs_status rs_batch_run(const char* const* paths, size_t count, const rs_config* config, const char* out_dir,
                       uint32_t workers, rs_batch** out) {
    return guard([&] {
        require(config && out && (paths || count == 0), "rs_batch_run: null argument");
        std::vector<std::filesystem::path> inputs;
        for (size_t i = 0; i < count; ++i) {
            require(paths[i] != nullptr, "rs_batch_run: null path");
            inputs.emplace_back(paths[i]);
        }
        const auto expanded = rustseg::expand_inputs(inputs);
        std::optional<std::filesystem::path> dir;
        if (out_dir) dir = std::filesystem::path(out_dir);
        auto batch = std::make_unique<rs_batch>();
        batch->result = rustseg::run_batch(expanded, config->config, dir, workers);
        for (auto& item : batch->result.items) {
            batch->paths.push_back(item.path.string());
            batch->reports.push_back(item.report ? std::make_unique<rs_report>(rs_report{*item.report}) : nullptr);
        }
        *out = batch.release();
    });
}

size_t rs_batch_size(const rs_batch* batch) { return batch ? batch->result.items.size() : 0; }
size_t rs_batch_rusty(const rs_batch* batch) { return batch ? batch->result.rusty : 0; }
size_t rs_batch_clean(const rs_batch* batch) { return batch ? batch->result.clean : 0; }
size_t rs_batch_failed(const rs_batch* batch) { return batch ? batch->result.failed : 0; }

const rs_report* rs_batch_report(const rs_batch* batch, size_t i) {
    if (!batch || i >= batch->reports.size()) return nullptr;
    return batch->reports[i].get();
}

const char* rs_batch_error(const rs_batch* batch, size_t i) {
    if (!batch || i >= batch->result.items.size() || !batch->result.items[i].error) return nullptr;
    return batch->result.items[i].error->c_str();
}

const char* rs_batch_path(const rs_batch* batch, size_t i) {
    if (!batch || i >= batch->paths.size()) return nullptr;
    return batch->paths[i].c_str();
}

rs_status rs_batch_summary_json(const rs_batch* batch, char** out) {
    return guard([&] {
        require(batch && out, "rs_batch_summary_json: null argument");
        *out = dup_string(rustseg::batch_summary_json(batch->result));
    });
}

void rs_batch_free(rs_batch* batch) { delete batch; }

rs_status rs_service_create(const char* image_dir, const rs_config* initial, const char* host, int port,
                            const char* ui_dir, rs_service** out) {
    return guard([&] {
        require(image_dir && out, "rs_service_create: null argument");
        require(port >= 0 && port <= 65535, "rs_service_create: port out of range");
        auto svc = std::make_unique<rs_service>();
        svc->session = std::make_shared<rustseg::CalibrationSession>(
            image_dir, initial ? initial->config : rustseg::PipelineConfig{});
        rustseg::ServiceOptions opts;
        if (host) opts.host = host;
        opts.port = port;
        if (ui_dir) opts.ui_dir = std::filesystem::path(ui_dir);
        svc->server = std::make_unique<rustseg::CalibrationServer>(svc->session, opts);
        *out = svc.release();
    });
}

rs_status rs_service_start(rs_service* service, int* bound_port) {
    return guard([&] {
        require(service != nullptr, "rs_service_start: null service");
        const int port = service->server->start();
        if (bound_port) *bound_port = port;
    });
}

rs_status rs_service_run(rs_service* service) {
    return guard([&] {
        require(service != nullptr, "rs_service_run: null service");
        service->server->run();
    });
}

void rs_service_stop(rs_service* service) {
    if (service) service->server->stop();
}

size_t rs_service_image_count(const rs_service* service) {
    return service ? service->session->list_images().size() : 0;
}

void rs_service_free(rs_service* service) { delete service; }

}  // extern "C"
