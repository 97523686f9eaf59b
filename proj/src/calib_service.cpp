#include "rustseg/calib_service.hpp"

#include <algorithm>
#include <cctype>
#include <iostream>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <thread>
#include <tuple>
#include <unordered_map>

#include <httplib.h>

#include "config_json.hpp"
#include "rustseg/error.hpp"

namespace rustseg {

// ---------------------------------------------------------------------------
// Session

struct CalibrationSession::Impl {
    struct Stored {
        ImageEntry entry;
        RgbImage rgb;
        HsvImage hsv;
    };
    using StageKey = std::tuple<std::string, double, double>;

    std::vector<Stored> images;
    std::unordered_map<std::string, std::size_t> by_id;

    mutable std::shared_mutex config_mutex;
    PipelineConfig config;

    mutable std::mutex cache_mutex;
    mutable std::map<StageKey, std::shared_ptr<const ThresholdStage>> cache;

    const Stored& find(const std::string& id) const {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw Error(ErrorCode::NotFound, "unknown image id '" + id + "'");
        return images[it->second];
    }

    std::shared_ptr<const ThresholdStage> stage(const Stored& s, const SsrParams& ssr) const {
        validate(ssr);
        const double sigma = effective_sigma(ssr, s.rgb.width(), s.rgb.height());
        StageKey key{s.entry.id, sigma, ssr.epsilon_floor};
        {
            std::lock_guard lock(cache_mutex);
            if (auto it = cache.find(key); it != cache.end()) return it->second;
        }
        // Computed outside the lock; concurrent misses produce identical values.
        auto computed = std::make_shared<const ThresholdStage>(threshold_stage(s.hsv, ssr));
        std::lock_guard lock(cache_mutex);
        cache[key] = computed;
        return computed;
    }
};

namespace {

bool is_image_name(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

}  // namespace

CalibrationSession::CalibrationSession(const std::filesystem::path& image_dir, PipelineConfig initial)
    : impl_(std::make_unique<Impl>()) {
    validate(initial);
    impl_->config = std::move(initial);
    std::error_code ec;
    if (!std::filesystem::is_directory(image_dir, ec))
        throw Error(ErrorCode::Io, "image directory not found: " + image_dir.string());

    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(image_dir))
        if (e.is_regular_file() && is_image_name(e.path())) files.push_back(e.path());
    std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.filename() < b.filename(); });

    for (const auto& path : files) {
        try {
            const auto bytes = read_file(path);
            Impl::Stored s;
            s.rgb = decode_rgb(bytes);
            s.hsv = rgb_image_to_hsv(s.rgb);
            s.entry = {make_image_id(path.filename().string(), bytes), path.filename().string(), s.rgb.width(),
                       s.rgb.height()};
            impl_->by_id.emplace(s.entry.id, impl_->images.size());
            impl_->images.push_back(std::move(s));
        } catch (const Error& e) {
            std::cerr << "skipping " << path << ": " << e.what() << "\n";
        }
    }
}

CalibrationSession::~CalibrationSession() = default;

std::vector<ImageEntry> CalibrationSession::list_images() const {
    std::vector<ImageEntry> out;
    out.reserve(impl_->images.size());
    for (const auto& s : impl_->images) out.push_back(s.entry);
    return out;
}

const RgbImage& CalibrationSession::image(const std::string& id) const { return impl_->find(id).rgb; }

std::vector<std::uint8_t> CalibrationSession::image_png(const std::string& id) const {
    return encode_rgb_png(impl_->find(id).rgb);
}

BinaryMask CalibrationSession::preview_mask(const std::string& id, const FilterConfig& filter,
                                            const SsrParams& ssr) const {
    const auto& s = impl_->find(id);
    return premask(s.hsv, *impl_->stage(s, ssr), filter);
}

std::vector<std::uint8_t> CalibrationSession::preview_mask_png(const std::string& id, const FilterConfig& filter,
                                                               const SsrParams& ssr) const {
    return encode_mask_png(preview_mask(id, filter, ssr));
}

RustReport CalibrationSession::analyze_now(const std::string& id, const PipelineConfig& config) const {
    validate(config);
    const auto& s = impl_->find(id);
    return analyze(s.rgb, s.hsv, *impl_->stage(s, config.ssr), config, s.entry.id).report;
}

PipelineConfig CalibrationSession::config() const {
    std::shared_lock lock(impl_->config_mutex);
    return impl_->config;
}

void CalibrationSession::set_config(PipelineConfig config) {
    validate(config);
    std::unique_lock lock(impl_->config_mutex);
    impl_->config = std::move(config);
}

std::string CalibrationSession::export_config() const { return config_to_json(config()); }

void CalibrationSession::import_config(const std::string& json) { set_config(config_from_json(json)); }

std::size_t CalibrationSession::cached_stages() const {
    std::lock_guard lock(impl_->cache_mutex);
    return impl_->cache.size();
}

// ---------------------------------------------------------------------------
// HTTP

namespace {

constexpr const char* kFallbackIndex = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>rustseg calibration</title></head>
<body><h1>rustseg calibration service</h1>
<p>No UI bundle mounted (start with --ui-dir). API:</p>
<ul>
<li>GET /api/images</li><li>GET /api/images/{id}</li>
<li>POST /api/mask</li><li>POST /api/analyze</li>
<li>GET /api/config, PUT /api/config</li>
</ul></body></html>
)";

void send_json(httplib::Response& res, int status, const detail::Json& body) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
    detail::Json body;
    int status = 500;
    switch (e.code()) {
        case ErrorCode::NotFound:
            status = 404;
            body["error"] = "not_found";
            break;
        case ErrorCode::Config:
        case ErrorCode::InvalidArgument:
            status = 400;
            body["error"] = "bad_request";
            break;
        default: body["error"] = "internal"; break;
    }
    body["message"] = e.what();
    body["fields"] = detail::Json::array();
    if (const auto* ce = dynamic_cast<const ConfigError*>(&e))
        for (const auto& i : ce->issues()) body["fields"].push_back({{"field", i.field}, {"message", i.message}});
    send_json(res, status, body);
}

detail::Json parse_body(const httplib::Request& req) {
    try {
        return detail::Json::parse(req.body);
    } catch (const detail::Json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
}

std::string require_image_id(const detail::Json& body) {
    auto it = body.find("image_id");
    if (it == body.end() || !it->is_string()) throw ConfigError("image_id", "required string");
    return it->get<std::string>();
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
        try {
            fn(req, res);
        } catch (const Error& e) {
            send_error(res, e);
        } catch (const std::exception& e) {
            send_error(res, Error(ErrorCode::Io, e.what()));
        }
    };
}

}  // namespace

struct CalibrationServer::Impl {
    std::shared_ptr<CalibrationSession> session;
    ServiceOptions options;
    httplib::Server server;
    std::thread thread;

    void install_routes() {
        auto& s = *session;
        server.Get("/api/images", guarded([&s](const httplib::Request&, httplib::Response& res) {
                       detail::Json list = detail::Json::array();
                       for (const auto& e : s.list_images())
                           list.push_back({{"id", e.id}, {"name", e.name}, {"width", e.width}, {"height", e.height}});
                       send_json(res, 200, list);
                   }));
        server.Get("/api/images/:id", guarded([&s](const httplib::Request& req, httplib::Response& res) {
                       const auto png = s.image_png(req.path_params.at("id"));
                       res.set_content(std::string(png.begin(), png.end()), "image/png");
                   }));
        server.Post("/api/mask", guarded([&s](const httplib::Request& req, httplib::Response& res) {
                        const detail::Json body = parse_body(req);
                        if (!body.is_object()) throw ConfigError("", "body must be a JSON object");
                        for (const auto& item : body.items())
                            if (item.key() != "image_id" && item.key() != "ranges" && item.key() != "ssr" &&
                                item.key() != "fusion")
                                throw ConfigError(item.key(), "unknown key");
                        const std::string id = require_image_id(body);
                        const PipelineConfig cfg = detail::config_from_object(body, PipelineConfig{}, {"image_id"});
                        const auto png = s.preview_mask_png(id, cfg.filter, cfg.ssr);
                        res.set_content(std::string(png.begin(), png.end()), "image/png");
                    }));
        server.Post("/api/analyze", guarded([&s](const httplib::Request& req, httplib::Response& res) {
                        const detail::Json body = parse_body(req);
                        const std::string id = require_image_id(body);
                        const PipelineConfig cfg = detail::config_from_object(body, PipelineConfig{}, {"image_id"});
                        res.set_content(report_to_json(s.analyze_now(id, cfg)), "application/json");
                    }));
        server.Get("/api/config", guarded([&s](const httplib::Request&, httplib::Response& res) {
                       res.set_content(s.export_config(), "application/json");
                   }));
        server.Put("/api/config", guarded([&s](const httplib::Request& req, httplib::Response& res) {
                       s.import_config(req.body);
                       res.set_content(s.export_config(), "application/json");
                   }));

        if (options.ui_dir) {
            if (!server.set_mount_point("/", options.ui_dir->string()))
                throw Error(ErrorCode::Io, "ui directory not found: " + options.ui_dir->string());
        } else {
            server.Get("/", [](const httplib::Request&, httplib::Response& res) {
                res.set_content(kFallbackIndex, "text/html");
            });
        }
    }

    int bind() {
        int port = options.port;
        if (port == 0) {
            port = server.bind_to_any_port(options.host);
            if (port < 0) throw Error(ErrorCode::Io, "cannot bind " + options.host);
        } else if (!server.bind_to_port(options.host, port)) {
            throw Error(ErrorCode::Io, "cannot bind " + options.host + ":" + std::to_string(port));
        }
        return port;
    }
};

CalibrationServer::CalibrationServer(std::shared_ptr<CalibrationSession> session, ServiceOptions options)
    : impl_(std::make_unique<Impl>()) {
    if (!session) throw Error(ErrorCode::InvalidArgument, "server needs a session");
    impl_->session = std::move(session);
    impl_->options = std::move(options);
    impl_->install_routes();
}

CalibrationServer::~CalibrationServer() { stop(); }

int CalibrationServer::start() {
    const int port = impl_->bind();
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return port;
}

void CalibrationServer::run() {
    impl_->bind();
    impl_->server.listen_after_bind();
}

void CalibrationServer::stop() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

bool CalibrationServer::running() const { return impl_->server.is_running(); }

}  // namespace rustseg
