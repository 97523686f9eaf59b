// rustseg command line: batch rust analysis and the calibration service.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rustseg/rustseg.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBatch = 1;
constexpr int kExitConfig = 2;

struct ConfigHandle {
    rs_config* ptr = nullptr;
    ~ConfigHandle() { rs_config_free(ptr); }
};

struct Overrides {
    std::optional<double> sigma;
    std::optional<double> eps;
    std::optional<int> min_pts;
    std::optional<std::uint64_t> min_area;
    std::optional<double> rust_threshold_pct;
    std::optional<std::string> fusion;
    std::optional<std::string> emit;
};

int fail(int code, const std::string& what) {
    std::cerr << "rustseg: " << what;
    if (*rs_last_error()) std::cerr << ": " << rs_last_error();
    std::cerr << "\n";
    return code;
}

// Returns 0 on success or the exit code to use.
int build_config(const std::string& path, const Overrides& o, ConfigHandle& cfg) {
    const rs_status st = path.empty() ? rs_config_default(&cfg.ptr) : rs_config_load(path.c_str(), &cfg.ptr);
    if (st != RS_OK) return fail(kExitConfig, "cannot load config");

    auto check = [](rs_status s, const char* flag) {
        return s == RS_OK ? 0 : fail(kExitConfig, std::string("bad value for ") + flag);
    };
    int rc = 0;
    if (o.sigma && (rc = check(rs_config_set_sigma(cfg.ptr, *o.sigma), "--sigma"))) return rc;
    if (o.eps && (rc = check(rs_config_set_eps(cfg.ptr, *o.eps), "--eps"))) return rc;
    if (o.min_pts && (rc = check(rs_config_set_min_pts(cfg.ptr, *o.min_pts), "--min-pts"))) return rc;
    if (o.min_area && (rc = check(rs_config_set_min_area(cfg.ptr, *o.min_area), "--min-area"))) return rc;
    if (o.rust_threshold_pct &&
        (rc = check(rs_config_set_rust_threshold_pct(cfg.ptr, *o.rust_threshold_pct), "--rust-threshold-pct")))
        return rc;
    if (o.fusion) {
        rs_fusion f = *o.fusion == "color" ? RS_FUSION_COLOR_ONLY
                      : *o.fusion == "or"  ? RS_FUSION_OR_WITH_THRESHOLD
                                           : RS_FUSION_AND_WITH_THRESHOLD;
        if ((rc = check(rs_config_set_fusion(cfg.ptr, f), "--fusion"))) return rc;
    }
    if (o.emit && (rc = check(rs_config_set_emit_list(cfg.ptr, o.emit->c_str()), "--emit"))) return rc;
    return 0;
}

int run_analyze(const std::vector<std::string>& inputs, const std::string& config_path, const std::string& out_dir,
                unsigned jobs, const Overrides& overrides) {
    ConfigHandle cfg;
    if (int rc = build_config(config_path, overrides, cfg)) return rc;

    std::vector<const char*> paths;
    for (const auto& p : inputs) paths.push_back(p.c_str());

    rs_batch* batch = nullptr;
    if (rs_batch_run(paths.data(), paths.size(), cfg.ptr, out_dir.c_str(), jobs, &batch) != RS_OK)
        return fail(kExitBatch, "batch failed");

    for (size_t i = 0; i < rs_batch_size(batch); ++i) {
        if (const rs_report* r = rs_batch_report(batch, i)) {
            std::printf("%s\t%.4f%%\t%s\n", rs_batch_path(batch, i), rs_report_percentage(r),
                        rs_report_classification(r) == RS_RUSTY ? "RUSTY" : "CLEAN");
        } else {
            std::printf("%s\tFAILED\t%s\n", rs_batch_path(batch, i), rs_batch_error(batch, i));
        }
    }
    std::printf("%zu images: %zu RUSTY, %zu CLEAN, %zu failed\n", rs_batch_size(batch), rs_batch_rusty(batch),
                rs_batch_clean(batch), rs_batch_failed(batch));

    char* summary = nullptr;
    int rc = kExitOk;
    if (rs_batch_summary_json(batch, &summary) == RS_OK) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        std::ofstream out(out_dir + "/summary.json", std::ios::binary | std::ios::trunc);
        out << summary;
        if (!out) rc = fail(kExitBatch, "cannot write summary.json");
        rs_string_free(summary);
    }
    rs_batch_free(batch);
    return rc;
}

int run_calibrate(const std::string& image_dir, const std::string& listen, const std::string& config_path,
                  const std::string& ui_dir) {
    const auto colon = listen.rfind(':');
    if (colon == std::string::npos) return fail(kExitConfig, "--listen expects host:port");
    const std::string host = listen.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(listen.substr(colon + 1));
    } catch (const std::exception&) {
        return fail(kExitConfig, "--listen expects host:port");
    }

    ConfigHandle cfg;
    if (int rc = build_config(config_path, {}, cfg)) return rc;

    // Block termination signals before the server spawns threads so only
    // sigwait below sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    rs_service* svc = nullptr;
    if (rs_service_create(image_dir.c_str(), cfg.ptr, host.c_str(), port, ui_dir.empty() ? nullptr : ui_dir.c_str(),
                          &svc) != RS_OK)
        return fail(kExitBatch, "cannot create service");
    int bound = 0;
    if (rs_service_start(svc, &bound) != RS_OK) {
        rs_service_free(svc);
        return fail(kExitBatch, "cannot start service");
    }
    std::printf("serving %zu images on http://%s:%d/\n", rs_service_image_count(svc), host.c_str(), bound);
    std::fflush(stdout);

    int sig = 0;
    sigwait(&signals, &sig);
    rs_service_stop(svc);
    rs_service_free(svc);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rust segmentation for painted metal structures"};
    app.require_subcommand(1);
    app.set_version_flag("--version", rs_version());

    auto* analyze = app.add_subcommand("analyze", "Analyze images and report rust percentage");
    std::vector<std::string> inputs;
    std::string config_path;
    std::string out_dir;
    unsigned jobs = 1;
    Overrides ov;
    analyze->add_option("paths", inputs, "Image files or directories")->required();
    analyze->add_option("--config", config_path, "JSON pipeline config")->check(CLI::ExistingFile);
    analyze->add_option("--out-dir", out_dir, "Directory for artifacts and summary.json")->required();
    analyze->add_option("--sigma", ov.sigma, "Retinex surround sigma in pixels");
    analyze->add_option("--eps", ov.eps, "DBSCAN radius in pixels");
    analyze->add_option("--min-pts", ov.min_pts, "DBSCAN minimum neighbors (self-inclusive)");
    analyze->add_option("--min-area", ov.min_area, "Minimum cluster area in pixels");
    analyze->add_option("--rust-threshold-pct", ov.rust_threshold_pct, "RUSTY cutoff in percent");
    analyze->add_option("--fusion", ov.fusion, "Mask fusion")->check(CLI::IsMember({"color", "and", "or"}));
    analyze->add_option("--emit", ov.emit, "Artifacts: mask,premask,overlay,report");
    analyze->add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 256u));

    auto* calibrate = app.add_subcommand("calibrate", "Serve the interactive calibration API");
    std::string image_dir;
    std::string listen = "127.0.0.1:8080";
    std::string ui_dir;
    calibrate->add_option("image-dir", image_dir, "Directory of PNG/JPEG images")->required();
    calibrate->add_option("--listen", listen, "host:port");
    calibrate->add_option("--config", config_path, "Initial session config")->check(CLI::ExistingFile);
    calibrate->add_option("--ui-dir", ui_dir, "Static UI bundle served at /");

    auto* defaults = app.add_subcommand("defaults", "Print the default config as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    if (*analyze) return run_analyze(inputs, config_path, out_dir, jobs, ov);
    if (*calibrate) return run_calibrate(image_dir, listen, config_path, ui_dir);
    if (*defaults) {
        ConfigHandle cfg;
        char* json = nullptr;
        if (rs_config_default(&cfg.ptr) != RS_OK || rs_config_to_json(cfg.ptr, &json) != RS_OK)
            return fail(kExitBatch, "cannot render defaults");
        std::fputs(json, stdout);
        rs_string_free(json);
    }
    return kExitOk;
}
