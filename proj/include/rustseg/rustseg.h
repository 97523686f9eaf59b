/*
 * rustseg C API.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an rs_status; on
 * failure a description is available from rs_last_error() on the same thread
 * until the next rustseg call on that thread. Strings returned through char**
 * out-parameters are heap allocated and released with rs_string_free.
 */
#ifndef RUSTSEG_H
#define RUSTSEG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RUSTSEG_BUILDING)
#    define RS_API __declspec(dllexport)
#  else
#    define RS_API __declspec(dllimport)
#  endif
#else
#  define RS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rs_status {
  RS_OK = 0,
  RS_ERR_INVALID_ARGUMENT = 1,
  RS_ERR_IO = 2,
  RS_ERR_UNSUPPORTED_FORMAT = 3,
  RS_ERR_DIMENSION = 4,
  RS_ERR_CONFIG = 5,
  RS_ERR_DEGENERATE = 6,
  RS_ERR_BATCH = 7,
  RS_ERR_NOT_FOUND = 8,
  RS_ERR_INTERNAL = 9
} rs_status;

typedef enum rs_fusion {
  RS_FUSION_COLOR_ONLY = 0,
  RS_FUSION_AND_WITH_THRESHOLD = 1,
  RS_FUSION_OR_WITH_THRESHOLD = 2
} rs_fusion;

typedef enum rs_classification {
  RS_CLEAN = 0,
  RS_RUSTY = 1
} rs_classification;

/* Artifact flags for rs_config_set_emit. */
enum {
  RS_EMIT_MASK = 1u << 0,
  RS_EMIT_PREMASK = 1u << 1,
  RS_EMIT_OVERLAY = 1u << 2,
  RS_EMIT_REPORT = 1u << 3
};

typedef struct rs_image rs_image;
typedef struct rs_config rs_config;
typedef struct rs_report rs_report;
typedef struct rs_batch rs_batch;
typedef struct rs_service rs_service;

RS_API const char* rs_version(void);
RS_API const char* rs_status_string(rs_status status);
RS_API const char* rs_last_error(void);
RS_API void rs_string_free(char* s);

/* Images: RGB, channels in [0,1]. */
RS_API rs_status rs_image_load(const char* path, rs_image** out);
RS_API rs_status rs_image_from_rgb8(const uint8_t* rgb, uint32_t width, uint32_t height, rs_image** out);
RS_API rs_status rs_image_size(const rs_image* image, uint32_t* width, uint32_t* height);
RS_API void rs_image_free(rs_image* image);

/* Pipeline configuration. */
RS_API rs_status rs_config_default(rs_config** out);
RS_API rs_status rs_config_from_json(const char* json, rs_config** out);
RS_API rs_status rs_config_load(const char* path, rs_config** out);
RS_API rs_status rs_config_to_json(const rs_config* config, char** out);
RS_API rs_status rs_config_set_sigma(rs_config* config, double sigma); /* sigma <= 0 restores auto */
RS_API rs_status rs_config_set_eps(rs_config* config, double eps);
RS_API rs_status rs_config_set_min_pts(rs_config* config, int32_t min_pts);
RS_API rs_status rs_config_set_min_area(rs_config* config, uint64_t min_area);
RS_API rs_status rs_config_set_rust_threshold_pct(rs_config* config, double pct);
RS_API rs_status rs_config_set_fusion(rs_config* config, rs_fusion fusion);
RS_API rs_status rs_config_set_emit(rs_config* config, uint32_t flags);
/* Parses "mask,premask,overlay,report". */
RS_API rs_status rs_config_set_emit_list(rs_config* config, const char* list);
RS_API void rs_config_free(rs_config* config);

/* Single-image analysis. */
RS_API rs_status rs_analyze(const rs_image* image, const rs_config* config, const char* image_id, rs_report** out);
/* Loads path, analyzes it, and writes the artifacts selected by the config's
 * emit flags into out_dir (NULL writes nothing). */
RS_API rs_status rs_analyze_file(const char* path, const rs_config* config, const char* out_dir, rs_report** out);
RS_API double rs_report_percentage(const rs_report* report);
RS_API uint64_t rs_report_rust_pixels(const rs_report* report);
RS_API uint64_t rs_report_total_pixels(const rs_report* report);
RS_API size_t rs_report_cluster_count(const rs_report* report);
RS_API rs_classification rs_report_classification(const rs_report* report);
RS_API rs_status rs_report_to_json(const rs_report* report, char** out);
RS_API void rs_report_free(rs_report* report);

RS_API rs_classification rs_classify(double rust_percentage, double rust_threshold_pct);

/* Batch analysis. Directories in `paths` expand to their PNG/JPEG files.
 * Fails with RS_ERR_BATCH when no image could be analyzed. */
RS_API rs_status rs_batch_run(const char* const* paths, size_t count, const rs_config* config, const char* out_dir,
                              uint32_t workers, rs_batch** out);
RS_API size_t rs_batch_size(const rs_batch* batch);
RS_API size_t rs_batch_rusty(const rs_batch* batch);
RS_API size_t rs_batch_clean(const rs_batch* batch);
RS_API size_t rs_batch_failed(const rs_batch* batch);
/* Borrowed pointer valid until rs_batch_free; NULL when item i failed. */
RS_API const rs_report* rs_batch_report(const rs_batch* batch, size_t i);
RS_API const char* rs_batch_error(const rs_batch* batch, size_t i);
RS_API const char* rs_batch_path(const rs_batch* batch, size_t i);
RS_API rs_status rs_batch_summary_json(const rs_batch* batch, char** out);
RS_API void rs_batch_free(rs_batch* batch);

/* Calibration service. host NULL means 127.0.0.1; port 0 picks a free port.
 * ui_dir may be NULL. */
RS_API rs_status rs_service_create(const char* image_dir, const rs_config* initial, const char* host, int port,
                                   const char* ui_dir, rs_service** out);
/* Serves on a background thread; *bound_port receives the listening port. */
RS_API rs_status rs_service_start(rs_service* service, int* bound_port);
/* Serves on the calling thread until rs_service_stop is called elsewhere. */
RS_API rs_status rs_service_run(rs_service* service);
RS_API void rs_service_stop(rs_service* service);
RS_API size_t rs_service_image_count(const rs_service* service);
RS_API void rs_service_free(rs_service* service);

#ifdef __cplusplus
}
#endif

#endif /* RUSTSEG_H */
