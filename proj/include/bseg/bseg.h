#ifndef BSEG_BSEG_H
#define BSEG_BSEG_H

/*
 * C interface to the bridge segmentation library.
 *
 * Every function returns a bseg_status. On failure a human-readable message
 * for the calling thread is available from bseg_last_error() until the next
 * failing call on that thread. Objects are opaque handles created and
 * destroyed through this API; destroy functions accept NULL.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BSEG_BUILDING_LIBRARY)
#    define BSEG_API __declspec(dllexport)
#  else
#    define BSEG_API __declspec(dllimport)
#  endif
#else
#  define BSEG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bseg_status {
  BSEG_OK = 0,
  BSEG_ERR_CONFIG = 1,
  BSEG_ERR_SHAPE = 2,
  BSEG_ERR_DOMAIN = 3,
  BSEG_ERR_NUMERIC = 4,
  BSEG_ERR_FORMAT = 5,
  BSEG_ERR_IO = 6,
  BSEG_ERR_MISSING_INSTANCE = 7,
  BSEG_ERR_GENERATION = 8,
  BSEG_ERR_DEGENERATE_TIME = 9,
  BSEG_ERR_INVALID_ARGUMENT = 10,
  BSEG_ERR_INTERNAL = 99
} bseg_status;

BSEG_API const char* bseg_status_string(bseg_status status);
BSEG_API const char* bseg_last_error(void);
BSEG_API const char* bseg_version(void);

/* ---- run configuration (flat key=value) ---- */

typedef struct bseg_config bseg_config;

BSEG_API bseg_status bseg_config_create(bseg_config** out);
BSEG_API void bseg_config_destroy(bseg_config* cfg);
/* Applies every key=value line of a file; unknown keys are rejected. */
BSEG_API bseg_status bseg_config_load(bseg_config* cfg, const char* path);
BSEG_API bseg_status bseg_config_set(bseg_config* cfg, const char* key, const char* value);
/* Copies the value (NUL-terminated) into buf; *needed receives the length
 * including the terminator. Truncation yields BSEG_ERR_INVALID_ARGUMENT. */
BSEG_API bseg_status bseg_config_get(const bseg_config* cfg, const char* key, char* buf,
                                     size_t buflen, size_t* needed);

/* ---- noise schedule ---- */

typedef struct bseg_schedule bseg_schedule;

BSEG_API bseg_status bseg_schedule_create(int n_steps, double beta_max, double beta_min,
                                          bseg_schedule** out);
BSEG_API void bseg_schedule_destroy(bseg_schedule* schedule);
BSEG_API bseg_status bseg_schedule_sigma_at(const bseg_schedule* schedule, double t,
                                            double* sigma_fwd, double* sigma_bwd);

/* ---- raster operations on caller-owned buffers (row-major) ---- */

/* labels: H*W ids; out: H*W reverse distance values in [0, 1]. */
BSEG_API bseg_status bseg_reverse_distance_map(const uint16_t* labels, int height, int width,
                                               float* out);

typedef struct bseg_image_metrics {
  double bpq, sq, dq;
  size_t tp, fp, fn;
  double precision, recall, f1;
} bseg_image_metrics;

BSEG_API bseg_status bseg_compute_metrics(const uint16_t* pred, const uint16_t* gt, int height,
                                          int width, double iou_threshold, double radius,
                                          bseg_image_metrics* out);

/* mask: H*W values 0/1; labels_out: H*W 4-connected component ids. */
BSEG_API bseg_status bseg_connected_components(const uint8_t* mask, int height, int width,
                                               uint16_t* labels_out, size_t* n_instances);

/* ---- trained model ---- */

typedef struct bseg_model bseg_model;

BSEG_API bseg_status bseg_model_load(const char* checkpoint_path, bseg_model** out);
BSEG_API void bseg_model_destroy(bseg_model* model);
/* Segments one 8-bit RGB image (H*W*3). mask_prob_out (H*W floats) may be
 * NULL. use_ema selects the EMA parameter set. */
BSEG_API bseg_status bseg_model_segment(const bseg_model* model, const uint8_t* rgb, int height,
                                        int width, int use_ema, uint16_t* labels_out,
                                        float* mask_prob_out, size_t* n_instances);

/* ---- command-level workflows ---- */

typedef struct bseg_synth_options {
  int count;
  int size;
  int density;
  uint64_t seed;
} bseg_synth_options;

BSEG_API bseg_status bseg_synth(const bseg_synth_options* opts, const char* out_dir,
                                int* n_written);
BSEG_API bseg_status bseg_compute_rdms(const char* data_dir, int* n_written);

typedef struct bseg_train_summary {
  int iterations;
  double initial_loss;
  double final_loss;
} bseg_train_summary;

/* Reads data.dir from cfg; writes config.echo, loss.csv, checkpoint.bseg. */
BSEG_API bseg_status bseg_train(const bseg_config* cfg, const char* run_dir,
                                bseg_train_summary* out);

typedef struct bseg_infer_summary {
  int images;
  size_t instances;
} bseg_infer_summary;

BSEG_API bseg_status bseg_infer(const bseg_config* cfg, const char* checkpoint_path,
                                const char* input_dir, const char* out_dir,
                                bseg_infer_summary* out);

typedef struct bseg_eval_summary {
  int images;
  double bpq, sq, dq, precision, recall, f1;
  double pooled_bpq, pooled_sq, pooled_dq, pooled_precision, pooled_recall, pooled_f1;
} bseg_eval_summary;

/* out_dir may be NULL to skip writing metrics.csv and summary.txt. */
BSEG_API bseg_status bseg_eval(const bseg_config* cfg, const char* pred_dir, const char* gt_dir,
                               const char* out_dir, bseg_eval_summary* out);

BSEG_API bseg_status bseg_shape_stats(const char* label_dir, const char* csv_path,
                                      size_t* n_rows);

#ifdef __cplusplus
}
#endif

#endif /* BSEG_BSEG_H */
