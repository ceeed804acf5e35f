// Copyright 2026 The ogak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OGAK_OGAK_H_
#define OGAK_OGAK_H_

/* C interface to the ogak kernel-learning library.
 *
 * Objects are opaque handles released with the matching *_free call.
 * Every fallible call returns an ogak_status; on failure the message is
 * available from ogak_last_error() on the same thread until the next call. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define OGAK_API __declspec(dllexport)
#else
#define OGAK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ogak_status {
  OGAK_OK = 0,
  OGAK_E_ARGUMENT = 1,
  OGAK_E_RESOURCE = 2,
  OGAK_E_IO = 3,
  OGAK_E_FORMAT = 4,
  OGAK_E_METRIC = 5,
  OGAK_E_GENERATION = 6,
  OGAK_E_FIT = 7,
  OGAK_E_INTERNAL = 8
} ogak_status;

typedef struct ogak_dataset ogak_dataset;
typedef struct ogak_model ogak_model;

OGAK_API const char* ogak_version(void);
OGAK_API const char* ogak_status_name(ogak_status status);
/* Message for the last failure on this thread; empty after success. */
OGAK_API const char* ogak_last_error(void);
/* OGAK_THREADS if set, otherwise the hardware concurrency. */
OGAK_API unsigned ogak_default_threads(void);

/* ---- generation */

typedef struct ogak_generate_config {
  const char* problem;   /* poisson1d | helmholtz1d | cosine | logcos | logdiscrete */
  size_t dim;
  const char* domain;    /* interval | disk | cube, or NULL for the default by dim */
  size_t grid;           /* interval nodes, disk nodes, or cube nodes per axis */
  const char* mesh_path; /* imported point cloud, or NULL */
  double mesh_volume;    /* for an imported mesh without weights */
  size_t output_sensors; /* 0 keeps the full output mesh */
  double wave;
  double helmholtz_k;
  double gp_scale;
  double gp_variance;
  double gp_jitter;
  double gp_rank_floor; /* 0 selects the jittered Cholesky sampler */
  uint64_t seed;
  size_t train;
  size_t test;
  int normalize;
} ogak_generate_config;

OGAK_API void ogak_generate_config_default(ogak_generate_config* config);
/* Writes <out_dir>/train and <out_dir>/test. */
OGAK_API ogak_status ogak_generate(const ogak_generate_config* config, const char* out_dir,
                                   int force);

/* ---- datasets */

typedef struct ogak_dataset_info {
  size_t samples;
  size_t input_dim;
  size_t input_nodes;
  size_t output_dim;
  size_t output_nodes;
  int normalized;
} ogak_dataset_info;

OGAK_API ogak_status ogak_dataset_load(const char* dir, ogak_dataset** out);
OGAK_API ogak_status ogak_dataset_save(const ogak_dataset* data, const char* dir);
OGAK_API ogak_status ogak_dataset_info_get(const ogak_dataset* data, ogak_dataset_info* out);
/* Copies the N x m_f forcings (or N x m_u responses) row-major into buf. */
OGAK_API ogak_status ogak_dataset_forcings(const ogak_dataset* data, double* buf, size_t len);
OGAK_API ogak_status ogak_dataset_responses(const ogak_dataset* data, double* buf, size_t len);
/* Singular values go to sv (up to sv_cap entries); *sv_len receives the full count. */
OGAK_API ogak_status ogak_dataset_rank(const ogak_dataset* data, double threshold_rel,
                                       size_t* rank, double* sv, size_t sv_cap, size_t* sv_len);
OGAK_API void ogak_dataset_free(ogak_dataset* data);

/* ---- training */

typedef enum ogak_mode { OGAK_MODE_OGA = 0, OGAK_MODE_PWOGA = 1 } ogak_mode;

typedef struct ogak_train_config {
  ogak_mode mode;
  size_t n_max;
  size_t dict_samples;
  uint64_t seed;
  unsigned power;
  int normalized;
  unsigned threads;
  size_t cadence_dense;  /* evaluate every iteration up to this n */
  size_t cadence_stride; /* then every stride-th */
  size_t cache_limit;    /* bytes */
  const size_t* sensors; /* pwoga subset, or NULL */
  size_t n_sensors;
  size_t sensor_count; /* spread subset size when sensors is NULL; 0 = all */
} ogak_train_config;

#define OGAK_NO_SENSOR ((size_t)-1)

typedef struct ogak_record {
  size_t sensor; /* OGAK_NO_SENSOR for the direct fit */
  size_t n;
  double residual_H;
  double eps_u; /* NaN when not evaluated */
  double eps_G;
  double score;
  double gram_cond;
  double orthogonality;
  double coef_l1;
  size_t atom_index;
} ogak_record;

/* Direct fit: called once per iteration. Pointwise: once per finished
 * sensor with that sensor's last record; done/total count sensors. */
typedef void (*ogak_progress_fn)(const ogak_record* record, size_t done, size_t total,
                                 void* user);

OGAK_API void ogak_train_config_default(ogak_train_config* config);
/* eval may be NULL. A breakdown still returns OGAK_OK with the last good
 * model; query ogak_model_info for the breakdown count. */
OGAK_API ogak_status ogak_train(const ogak_dataset* data, const ogak_dataset* eval,
                                const ogak_train_config* config, ogak_progress_fn progress,
                                void* user, ogak_model** out);

/* ---- models */

typedef struct ogak_model_info {
  ogak_mode mode;
  size_t input_dim;
  size_t input_nodes;
  size_t output_nodes;
  size_t sensors;   /* 0 for a direct model */
  size_t atoms;     /* direct model atoms, or the total over sensors */
  size_t breakdowns;
  size_t trace_len; /* direct trace or pointwise aggregate */
  double initial_residual;
} ogak_model_info;

OGAK_API ogak_status ogak_model_load(const char* path, ogak_model** out);
OGAK_API ogak_status ogak_model_save(const ogak_model* model, const char* path);
OGAK_API ogak_status ogak_model_write_trace(const ogak_model* model, const char* path);
OGAK_API ogak_status ogak_model_info_get(const ogak_model* model, ogak_model_info* out);
OGAK_API ogak_status ogak_model_trace(const ogak_model* model, size_t index, ogak_record* out);
/* rows x m_f forcings in, rows x (m_u or sensors) predictions out, row-major. */
OGAK_API ogak_status ogak_model_predict(const ogak_model* model, const double* forcings,
                                        size_t rows, size_t cols, double* out, size_t out_len);
OGAK_API void ogak_model_free(ogak_model* model);

/* ---- evaluation and diagnostics */

typedef struct ogak_eval_options {
  const char* oracle; /* NULL: use the oracle recorded in the data, if any */
  double wave;
  double helmholtz_k;
  int want_kernel;            /* fail when no oracle is available */
  const char* abs_error_path; /* CSV of |u - u~|, or NULL */
} ogak_eval_options;

typedef struct ogak_eval_report {
  double eps_u;
  double eps_G; /* NaN without an oracle */
} ogak_eval_report;

OGAK_API void ogak_eval_options_default(ogak_eval_options* options);
OGAK_API ogak_status ogak_evaluate(const ogak_model* model, const ogak_dataset* data,
                                   const ogak_eval_options* options, ogak_eval_report* out);

typedef struct ogak_rate_report {
  double slope;
  double intercept;
  size_t n_lo;
  size_t n_hi;
  double r_squared;
  size_t points;
} ogak_rate_report;

/* column: residual_H | eps_u | eps_G. sensor: label to select in a
 * pointwise trace (NULL means the aggregate "all"). */
OGAK_API ogak_status ogak_rate(const char* trace_path, const char* column, const char* sensor,
                               size_t n_lo, size_t n_hi, ogak_rate_report* out);

/* Writes a key=value run manifest; dataset_dir may be NULL. */
OGAK_API ogak_status ogak_write_run_manifest(const char* path, const char* command,
                                             const ogak_train_config* config,
                                             const char* dataset_dir, const char* const* keys,
                                             const char* const* values, size_t n_extra);
/* 16 hex digits plus terminator. */
OGAK_API ogak_status ogak_hash_file(const char* path, char out[17]);

/* ---- reproduction presets */

typedef void (*ogak_log_fn)(const char* line, void* user);

OGAK_API size_t ogak_preset_count(void);
OGAK_API const char* ogak_preset_name(size_t index);
/* *passed is 1 when every target band held and no fatal breakdown occurred. */
OGAK_API ogak_status ogak_repro(const char* preset, const char* out_dir, uint64_t seed,
                                unsigned threads, int force, ogak_log_fn log, void* user,
                                int* passed);

#ifdef __cplusplus
}
#endif

#endif  /* OGAK_OGAK_H_ */
