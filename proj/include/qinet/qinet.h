/*
 * Copyright 2026 The qinet Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * qinet C API: Qini curve estimation under clustered interference.
 *
 * All objects are opaque handles created by a qinet_*_create / load / read
 * function and released with the matching qinet_*_destroy (which accepts
 * NULL). Every fallible call returns a qinet_status; on failure
 * qinet_last_error() describes the error for the calling thread until that
 * thread's next API call.
 *
 * Handles are immutable after creation except where a setter is provided,
 * and immutable handles may be shared across threads.
 */

#ifndef QINET_QINET_H_
#define QINET_QINET_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(QINET_BUILDING_LIBRARY)
#define QINET_API __declspec(dllexport)
#else
#define QINET_API __declspec(dllimport)
#endif
#else
#define QINET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qinet_status {
  QINET_OK = 0,
  QINET_ERR_INVALID_ARGUMENT = 1, /* value outside the contract, NULL handle */
  QINET_ERR_VALIDATION = 2,       /* malformed dataset or configuration */
  QINET_ERR_IO = 3,
  QINET_ERR_NUMERIC = 4, /* positivity violation, non-finite value */
  QINET_ERR_RUNTIME = 5  /* failed repetitions, internal errors */
} qinet_status;

typedef struct qinet_config qinet_config;
typedef struct qinet_dataset qinet_dataset;
typedef struct qinet_sample qinet_sample;
typedef struct qinet_curve qinet_curve;

QINET_API const char* qinet_version(void);
QINET_API const char* qinet_last_error(void);
QINET_API const char* qinet_status_name(qinet_status status);

/* ---- Configuration ---------------------------------------------------- */

QINET_API qinet_status qinet_config_load(const char* path, qinet_config** out);
QINET_API qinet_status qinet_config_parse(const char* text, qinet_config** out);
QINET_API void qinet_config_destroy(qinet_config* config);
QINET_API qinet_status qinet_config_set_seed(qinet_config* config, uint64_t seed);
QINET_API qinet_status qinet_config_set_workers(qinet_config* config, size_t workers);
QINET_API qinet_status qinet_config_set_output(qinet_config* config, const char* dir);
QINET_API qinet_status qinet_config_set_per_curve_files(qinet_config* config, int enabled);
QINET_API qinet_status qinet_config_hash(const qinet_config* config, uint64_t* out);
QINET_API uint64_t qinet_config_seed(const qinet_config* config);
QINET_API size_t qinet_config_grid_size(const qinet_config* config);
QINET_API double qinet_config_treat_prob(const qinet_config* config);
QINET_API size_t qinet_config_num_estimators(const qinet_config* config);
/* Borrowed string valid for the lifetime of the config. */
QINET_API const char* qinet_config_estimator(const qinet_config* config, size_t index);

/* ---- Datasets ---------------------------------------------------------- */

QINET_API qinet_status qinet_dataset_read_csv(const char* path, qinet_dataset** out);
QINET_API qinet_status qinet_dataset_write_csv(const qinet_dataset* dataset,
                                               const char* path);
QINET_API void qinet_dataset_destroy(qinet_dataset* dataset);
QINET_API size_t qinet_dataset_num_clusters(const qinet_dataset* dataset);
QINET_API size_t qinet_dataset_num_units(const qinet_dataset* dataset);

/* ---- Simulation -------------------------------------------------------- */

/* Samples the base [simulator] setting of `config`: Omega from the config seed
 * (or its CSV files) and the data from repetition 0's seed, so the dataset is
 * the one repetition 0 of an experiment would see. */
QINET_API qinet_status qinet_simulate(const qinet_config* config, qinet_sample** out);
QINET_API void qinet_sample_destroy(qinet_sample* sample);
/* Borrowed; valid for the lifetime of the sample. */
QINET_API const qinet_dataset* qinet_sample_dataset(const qinet_sample* sample);

/* Perturbed baseline scores, one per unit (`count` must equal the unit
 * count). */
QINET_API qinet_status qinet_sample_baseline_scores(const qinet_sample* sample,
                                                    double epsilon, uint64_t noise_seed,
                                                    double* scores, size_t count);
/* Same score computed from a dataset's covariates and the config's Omega. */
QINET_API qinet_status qinet_baseline_scores(const qinet_config* config,
                                             const qinet_dataset* dataset, double epsilon,
                                             uint64_t noise_seed, double* scores,
                                             size_t count);

/* Exact policy value given covariates for per-unit 0/1 decisions. */
QINET_API qinet_status qinet_sample_true_value(const qinet_sample* sample,
                                               const uint8_t* decisions, size_t count,
                                               double* out);
QINET_API qinet_status qinet_sample_true_curve(const qinet_sample* sample,
                                               const double* scores, size_t count,
                                               size_t grid_size, uint64_t tie_seed,
                                               qinet_curve** out);

/* ---- Qini curves ------------------------------------------------------- */

typedef struct qinet_qini_options {
  size_t grid_size;       /* K >= 1 */
  double treat_prob;      /* known constant propensity e_1 */
  uint64_t tie_seed;      /* tie-break noise */
  double max_budget;      /* B_max for uniform cost */
  int uniform_cost;       /* 0: budgets are estimated policy costs */
  size_t folds;           /* cross-fitting folds of augmented estimators */
  uint64_t crossfit_seed; /* fold shuffle */
} qinet_qini_options;

QINET_API qinet_qini_options qinet_qini_options_default(void);

/* Estimates a curve for per-unit `scores` with an estimator id such as
 * "ipw" or "beta_ipw:1". With uniform_cost = 0, budgets are the cost-channel
 * estimates of the same estimator and B_max is the estimated cost of
 * treating everyone. */
QINET_API qinet_status qinet_estimate_curve(const qinet_dataset* dataset,
                                            const double* scores, size_t count,
                                            const qinet_qini_options* options,
                                            const char* estimator_id, qinet_curve** out);
QINET_API void qinet_curve_destroy(qinet_curve* curve);
QINET_API size_t qinet_curve_num_points(const qinet_curve* curve);
QINET_API qinet_status qinet_curve_point(const qinet_curve* curve, size_t k,
                                         double* budget, double* qini);
QINET_API const char* qinet_curve_estimator_id(const qinet_curve* curve);
QINET_API qinet_status qinet_curve_auc(const qinet_curve* curve, double* out);

/* Writes curves as a tall CSV (k,budget,qini,estimator_id,seed,repetition,
 * n_buyers,n_items,eta,epsilon). The setting columns describe `dataset`:
 * cluster count, largest cluster size, and `eta` (may be NULL: "na"). */
QINET_API qinet_status qinet_curves_write_csv(const qinet_curve* const* curves,
                                              size_t count, const qinet_dataset* dataset,
                                              const char* eta, double epsilon,
                                              uint64_t seed, size_t repetition,
                                              const char* path);

/* ---- Experiments ------------------------------------------------------- */

typedef struct qinet_run_options {
  int keep_going; /* finish with status OK even when repetitions failed */
  int verbose;    /* progress lines on standard error */
} qinet_run_options;

/* Runs the experiment and writes its outputs to the config's output
 * directory. `failures` (may be NULL) receives the failed repetition count. */
QINET_API qinet_status qinet_experiment_run(const qinet_config* config,
                                            const qinet_run_options* options,
                                            size_t* failures);

/* Re-aggregates raw curves (a curves.csv file, or a directory of per-curve
 * CSV files) into metric CSVs, panels and report.txt under `out_dir`. */
QINET_API qinet_status qinet_report(const char* curves_path, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* QINET_QINET_H_ */
