// Copyright 2026 The MSDRO Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the multi-source DRO library. All objects are opaque
 * handles released with their _free function. Functions return an
 * msdro_status; on failure msdro_last_error() describes the problem for the
 * calling thread. */
#ifndef MSDRO_MSDRO_H_
#define MSDRO_MSDRO_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MSDRO_API __declspec(dllexport)
#else
#define MSDRO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum msdro_status {
  MSDRO_OK = 0,
  MSDRO_ERR_INPUT = 1,
  MSDRO_ERR_UNSUPPORTED = 2,
  MSDRO_ERR_SIZE = 3,
  MSDRO_ERR_MODE = 4,
  MSDRO_ERR_TOPOLOGY = 5,
  MSDRO_ERR_PARSE = 6,
  MSDRO_ERR_IO = 7,
  MSDRO_ERR_INFEASIBLE = 8,
  MSDRO_ERR_UNBOUNDED = 9,
  MSDRO_ERR_SOLVER = 10,
  MSDRO_ERR_EXTRACTION = 11,
  MSDRO_ERR_INTERNAL = 99
} msdro_status;

typedef enum msdro_noise_kind {
  MSDRO_NOISE_LAPLACE = 0,
  MSDRO_NOISE_GAUSSIAN = 1
} msdro_noise_kind;

typedef enum msdro_norm { MSDRO_NORM_L1 = 0, MSDRO_NORM_L2 = 1 } msdro_norm;

typedef enum msdro_error_mean {
  MSDRO_ERROR_MEAN_ZERO = 0,
  MSDRO_ERROR_MEAN_FORECAST_SHIFT = 1
} msdro_error_mean;

typedef struct msdro_network msdro_network;
typedef struct msdro_dataset msdro_dataset;
typedef struct msdro_solution msdro_solution;
typedef struct msdro_sweep msdro_sweep;

MSDRO_API const char* msdro_version(void);
MSDRO_API const char* msdro_status_name(int status);
/* Message of the last failure on this thread; "" when none. */
MSDRO_API const char* msdro_last_error(void);
/* Mixes a run seed with a purpose and numeric key, as the sweep does. */
MSDRO_API uint64_t msdro_derive_seed(uint64_t seed, const char* purpose, const double* key,
                                     size_t key_size);

/* ---- Data quality ---------------------------------------------------- */

/* E||Z||^p of i.i.d. parametric noise in `dimension` coordinates. */
MSDRO_API int msdro_quality_noise_bound(int kind, double scale, int dimension, double p,
                                        int norm, double* epsilon);
/* E||Z||^p estimated from `count` rows of `dimension` noise samples. */
MSDRO_API int msdro_quality_sample_bound(const double* samples, size_t count, int dimension,
                                         double p, int norm, double* epsilon);
/* W_p^p between two empirical distributions. */
MSDRO_API int msdro_quality_wasserstein(const double* a, size_t a_size, const double* b,
                                        size_t b_size, double p, double* distance);
/* Adds Laplace(sensitivity / theta) noise; `out` holds `size` values. */
MSDRO_API int msdro_quality_laplace(const double* data, size_t size, double sensitivity,
                                    double theta, uint64_t seed, double* out, double* epsilon);
MSDRO_API int msdro_quality_write(const char* path, const double* epsilon, size_t size);

/* ---- Networks -------------------------------------------------------- */

MSDRO_API int msdro_network_load(const char* path, msdro_network** network);
MSDRO_API void msdro_network_free(msdro_network* network);
MSDRO_API int msdro_network_shape(const msdro_network* network, int* buses, int* lines,
                                  int* generators, int* resources);

/* ---- Datasets -------------------------------------------------------- */

MSDRO_API int msdro_dataset_load(const char* path, msdro_dataset** dataset);
/* Training errors for every resource of the network. */
MSDRO_API int msdro_dataset_generate(const msdro_network* network, int samples, uint64_t seed,
                                     int error_mean, msdro_dataset** dataset);
MSDRO_API void msdro_dataset_free(msdro_dataset* dataset);
MSDRO_API int msdro_dataset_write(const msdro_dataset* dataset, const char* path);
MSDRO_API int msdro_dataset_shape(const msdro_dataset* dataset, int* features, int* max_samples);
MSDRO_API int msdro_dataset_set_epsilon(msdro_dataset* dataset, const double* epsilon,
                                        size_t size);
/* Reads a feature,epsilon file into the dataset. */
MSDRO_API int msdro_dataset_load_quality(msdro_dataset* dataset, const char* path);

/* ---- Solving --------------------------------------------------------- */

typedef struct msdro_solve_options {
  double gamma;        /* CVaR risk level in [0, 1); default 0.05. */
  int tighten;         /* Non-zero runs the tightening re-run; default 1. */
  const char* backend; /* "auto", "simplex", "highs"; NULL reads MSDRO_SOLVER. */
} msdro_solve_options;

MSDRO_API void msdro_solve_options_init(msdro_solve_options* options);

/* Builds and solves the model. On MSDRO_ERR_INFEASIBLE *solution is still
 * set and lists the conflicting constraints. */
MSDRO_API int msdro_solve(const msdro_network* network, const msdro_dataset* dataset,
                          const msdro_solve_options* options, msdro_solution** solution);
MSDRO_API void msdro_solution_free(msdro_solution* solution);
/* Objective of the first solve and of the re-run (equal without one). */
MSDRO_API int msdro_solution_objective(const msdro_solution* solution, double* base,
                                       double* final_objective);
MSDRO_API int msdro_solution_costs(const msdro_solution* solution, double* energy,
                                   double* reserve, double* activation);
MSDRO_API const char* msdro_solution_backend(const msdro_solution* solution);
/* Per-feature multipliers, each array of length `size` (= resources). */
MSDRO_API int msdro_solution_multipliers(const msdro_solution* solution, double* lambda_co,
                                         double* lambda_cc, size_t size, double* phi);
MSDRO_API int msdro_solution_marginal_value(const msdro_solution* solution, double* value,
                                            size_t size);
MSDRO_API size_t msdro_solution_conflict_count(const msdro_solution* solution);
MSDRO_API const char* msdro_solution_conflict(const msdro_solution* solution, size_t index);
/* Writes dispatch.csv, duals.csv, summary.csv, data_value.csv and
 * forecast_value.csv into `directory`. */
MSDRO_API int msdro_solution_write(const msdro_solution* solution, const char* directory);
/* Out-of-sample check of the final decision with radii `epsilon`. */
MSDRO_API int msdro_solution_oos(const msdro_solution* solution, const double* epsilon,
                                 size_t size, int samples, uint64_t seed, int* violations,
                                 double* probability);

/* ---- Sweeps ---------------------------------------------------------- */

typedef struct msdro_sweep_config {
  const double* grid; /* Radii used for every feature; NULL keeps the default. */
  size_t grid_size;
  int samples;     /* Training samples per feature; default 20. */
  uint64_t seed;   /* Default 1. */
  double gamma;    /* Default 0.05. */
  int oos_samples; /* Default 1000. */
  int tighten;     /* Default 1. */
  int error_mean;  /* msdro_error_mean; default zero. */
  int jobs;        /* Worker threads; default 1. */
  const char* backend;
} msdro_sweep_config;

MSDRO_API void msdro_sweep_config_init(msdro_sweep_config* config);
MSDRO_API int msdro_sweep_run(const msdro_network* network, const msdro_sweep_config* config,
                              msdro_sweep** sweep);
MSDRO_API void msdro_sweep_free(msdro_sweep* sweep);
MSDRO_API int msdro_sweep_write(const msdro_sweep* sweep, const char* directory);
MSDRO_API int msdro_sweep_counts(const msdro_sweep* sweep, int* cells, int* failed);
/* Cell `index` in grid order: radii (length `size`), objectives and the
 * out-of-sample violation rate. */
MSDRO_API int msdro_sweep_cell(const msdro_sweep* sweep, int index, double* epsilon, size_t size,
                               double* base, double* final_objective, double* oos_probability);
MSDRO_API const char* msdro_sweep_cell_status(const msdro_sweep* sweep, int index);
MSDRO_API int msdro_sweep_training_seed(const msdro_sweep* sweep, int feature, uint64_t* seed);

#ifdef __cplusplus
}
#endif

#endif /* MSDRO_MSDRO_H_ */
