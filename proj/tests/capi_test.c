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


/* Exercises the shared library through its C header only. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "msdro/msdro.h"

static int failures = 0;

#define CHECK(cond)                                                  \
  do {                                                               \
    if (!(cond)) {                                                   \
      fprintf(stderr, "%s:%d: CHECK failed: %s (last error: %s)\n", \
              __FILE__, __LINE__, #cond, msdro_last_error());        \
      ++failures;                                                    \
    }                                                                \
  } while (0)

static char path_buf[4096];

static const char* DataPath(const char* name) {
  snprintf(path_buf, sizeof path_buf, "%s/%s", MSDRO_DATA_DIR, name);
  return path_buf;
}

static void TestQuality(void) {
  double eps = -1.0;
  CHECK(msdro_quality_noise_bound(MSDRO_NOISE_LAPLACE, 0.05, 1, 1.0, MSDRO_NORM_L1, &eps) ==
        MSDRO_OK);
  CHECK(fabs(eps - 0.05) < 1e-12);
  CHECK(msdro_quality_noise_bound(MSDRO_NOISE_GAUSSIAN, 0.3, 1, 2.0, MSDRO_NORM_L2, &eps) ==
        MSDRO_OK);
  CHECK(fabs(eps - 0.09) < 1e-12);
  CHECK(msdro_quality_noise_bound(7, 0.05, 1, 1.0, MSDRO_NORM_L1, &eps) == MSDRO_ERR_INPUT);
  CHECK(strlen(msdro_last_error()) > 0);

  const double a[] = {0.0, 2.0}, b[] = {1.0, 3.0};
  double w = -1.0;
  CHECK(msdro_quality_wasserstein(a, 2, b, 2, 1.0, &w) == MSDRO_OK);
  CHECK(fabs(w - 1.0) < 1e-12);
  CHECK(msdro_quality_wasserstein(a, 0, b, 2, 1.0, &w) == MSDRO_ERR_INPUT);

  const double zeros[] = {0.0, 0.0, 0.0};
  CHECK(msdro_quality_sample_bound(zeros, 3, 1, 1.0, MSDRO_NORM_L1, &eps) == MSDRO_OK);
  CHECK(eps == 0.0);

  double out1[3], out2[3];
  const double data[] = {1.0, 2.0, 3.0};
  CHECK(msdro_quality_laplace(data, 3, 1.0, 10.0, 5, out1, &eps) == MSDRO_OK);
  CHECK(fabs(eps - 0.1) < 1e-12);
  CHECK(msdro_quality_laplace(data, 3, 1.0, 10.0, 5, out2, &eps) == MSDRO_OK);
  CHECK(memcmp(out1, out2, sizeof out1) == 0);
  CHECK(msdro_quality_laplace(data, 3, -1.0, 10.0, 5, out2, &eps) == MSDRO_ERR_INPUT);
}

static void TestSolve(void) {
  msdro_network* net = NULL;
  CHECK(msdro_network_load("/nonexistent.json", &net) == MSDRO_ERR_IO);
  CHECK(net == NULL);
  CHECK(msdro_network_load(DataPath("case5.json"), &net) == MSDRO_OK);
  int buses = 0, lines = 0, gens = 0, res = 0;
  CHECK(msdro_network_shape(net, &buses, &lines, &gens, &res) == MSDRO_OK);
  CHECK(buses == 5 && lines == 6 && gens == 5 && res == 2);

  msdro_dataset* data = NULL;
  CHECK(msdro_dataset_generate(net, 20, 1, MSDRO_ERROR_MEAN_ZERO, &data) == MSDRO_OK);
  int features = 0, samples = 0;
  CHECK(msdro_dataset_shape(data, &features, &samples) == MSDRO_OK);
  CHECK(features == 2 && samples == 20);
  const double wrong[] = {1.0};
  CHECK(msdro_dataset_set_epsilon(data, wrong, 1) == MSDRO_ERR_INPUT);
  const double robust[] = {1.0, 1.0};
  CHECK(msdro_dataset_set_epsilon(data, robust, 2) == MSDRO_OK);

  msdro_solve_options opts;
  msdro_solve_options_init(&opts);
  CHECK(opts.gamma == 0.05 && opts.tighten == 1);
  msdro_solution* sol = NULL;
  CHECK(msdro_solve(net, data, &opts, &sol) == MSDRO_OK);
  double base = 0.0, fin = 0.0;
  CHECK(msdro_solution_objective(sol, &base, &fin) == MSDRO_OK);
  CHECK(fabs(base - 15865.9688) < 1e-3);
  CHECK(fin <= base + 1e-6);
  double co[2], cc[2], phi = -1.0, value[2];
  CHECK(msdro_solution_multipliers(sol, co, cc, 2, &phi) == MSDRO_OK);
  CHECK(fabs(co[0]) < 1e-6 && fabs(co[1]) < 1e-6 && fabs(cc[0]) < 1e-6 && fabs(cc[1]) < 1e-6);
  CHECK(msdro_solution_multipliers(sol, co, cc, 3, &phi) == MSDRO_ERR_SIZE);
  CHECK(msdro_solution_marginal_value(sol, value, 2) == MSDRO_OK);
  CHECK(strlen(msdro_solution_backend(sol)) > 0);
  int violations = -1;
  double prob = -1.0;
  CHECK(msdro_solution_oos(sol, robust, 2, 1000, 3, &violations, &prob) == MSDRO_OK);
  CHECK(violations == 0 && prob == 0.0);
  CHECK(msdro_solution_conflict_count(sol) == 0);
  msdro_solution_free(sol);

  /* Dataset and quality files round-trip through disk. */
  char tmp[4096];
  snprintf(tmp, sizeof tmp, "%s/msdro_capi_data.csv", MSDRO_TEST_TMP);
  CHECK(msdro_dataset_write(data, tmp) == MSDRO_OK);
  msdro_dataset* back = NULL;
  CHECK(msdro_dataset_load(tmp, &back) == MSDRO_OK);
  snprintf(tmp, sizeof tmp, "%s/msdro_capi_quality.csv", MSDRO_TEST_TMP);
  const double radii[] = {0.1, 0.005};
  CHECK(msdro_quality_write(tmp, radii, 2) == MSDRO_OK);
  CHECK(msdro_dataset_load_quality(back, tmp) == MSDRO_OK);
  CHECK(msdro_solve(net, back, NULL, &sol) == MSDRO_OK);
  CHECK(msdro_solution_objective(sol, &fin, NULL) == MSDRO_OK);
  CHECK(fin < base);
  snprintf(tmp, sizeof tmp, "%s/msdro_capi_out", MSDRO_TEST_TMP);
  CHECK(msdro_solution_write(sol, tmp) == MSDRO_OK);
  msdro_solution_free(sol);
  msdro_dataset_free(back);
  msdro_dataset_free(data);
  msdro_network_free(net);
}

static void TestInfeasible(void) {
  /* Three generators too small for the load. */
  char tmp[4096];
  snprintf(tmp, sizeof tmp, "%s/msdro_capi_small.json", MSDRO_TEST_TMP);
  FILE* f = fopen(tmp, "w");
  CHECK(f != NULL);
  if (!f) return;
  fputs("{\"buses\":[{\"id\":1},{\"id\":2}],\"slack\":1,"
        "\"lines\":[{\"from\":1,\"to\":2,\"reactance\":0.1,\"f_max\":5}],"
        "\"generators\":[{\"bus\":1,\"p_min\":0,\"p_max\":0.5,\"c_E\":1,\"c_R\":1,\"c_A\":1}],"
        "\"loads\":[{\"bus\":2,\"d\":1.0}],"
        "\"resources\":[{\"bus\":2,\"u\":0.2,\"u_min\":0,\"u_max\":0.4,\"kappa\":0.5}]}",
        f);
  fclose(f);
  msdro_network* net = NULL;
  CHECK(msdro_network_load(tmp, &net) == MSDRO_OK);
  msdro_dataset* data = NULL;
  CHECK(msdro_dataset_generate(net, 5, 1, MSDRO_ERROR_MEAN_ZERO, &data) == MSDRO_OK);
  msdro_solution* sol = NULL;
  CHECK(msdro_solve(net, data, NULL, &sol) == MSDRO_ERR_INPUT); /* Radii unset. */
  const double eps[] = {0.1};
  CHECK(msdro_dataset_set_epsilon(data, eps, 1) == MSDRO_OK);
  CHECK(msdro_solve(net, data, NULL, &sol) == MSDRO_ERR_INFEASIBLE);
  CHECK(sol != NULL);
  CHECK(msdro_solution_conflict_count(sol) > 0);
  CHECK(msdro_solution_conflict(sol, 0) != NULL);
  CHECK(msdro_solution_conflict(sol, 1000) == NULL);
  double obj;
  CHECK(msdro_solution_objective(sol, &obj, NULL) == MSDRO_ERR_EXTRACTION);
  msdro_solution_free(sol);
  msdro_dataset_free(data);
  msdro_network_free(net);
}

static void TestSweep(void) {
  msdro_network* net = NULL;
  CHECK(msdro_network_load(DataPath("case5.json"), &net) == MSDRO_OK);
  msdro_sweep_config config;
  msdro_sweep_config_init(&config);
  CHECK(config.samples == 20 && config.oos_samples == 1000 && config.jobs == 1);
  const double grid[] = {1.0, 0.1};
  config.grid = grid;
  config.grid_size = 2;
  config.oos_samples = 100;
  config.jobs = 2;
  msdro_sweep* sweep = NULL;
  CHECK(msdro_sweep_run(net, &config, &sweep) == MSDRO_OK);
  int cells = 0, failed = -1;
  CHECK(msdro_sweep_counts(sweep, &cells, &failed) == MSDRO_OK);
  CHECK(cells == 4 && failed == 0);
  double eps[2], base, fin, prob;
  CHECK(msdro_sweep_cell(sweep, 1, eps, 2, &base, &fin, &prob) == MSDRO_OK);
  CHECK(eps[0] == 1.0 && eps[1] == 0.1);
  CHECK(strcmp(msdro_sweep_cell_status(sweep, 1), "optimal") == 0);
  CHECK(msdro_sweep_cell(sweep, 4, eps, 2, &base, &fin, &prob) == MSDRO_ERR_INPUT);
  CHECK(msdro_sweep_cell_status(sweep, 4) == NULL);
  uint64_t seed = 0;
  CHECK(msdro_sweep_training_seed(sweep, 0, &seed) == MSDRO_OK);
  const double key[] = {0.0};
  CHECK(seed == msdro_derive_seed(1, "train", key, 1));
  char tmp[4096];
  snprintf(tmp, sizeof tmp, "%s/msdro_capi_sweep", MSDRO_TEST_TMP);
  CHECK(msdro_sweep_write(sweep, tmp) == MSDRO_OK);
  msdro_sweep_free(sweep);
  msdro_network_free(net);
}

int main(void) {
  CHECK(strcmp(msdro_status_name(MSDRO_ERR_INFEASIBLE), "infeasible") == 0);
  CHECK(strcmp(msdro_status_name(1234), "unknown") == 0);
  CHECK(strlen(msdro_version()) > 0);
  TestQuality();
  TestSolve();
  TestInfeasible();
  TestSweep();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("capi_test: all checks passed\n");
  return 0;
}
