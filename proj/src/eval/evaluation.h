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

#ifndef MSDRO_EVAL_EVALUATION_H_
#define MSDRO_EVAL_EVALUATION_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dro/dro.h"
#include "lp/solver.h"
#include "opf/network.h"
#include "opf/opf.h"
#include "valuation/valuation.h"

namespace msdro::eval {

// How training errors are drawn.
//   kZero:          injections ~ N(u, 0.15u) minus u, so errors centre on 0.
//   kForecastShift: errors ~ N(u, 0.15u) directly, truncated to the support.
enum class ErrorMean { kZero, kForecastShift };

const char* ErrorMeanName(ErrorMean mean);
ErrorMean ParseErrorMean(const std::string& name);  // kInput on anything else.

struct SweepConfig {
  std::vector<double> grid = {1.0, 0.1, 0.005, 0.001};  // Used for every feature.
  int n_samples = 20;
  std::uint64_t seed = 1;
  double gamma = 0.05;
  int oos_samples = 1000;
  bool tighten = true;
  ErrorMean error_mean = ErrorMean::kZero;
  int jobs = 1;
};

struct OosResult {
  int samples = 0;
  int violations = 0;
  double probability = 0.0;
};

struct CellResult {
  std::vector<double> epsilon;
  std::string status;  // "optimal", or the failure category.
  std::string message;
  opf::SolutionWithDuals base;
  opf::SolutionWithDuals final;  // After the tightening re-run; equals base otherwise.
  valuation::DataValueReport data_value;
  valuation::ForecastValueReport forecast_value;
  OosResult oos;

  bool ok() const { return status == "optimal"; }
};

struct SweepResult {
  SweepConfig config;
  dro::MultiDataset training;  // Errors shared by every cell; epsilon unset.
  std::vector<std::uint64_t> training_seeds;
  std::vector<CellResult> cells;  // Row-major over the grid, feature 1 slowest.
};

// Standard deviation of a centred normal whose mean absolute value is eps.
double PerturbationStd(double eps);

// Deterministic seed for a purpose, mixing the run seed with the cell key.
std::uint64_t DeriveSeed(std::uint64_t seed, const std::string& purpose,
                         const std::vector<double>& key = {});

// n draws of N(mean, sd) truncated to [lo, hi] by inversion, so deep tails
// are handled exactly. sd = 0 returns mean clamped to the interval.
std::vector<double> TruncatedNormal(double mean, double sd, double lo, double hi, int n,
                                    std::mt19937_64& rng);

// Forecast errors of one resource: N(u, 0.15u) truncated to the support,
// minus u (or, with kForecastShift, N(u, 0.15u) on the support itself).
std::vector<double> GenerateTrainingSamples(const opf::Resource& resource, int n,
                                            std::uint64_t seed,
                                            ErrorMean mean = ErrorMean::kZero);

// Out-of-sample errors: N(0, 0.15u + PerturbationStd(eps)) on the support.
std::vector<double> GenerateOosSamples(const opf::Resource& resource, double eps, int n,
                                       std::uint64_t seed);

// Training data for every resource with the given radii.
dro::MultiDataset GenerateTrainingData(const opf::Network& network, int n, std::uint64_t seed,
                                       ErrorMean mean, std::vector<double> epsilon = {});

// Fraction of sample vectors (samples[s][j]) that break any security row by
// more than 1e-9.
OosResult EmpiricalViolation(const opf::Network& network, const opf::OpfDecision& decision,
                             const std::vector<std::vector<double>>& samples);

// Out-of-sample matrix for one cell, samples[s][j].
std::vector<std::vector<double>> OosMatrix(const opf::Network& network,
                                           const std::vector<double>& epsilon, int n,
                                           std::uint64_t seed);

// Solves every cell of the grid; failures are recorded per cell.
SweepResult RunSweep(const opf::Network& network, const SweepConfig& config,
                     const lp::Solver* solver = nullptr);

// Writes objectives.csv, lambdas.csv, dispatch.csv, cost_components.csv,
// oos.csv, data_value.csv, forecast_value.csv and plotdata_*.csv.
// Returns the file names written.
std::vector<std::string> WriteSweepCsv(const std::string& directory, const opf::Network& network,
                                       const SweepResult& result);

}  // namespace msdro::eval

#endif  // MSDRO_EVAL_EVALUATION_H_
