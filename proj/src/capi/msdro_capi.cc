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

#include "msdro/msdro.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "common/error.h"
#include "eval/evaluation.h"
#include "io/csv.h"
#include "lp/solver.h"
#include "opf/network.h"
#include "opf/opf.h"
#include "quality/quality.h"
#include "valuation/valuation.h"

struct msdro_network {
  msdro::opf::Network net;
};

struct msdro_dataset {
  msdro::dro::MultiDataset data;
};

struct msdro_solution {
  msdro::opf::Network net;
  msdro::dro::MultiDataset data;
  msdro::opf::SolutionWithDuals base;
  msdro::opf::SolutionWithDuals final;
  bool has_reports = false;
  msdro::valuation::DataValueReport data_value;
  msdro::valuation::ForecastValueReport forecast_value;
};

struct msdro_sweep {
  msdro::opf::Network net;
  msdro::eval::SweepResult result;
};

namespace {

using msdro::ErrorCode;
using msdro::Require;

thread_local std::string last_error;

template <typename Fn>
int Guard(Fn&& fn) {
  last_error.clear();
  try {
    return fn();
  } catch (const msdro::Error& e) {
    last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return MSDRO_ERR_INTERNAL;
}

void NotNull(const void* p, const char* what) {
  Require(p != nullptr, ErrorCode::kInput, std::string(what) + " is null");
}

std::vector<double> Array(const double* p, std::size_t size, const char* what) {
  if (size > 0) NotNull(p, what);
  return size > 0 ? std::vector<double>(p, p + size) : std::vector<double>();
}

std::unique_ptr<msdro::lp::Solver> Backend(const char* name) {
  return name ? msdro::lp::MakeSolver(name) : msdro::lp::MakeDefaultSolver();
}

msdro::quality::Norm NormOf(int norm) {
  Require(norm == MSDRO_NORM_L1 || norm == MSDRO_NORM_L2, ErrorCode::kInput, "unknown norm");
  return norm == MSDRO_NORM_L1 ? msdro::quality::Norm::kL1 : msdro::quality::Norm::kL2;
}

msdro::eval::ErrorMean ErrorMeanOf(int mean) {
  Require(mean == MSDRO_ERROR_MEAN_ZERO || mean == MSDRO_ERROR_MEAN_FORECAST_SHIFT,
          ErrorCode::kInput, "unknown error mean");
  return mean == MSDRO_ERROR_MEAN_ZERO ? msdro::eval::ErrorMean::kZero
                                       : msdro::eval::ErrorMean::kForecastShift;
}

std::ofstream Csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  Require(out.good(), ErrorCode::kIo, "cannot write " + path.string());
  out << std::setprecision(12);
  return out;
}

void WriteDuals(std::ostream& out, const msdro::opf::SolutionWithDuals& s) {
  const msdro::opf::OpfDuals& y = s.duals;
  out << "name,index,value\n";
  auto vec = [&out](const char* name, const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) out << name << ',' << i + 1 << ',' << v[i] << '\n';
  };
  out << "pi,," << y.pi << '\n';
  vec("chi", y.chi);
  vec("sigma_up", y.sigma_up);
  vec("sigma_lo", y.sigma_lo);
  vec("beta_up", y.beta_up);
  vec("beta_lo", y.beta_lo);
  out << "phi,," << y.phi << '\n';
  out << "tau_nu,," << y.tau_nu << '\n';
  vec("lambda_co", s.lambda_co);
  vec("lambda_cc", s.lambda_cc);
  out << "tau,," << s.tau << '\n';
  out << "nu,," << s.nu << '\n';
}

}  // namespace

extern "C" {

const char* msdro_version(void) { return "0.1.0"; }

const char* msdro_status_name(int status) {
  if (status == MSDRO_ERR_INTERNAL) return "internal";
  if (status < 0 || status > MSDRO_ERR_EXTRACTION) return "unknown";
  return msdro::ErrorCodeName(static_cast<ErrorCode>(status));
}

const char* msdro_last_error(void) { return last_error.c_str(); }

uint64_t msdro_derive_seed(uint64_t seed, const char* purpose, const double* key,
                           size_t key_size) {
  std::vector<double> k;
  if (key) k.assign(key, key + key_size);
  return msdro::eval::DeriveSeed(seed, purpose ? purpose : "", k);
}

int msdro_quality_noise_bound(int kind, double scale, int dimension, double p, int norm,
                              double* epsilon) {
  return Guard([&] {
    NotNull(epsilon, "epsilon");
    msdro::quality::NoiseModel noise;
    if (kind == MSDRO_NOISE_LAPLACE) {
      noise = msdro::quality::NoiseModel::Laplace(scale, dimension);
    } else if (kind == MSDRO_NOISE_GAUSSIAN) {
      noise = msdro::quality::NoiseModel::Gaussian(scale, dimension);
    } else {
      msdro::Fail(ErrorCode::kInput, "unknown noise kind");
    }
    *epsilon = msdro::quality::AdditiveNoiseBound(noise, p, NormOf(norm)).epsilon;
    return MSDRO_OK;
  });
}

int msdro_quality_sample_bound(const double* samples, size_t count, int dimension, double p,
                               int norm, double* epsilon) {
  return Guard([&] {
    NotNull(epsilon, "epsilon");
    Require(dimension >= 1, ErrorCode::kInput, "dimension must be >= 1");
    msdro::quality::NoiseModel noise = msdro::quality::NoiseModel::Custom(
        Array(samples, count * static_cast<std::size_t>(dimension), "samples"), dimension);
    *epsilon = msdro::quality::AdditiveNoiseBound(noise, p, NormOf(norm)).epsilon;
    return MSDRO_OK;
  });
}

int msdro_quality_wasserstein(const double* a, size_t a_size, const double* b, size_t b_size,
                              double p, double* distance) {
  return Guard([&] {
    NotNull(distance, "distance");
    *distance =
        msdro::quality::EmpiricalWasserstein1d(Array(a, a_size, "a"), Array(b, b_size, "b"), p);
    return MSDRO_OK;
  });
}

int msdro_quality_laplace(const double* data, size_t size, double sensitivity, double theta,
                          uint64_t seed, double* out, double* epsilon) {
  return Guard([&] {
    NotNull(epsilon, "epsilon");
    if (size > 0) NotNull(out, "out");
    msdro::quality::Obfuscated r =
        msdro::quality::LaplaceMechanism(Array(data, size, "data"), sensitivity, theta, seed);
    if (size > 0) std::memcpy(out, r.data.data(), size * sizeof(double));
    *epsilon = r.signal.epsilon;
    return MSDRO_OK;
  });
}

int msdro_quality_write(const char* path, const double* epsilon, size_t size) {
  return Guard([&] {
    NotNull(path, "path");
    msdro::io::WriteQuality(std::string(path), Array(epsilon, size, "epsilon"));
    return MSDRO_OK;
  });
}

int msdro_network_load(const char* path, msdro_network** network) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(network, "network");
    *network = nullptr;
    auto h = std::make_unique<msdro_network>();
    h->net = msdro::opf::LoadNetwork(path);
    *network = h.release();
    return MSDRO_OK;
  });
}

void msdro_network_free(msdro_network* network) { delete network; }

int msdro_network_shape(const msdro_network* network, int* buses, int* lines, int* generators,
                        int* resources) {
  return Guard([&] {
    NotNull(network, "network");
    if (buses) *buses = network->net.num_buses();
    if (lines) *lines = network->net.num_lines();
    if (generators) *generators = network->net.num_generators();
    if (resources) *resources = network->net.num_resources();
    return MSDRO_OK;
  });
}

int msdro_dataset_load(const char* path, msdro_dataset** dataset) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(dataset, "dataset");
    *dataset = nullptr;
    auto h = std::make_unique<msdro_dataset>();
    h->data = msdro::io::ReadDataset(std::string(path));
    *dataset = h.release();
    return MSDRO_OK;
  });
}

int msdro_dataset_generate(const msdro_network* network, int samples, uint64_t seed,
                           int error_mean, msdro_dataset** dataset) {
  return Guard([&] {
    NotNull(network, "network");
    NotNull(dataset, "dataset");
    *dataset = nullptr;
    Require(samples >= 1, ErrorCode::kInput, "need at least one sample");
    auto h = std::make_unique<msdro_dataset>();
    h->data = msdro::eval::GenerateTrainingData(network->net, samples, seed,
                                                ErrorMeanOf(error_mean));
    *dataset = h.release();
    return MSDRO_OK;
  });
}

void msdro_dataset_free(msdro_dataset* dataset) { delete dataset; }

int msdro_dataset_write(const msdro_dataset* dataset, const char* path) {
  return Guard([&] {
    NotNull(dataset, "dataset");
    NotNull(path, "path");
    msdro::io::WriteDataset(std::string(path), dataset->data);
    return MSDRO_OK;
  });
}

int msdro_dataset_shape(const msdro_dataset* dataset, int* features, int* max_samples) {
  return Guard([&] {
    NotNull(dataset, "dataset");
    std::size_t n = 0;
    for (const auto& s : dataset->data.samples) n = std::max(n, s.size());
    if (features) *features = dataset->data.dimension();
    if (max_samples) *max_samples = static_cast<int>(n);
    return MSDRO_OK;
  });
}

int msdro_dataset_set_epsilon(msdro_dataset* dataset, const double* epsilon, size_t size) {
  return Guard([&] {
    NotNull(dataset, "dataset");
    Require(static_cast<int>(size) == dataset->data.dimension(), ErrorCode::kInput,
            "expected " + std::to_string(dataset->data.dimension()) + " radii, got " +
                std::to_string(size));
    std::vector<double> eps = Array(epsilon, size, "epsilon");
    for (double e : eps) Require(e >= 0.0, ErrorCode::kInput, "epsilon must be >= 0");
    dataset->data.epsilon = eps;
    return MSDRO_OK;
  });
}

int msdro_dataset_load_quality(msdro_dataset* dataset, const char* path) {
  return Guard([&] {
    NotNull(dataset, "dataset");
    NotNull(path, "path");
    std::vector<double> eps = msdro::io::ReadQuality(std::string(path));
    Require(static_cast<int>(eps.size()) == dataset->data.dimension(), ErrorCode::kInput,
            "quality file lists " + std::to_string(eps.size()) + " features, dataset has " +
                std::to_string(dataset->data.dimension()));
    dataset->data.epsilon = eps;
    return MSDRO_OK;
  });
}

void msdro_solve_options_init(msdro_solve_options* options) {
  if (!options) return;
  options->gamma = 0.05;
  options->tighten = 1;
  options->backend = nullptr;
}

int msdro_solve(const msdro_network* network, const msdro_dataset* dataset,
                const msdro_solve_options* options, msdro_solution** solution) {
  return Guard([&] {
    NotNull(network, "network");
    NotNull(dataset, "dataset");
    NotNull(solution, "solution");
    *solution = nullptr;
    msdro_solve_options opts;
    msdro_solve_options_init(&opts);
    if (options) opts = *options;
    Require(static_cast<int>(dataset->data.epsilon.size()) == dataset->data.dimension(),
            ErrorCode::kInput, "dataset radii are not set");
    auto solver = Backend(opts.backend);
    auto h = std::make_unique<msdro_solution>();
    h->net = network->net;
    h->data = dataset->data;
    msdro::opf::OpfOptions o;
    o.gamma = opts.gamma;
    h->base = msdro::opf::SolveOpf(msdro::opf::BuildMsdroOpf(h->net, h->data, o), solver.get());
    if (!h->base.optimal()) {
      h->final = h->base;
      const msdro::lp::SolveStatus status = h->base.status;
      last_error = h->base.message;
      *solution = h.release();
      if (status == msdro::lp::SolveStatus::kInfeasible) return MSDRO_ERR_INFEASIBLE;
      if (status == msdro::lp::SolveStatus::kUnbounded) return MSDRO_ERR_UNBOUNDED;
      return MSDRO_ERR_SOLVER;
    }
    h->final = opts.tighten ? msdro::opf::CvarTighteningRerun(h->net, h->data, opts.gamma,
                                                              h->base, solver.get())
                            : h->base;
    Require(h->final.optimal(), ErrorCode::kSolver, "tightening re-run failed: " + h->final.message);
    h->data_value = msdro::valuation::MarginalDataValue(h->base, h->net, h->data);
    h->forecast_value = msdro::valuation::ForecastValueDecomposition(h->base, h->net, h->data);
    h->has_reports = true;
    *solution = h.release();
    return MSDRO_OK;
  });
}

void msdro_solution_free(msdro_solution* solution) { delete solution; }

int msdro_solution_objective(const msdro_solution* solution, double* base,
                             double* final_objective) {
  return Guard([&] {
    NotNull(solution, "solution");
    Require(solution->base.optimal(), ErrorCode::kExtraction, "no optimal solution");
    if (base) *base = solution->base.objective;
    if (final_objective) *final_objective = solution->final.objective;
    return MSDRO_OK;
  });
}

int msdro_solution_costs(const msdro_solution* solution, double* energy, double* reserve,
                         double* activation) {
  return Guard([&] {
    NotNull(solution, "solution");
    Require(solution->final.optimal(), ErrorCode::kExtraction, "no optimal solution");
    if (energy) *energy = solution->final.energy_cost;
    if (reserve) *reserve = solution->final.reserve_cost;
    if (activation) *activation = solution->final.activation_cost;
    return MSDRO_OK;
  });
}

const char* msdro_solution_backend(const msdro_solution* solution) {
  return solution ? solution->base.backend.c_str() : "";
}

int msdro_solution_multipliers(const msdro_solution* solution, double* lambda_co,
                               double* lambda_cc, size_t size, double* phi) {
  return Guard([&] {
    NotNull(solution, "solution");
    Require(solution->has_reports, ErrorCode::kExtraction, "no optimal solution");
    Require(size == solution->base.lambda_co.size(), ErrorCode::kSize, "wrong array size");
    for (std::size_t j = 0; j < size; ++j) {
      if (lambda_co) lambda_co[j] = solution->base.lambda_co[j];
      if (lambda_cc) lambda_cc[j] = solution->base.lambda_cc[j];
    }
    if (phi) *phi = solution->base.duals.phi;
    return MSDRO_OK;
  });
}

int msdro_solution_marginal_value(const msdro_solution* solution, double* value, size_t size) {
  return Guard([&] {
    NotNull(solution, "solution");
    NotNull(value, "value");
    Require(solution->has_reports, ErrorCode::kExtraction, "no optimal solution");
    Require(size == solution->data_value.features.size(), ErrorCode::kSize, "wrong array size");
    for (std::size_t j = 0; j < size; ++j) value[j] = solution->data_value.features[j].marginal_value;
    return MSDRO_OK;
  });
}

size_t msdro_solution_conflict_count(const msdro_solution* solution) {
  return solution ? solution->base.conflict.size() : 0;
}

const char* msdro_solution_conflict(const msdro_solution* solution, size_t index) {
  if (!solution || index >= solution->base.conflict.size()) return nullptr;
  return solution->base.conflict[index].c_str();
}

int msdro_solution_write(const msdro_solution* solution, const char* directory) {
  return Guard([&] {
    NotNull(solution, "solution");
    NotNull(directory, "directory");
    Require(solution->has_reports, ErrorCode::kExtraction, "no optimal solution");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(directory, ec);
    Require(!ec, ErrorCode::kIo, std::string("cannot create ") + directory);
    const fs::path dir(directory);
    const msdro::opf::Network& net = solution->net;
    const msdro::opf::SolutionWithDuals& f = solution->final;
    {
      std::ofstream out = Csv(dir / "summary.csv");
      out << "key,value\n";
      out << "objective," << solution->base.objective << '\n';
      out << "objective_rerun," << f.objective << '\n';
      out << "energy_cost," << f.energy_cost << '\n';
      out << "reserve_cost," << f.reserve_cost << '\n';
      out << "activation_cost," << f.activation_cost << '\n';
      out << "fixed_generators," << f.fixed_generators.size() << '\n';
      out << "backend," << solution->base.backend << '\n';
    }
    {
      std::ofstream out = Csv(dir / "dispatch.csv");
      out << "generator,bus,p,r_plus,r_minus";
      for (int j = 0; j < net.num_resources(); ++j) out << ",alpha_" << j + 1;
      out << '\n';
      for (int g = 0; g < net.num_generators(); ++g) {
        out << g + 1 << ',' << net.generators[g].bus << ',' << f.decision.p[g] << ','
            << f.decision.r_plus[g] << ',' << f.decision.r_minus[g];
        for (int j = 0; j < net.num_resources(); ++j) out << ',' << f.decision.alpha[g][j];
        out << '\n';
      }
    }
    {
      std::ofstream out = Csv(dir / "duals.csv");
      WriteDuals(out, solution->base);
    }
    {
      std::ofstream out = Csv(dir / "data_value.csv");
      msdro::valuation::WriteDataValueCsv(out, solution->data_value);
    }
    {
      std::ofstream out = Csv(dir / "forecast_value.csv");
      msdro::valuation::WriteForecastValueCsv(out, solution->forecast_value);
    }
    return MSDRO_OK;
  });
}

int msdro_solution_oos(const msdro_solution* solution, const double* epsilon, size_t size,
                       int samples, uint64_t seed, int* violations, double* probability) {
  return Guard([&] {
    NotNull(solution, "solution");
    Require(solution->final.optimal(), ErrorCode::kExtraction, "no optimal solution");
    Require(samples >= 0, ErrorCode::kInput, "sample count must be >= 0");
    const std::vector<double> eps = Array(epsilon, size, "epsilon");
    msdro::eval::OosResult r = msdro::eval::EmpiricalViolation(
        solution->net, solution->final.decision,
        msdro::eval::OosMatrix(solution->net, eps, samples, seed));
    if (violations) *violations = r.violations;
    if (probability) *probability = r.probability;
    return MSDRO_OK;
  });
}

void msdro_sweep_config_init(msdro_sweep_config* config) {
  if (!config) return;
  const msdro::eval::SweepConfig d;
  config->grid = nullptr;
  config->grid_size = 0;
  config->samples = d.n_samples;
  config->seed = d.seed;
  config->gamma = d.gamma;
  config->oos_samples = d.oos_samples;
  config->tighten = d.tighten ? 1 : 0;
  config->error_mean = MSDRO_ERROR_MEAN_ZERO;
  config->jobs = d.jobs;
  config->backend = nullptr;
}

int msdro_sweep_run(const msdro_network* network, const msdro_sweep_config* config,
                    msdro_sweep** sweep) {
  return Guard([&] {
    NotNull(network, "network");
    NotNull(sweep, "sweep");
    *sweep = nullptr;
    msdro_sweep_config c;
    msdro_sweep_config_init(&c);
    if (config) c = *config;
    msdro::eval::SweepConfig s;
    if (c.grid_size > 0) s.grid = Array(c.grid, c.grid_size, "grid");
    s.n_samples = c.samples;
    s.seed = c.seed;
    s.gamma = c.gamma;
    s.oos_samples = c.oos_samples;
    s.tighten = c.tighten != 0;
    s.error_mean = ErrorMeanOf(c.error_mean);
    s.jobs = c.jobs;
    auto solver = Backend(c.backend);
    auto h = std::make_unique<msdro_sweep>();
    h->net = network->net;
    h->result = msdro::eval::RunSweep(h->net, s, solver.get());
    *sweep = h.release();
    return MSDRO_OK;
  });
}

void msdro_sweep_free(msdro_sweep* sweep) { delete sweep; }

int msdro_sweep_write(const msdro_sweep* sweep, const char* directory) {
  return Guard([&] {
    NotNull(sweep, "sweep");
    NotNull(directory, "directory");
    msdro::eval::WriteSweepCsv(directory, sweep->net, sweep->result);
    return MSDRO_OK;
  });
}

int msdro_sweep_counts(const msdro_sweep* sweep, int* cells, int* failed) {
  return Guard([&] {
    NotNull(sweep, "sweep");
    int bad = 0;
    for (const auto& c : sweep->result.cells) bad += c.ok() ? 0 : 1;
    if (cells) *cells = static_cast<int>(sweep->result.cells.size());
    if (failed) *failed = bad;
    return MSDRO_OK;
  });
}

int msdro_sweep_cell(const msdro_sweep* sweep, int index, double* epsilon, size_t size,
                     double* base, double* final_objective, double* oos_probability) {
  return Guard([&] {
    NotNull(sweep, "sweep");
    Require(index >= 0 && index < static_cast<int>(sweep->result.cells.size()),
            ErrorCode::kInput, "cell index out of range");
    const msdro::eval::CellResult& c = sweep->result.cells[index];
    if (epsilon) {
      Require(size == c.epsilon.size(), ErrorCode::kSize, "wrong array size");
      std::copy(c.epsilon.begin(), c.epsilon.end(), epsilon);
    }
    Require(c.ok(), ErrorCode::kExtraction, "cell failed: " + c.status);
    if (base) *base = c.base.objective;
    if (final_objective) *final_objective = c.final.objective;
    if (oos_probability) *oos_probability = c.oos.probability;
    return MSDRO_OK;
  });
}

const char* msdro_sweep_cell_status(const msdro_sweep* sweep, int index) {
  if (!sweep || index < 0 || index >= static_cast<int>(sweep->result.cells.size())) return nullptr;
  return sweep->result.cells[index].status.c_str();
}

int msdro_sweep_training_seed(const msdro_sweep* sweep, int feature, uint64_t* seed) {
  return Guard([&] {
    NotNull(sweep, "sweep");
    NotNull(seed, "seed");
    Require(feature >= 0 && feature < static_cast<int>(sweep->result.training_seeds.size()),
            ErrorCode::kInput, "feature out of range");
    *seed = sweep->result.training_seeds[feature];
    return MSDRO_OK;
  });
}

}  // extern "C"
