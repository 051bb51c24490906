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

#include "eval/evaluation.h"

#include <algorithm>
#include <atomic>
#include <cfloat>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "common/error.h"

namespace msdro::eval {
namespace {

constexpr double kTrainingSpread = 0.15;  // S_j = 0.15 u_j
constexpr double kViolationTol = 1e-9;

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void KeyHeader(std::ostream& out, int d_count) {
  for (int j = 0; j < d_count; ++j) out << "eps_" << j + 1 << ',';
}

void Key(std::ostream& out, const std::vector<double>& eps) {
  for (double e : eps) out << e << ',';
}

std::ofstream OpenCsv(const std::filesystem::path& path) {
  std::ofstream out(path);
  Require(out.good(), ErrorCode::kIo, "cannot write " + path.string());
  out << std::setprecision(12);
  return out;
}

}  // namespace

const char* ErrorMeanName(ErrorMean mean) {
  return mean == ErrorMean::kZero ? "zero" : "forecast-shift";
}

ErrorMean ParseErrorMean(const std::string& name) {
  if (name == "zero") return ErrorMean::kZero;
  if (name == "forecast-shift") return ErrorMean::kForecastShift;
  Fail(ErrorCode::kInput, "unknown error mean '" + name + "' (zero, forecast-shift)");
}

double PerturbationStd(double eps) { return eps * std::sqrt(M_PI / 2.0); }

std::uint64_t DeriveSeed(std::uint64_t seed, const std::string& purpose,
                         const std::vector<double>& key) {
  std::uint64_t h = SplitMix(seed);
  for (unsigned char c : purpose) h = SplitMix(h ^ c);
  for (double v : key) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    h = SplitMix(h ^ bits);
  }
  return h;
}

std::vector<double> TruncatedNormal(double mean, double sd, double lo, double hi, int n,
                                    std::mt19937_64& rng) {
  Require(lo <= hi && sd >= 0.0 && n >= 0, ErrorCode::kInput, "bad truncated normal");
  if (sd == 0.0) return std::vector<double>(n, std::clamp(mean, lo, hi));
  const boost::math::normal_distribution<double> unit;
  // Work on the side of the window nearer the lower tail, where the CDF
  // keeps its relative precision.
  double a = (lo - mean) / sd, b = (hi - mean) / sd;
  const bool flip = a > 0.0;
  if (flip) {
    std::swap(a, b);
    a = -a;
    b = -b;
  }
  const double pa = boost::math::cdf(unit, a);
  const double pb = boost::math::cdf(unit, b);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> out(n);
  for (int s = 0; s < n; ++s) {
    const double u = uniform(rng);
    double z;
    if (pb - pa <= 0.0) {
      z = b;  // Window beyond double precision: the edge nearer the mean.
    } else {
      const double p = std::clamp(pa + u * (pb - pa), DBL_MIN, 1.0 - DBL_EPSILON);
      z = boost::math::quantile(unit, p);
    }
    out[s] = std::clamp(flip ? mean - z * sd : mean + z * sd, lo, hi);
  }
  return out;
}

std::vector<double> GenerateTrainingSamples(const opf::Resource& resource, int n,
                                            std::uint64_t seed, ErrorMean mean) {
  Require(n >= 0, ErrorCode::kInput, "sample count must be non-negative");
  const auto [lo, hi] = opf::BuildSupport(resource);
  std::mt19937_64 rng(seed);
  const double sd = kTrainingSpread * resource.u;
  // Injections u + xi, truncated to [u + lower, u + upper], as errors.
  const double centre = mean == ErrorMean::kZero ? 0.0 : resource.u;
  return TruncatedNormal(centre, sd, lo, hi, n, rng);
}

std::vector<double> GenerateOosSamples(const opf::Resource& resource, double eps, int n,
                                       std::uint64_t seed) {
  Require(eps >= 0.0 && std::isfinite(eps), ErrorCode::kInput, "epsilon must be >= 0");
  const auto [lo, hi] = opf::BuildSupport(resource);
  std::mt19937_64 rng(seed);
  const double sd = kTrainingSpread * resource.u + PerturbationStd(eps);
  return TruncatedNormal(0.0, sd, lo, hi, n, rng);
}

dro::MultiDataset GenerateTrainingData(const opf::Network& network, int n, std::uint64_t seed,
                                       ErrorMean mean, std::vector<double> epsilon) {
  dro::MultiDataset data;
  for (int j = 0; j < network.num_resources(); ++j) {
    data.samples.push_back(GenerateTrainingSamples(
        network.resources[j], n, DeriveSeed(seed, "train", {static_cast<double>(j)}), mean));
  }
  data.epsilon = std::move(epsilon);
  return data;
}

std::vector<std::vector<double>> OosMatrix(const opf::Network& network,
                                           const std::vector<double>& epsilon, int n,
                                           std::uint64_t seed) {
  const int d_count = network.num_resources();
  Require(static_cast<int>(epsilon.size()) == d_count, ErrorCode::kInput,
          "epsilon has the wrong dimension");
  std::vector<std::vector<double>> out(n, std::vector<double>(d_count));
  for (int j = 0; j < d_count; ++j) {
    std::vector<double> col = GenerateOosSamples(
        network.resources[j], epsilon[j], n, DeriveSeed(seed, "feature", {static_cast<double>(j)}));
    for (int s = 0; s < n; ++s) out[s][j] = col[s];
  }
  return out;
}

OosResult EmpiricalViolation(const opf::Network& network, const opf::OpfDecision& decision,
                             const std::vector<std::vector<double>>& samples) {
  const int d_count = network.num_resources();
  opf::Matrix a;
  std::vector<double> b;
  opf::EvaluateCvarRows(network, decision, opf::MakeCvarRows(network, {}), a, b);
  OosResult r;
  r.samples = static_cast<int>(samples.size());
  for (const std::vector<double>& xi : samples) {
    Require(static_cast<int>(xi.size()) == d_count, ErrorCode::kInput,
            "sample has the wrong dimension");
    for (std::size_t k = 0; k < a.size(); ++k) {
      double v = b[k];
      for (int j = 0; j < d_count; ++j) v += a[k][j] * xi[j];
      if (v > kViolationTol) {
        ++r.violations;
        break;
      }
    }
  }
  r.probability = r.samples > 0 ? static_cast<double>(r.violations) / r.samples : 0.0;
  return r;
}

namespace {

void SolveCell(const opf::Network& network, const SweepConfig& config,
               const dro::MultiDataset& training, const lp::Solver* solver, CellResult& cell) {
  dro::MultiDataset data = training;
  data.epsilon = cell.epsilon;
  try {
    opf::OpfOptions options;
    options.gamma = config.gamma;
    cell.base = opf::SolveOpf(opf::BuildMsdroOpf(network, data, options), solver);
    if (!cell.base.optimal()) {
      cell.status = lp::SolveStatusName(cell.base.status);
      cell.message = cell.base.message;
      return;
    }
    cell.final = config.tighten
                     ? opf::CvarTighteningRerun(network, data, config.gamma, cell.base, solver)
                     : cell.base;
    if (!cell.final.optimal()) {
      cell.status = std::string("rerun-") + lp::SolveStatusName(cell.final.status);
      cell.message = cell.final.message;
      return;
    }
    cell.data_value = valuation::MarginalDataValue(cell.base, network, data);
    cell.forecast_value = valuation::ForecastValueDecomposition(cell.base, network, data);
    cell.oos = EmpiricalViolation(
        network, cell.final.decision,
        OosMatrix(network, cell.epsilon, config.oos_samples,
                  DeriveSeed(config.seed, "oos", cell.epsilon)));
    cell.status = "optimal";
  } catch (const Error& e) {
    cell.status = ErrorCodeName(e.code());
    cell.message = e.what();
  }
}

}  // namespace

SweepResult RunSweep(const opf::Network& network, const SweepConfig& config,
                     const lp::Solver* solver) {
  Require(!config.grid.empty(), ErrorCode::kInput, "empty epsilon grid");
  for (double e : config.grid)
    Require(std::isfinite(e) && e >= 0.0, ErrorCode::kInput, "grid values must be >= 0");
  Require(config.n_samples >= 1, ErrorCode::kInput, "need at least one training sample");
  Require(config.oos_samples >= 0, ErrorCode::kInput, "out-of-sample count must be >= 0");
  Require(config.gamma >= 0.0 && config.gamma < 1.0, ErrorCode::kInput, "gamma must be in [0, 1)");
  Require(config.jobs >= 1, ErrorCode::kInput, "jobs must be >= 1");

  SweepResult result;
  result.config = config;
  const int d_count = network.num_resources();
  result.training = GenerateTrainingData(network, config.n_samples, config.seed, config.error_mean);
  for (int j = 0; j < d_count; ++j)
    result.training_seeds.push_back(DeriveSeed(config.seed, "train", {static_cast<double>(j)}));

  // Cartesian product, feature 1 varying slowest.
  const int g = static_cast<int>(config.grid.size());
  std::size_t cells = 1;
  for (int j = 0; j < d_count; ++j) cells *= g;
  result.cells.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t rest = c;
    std::vector<double> eps(d_count);
    for (int j = d_count - 1; j >= 0; --j) {
      eps[j] = config.grid[rest % g];
      rest /= g;
    }
    result.cells[c].epsilon = eps;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < cells; c = next++)
      SolveCell(network, config, result.training, solver, result.cells[c]);
  };
  const int threads = std::min<int>(config.jobs, static_cast<int>(cells));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return result;
}

std::vector<std::string> WriteSweepCsv(const std::string& directory, const opf::Network& network,
                                       const SweepResult& result) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  Require(!ec, ErrorCode::kIo, "cannot create " + directory + ": " + ec.message());
  const fs::path dir(directory);
  const int d_count = network.num_resources();
  std::vector<std::string> files;
  auto open = [&](const char* name) {
    files.push_back(name);
    return OpenCsv(dir / name);
  };

  {
    std::ofstream out = open("objectives.csv");
    KeyHeader(out, d_count);
    out << "status,objective,objective_rerun,energy_cost,reserve_cost,activation_cost,"
           "fixed_generators\n";
    for (const CellResult& c : result.cells) {
      Key(out, c.epsilon);
      out << c.status;
      if (c.ok()) {
        out << ',' << c.base.objective << ',' << c.final.objective << ',' << c.final.energy_cost
            << ',' << c.final.reserve_cost << ',' << c.final.activation_cost << ','
            << c.final.fixed_generators.size() << '\n';
      } else {
        out << ",,,,,,\n";
      }
    }
  }
  {
    std::ofstream out = open("lambdas.csv");
    KeyHeader(out, d_count);
    for (int j = 0; j < d_count; ++j) out << "lambda_co_" << j + 1 << ',';
    for (int j = 0; j < d_count; ++j) out << "lambda_cc_" << j + 1 << ',';
    out << "phi\n";
    for (const CellResult& c : result.cells) {
      if (!c.ok()) continue;
      Key(out, c.epsilon);
      for (double v : c.base.lambda_co) out << v << ',';
      for (double v : c.base.lambda_cc) out << v << ',';
      out << c.base.duals.phi << '\n';
    }
  }
  {
    std::ofstream out = open("dispatch.csv");
    KeyHeader(out, d_count);
    out << "generator,bus,p,r_plus,r_minus";
    for (int j = 0; j < d_count; ++j) out << ",alpha_" << j + 1;
    out << '\n';
    for (const CellResult& c : result.cells) {
      if (!c.ok()) continue;
      const opf::OpfDecision& d = c.final.decision;
      for (int g = 0; g < network.num_generators(); ++g) {
        Key(out, c.epsilon);
        out << g + 1 << ',' << network.generators[g].bus << ',' << d.p[g] << ',' << d.r_plus[g]
            << ',' << d.r_minus[g];
        for (int j = 0; j < d_count; ++j) out << ',' << d.alpha[g][j];
        out << '\n';
      }
    }
  }
  {
    std::ofstream out = open("cost_components.csv");
    KeyHeader(out, d_count);
    out << "feature,activation_weight,lambda_co,eps_lambda_co,eps_phi_lambda_cc,u_balancing_term,"
           "lmp_term,balancing_term,reserve_term,pi_F,pi_D,remuneration\n";
    for (const CellResult& c : result.cells) {
      if (!c.ok()) continue;
      for (int j = 0; j < d_count; ++j) {
        const valuation::FeatureValue& v = c.data_value.features[j];
        const valuation::ForecastValue& f = c.forecast_value.features[j];
        const double eps = c.epsilon[j];
        Key(out, c.epsilon);
        out << j + 1 << ',' << v.activation_weight << ',' << v.lambda_co << ','
            << eps * v.lambda_co << ',' << eps * v.phi * v.lambda_cc << ','
            << network.resources[j].u * f.balancing_term << ',' << f.lmp_term << ','
            << f.balancing_term << ',' << f.reserve_term << ',' << f.pi_f << ',' << f.pi_d << ','
            << f.remuneration << '\n';
      }
    }
  }
  {
    std::ofstream out = open("oos.csv");
    KeyHeader(out, d_count);
    out << "status,samples,violations,probability\n";
    for (const CellResult& c : result.cells) {
      Key(out, c.epsilon);
      out << c.status << ',' << c.oos.samples << ',' << c.oos.violations << ','
          << c.oos.probability << '\n';
    }
  }
  {
    std::ofstream a = open("data_value.csv");
    std::ofstream b = open("forecast_value.csv");
    bool header = true;
    for (const CellResult& c : result.cells) {
      if (!c.ok()) continue;
      valuation::WriteDataValueCsv(a, c.data_value, c.epsilon, header);
      valuation::WriteForecastValueCsv(b, c.forecast_value, c.epsilon, header);
      header = false;
    }
  }
  {
    std::ofstream out = open("plotdata_marginal_value.csv");
    KeyHeader(out, d_count);
    for (int j = 0; j < d_count; ++j) out << (j ? "," : "") << "marginal_value_" << j + 1;
    out << '\n';
    for (const CellResult& c : result.cells) {
      if (!c.ok()) continue;
      Key(out, c.epsilon);
      for (int j = 0; j < d_count; ++j)
        out << (j ? "," : "") << c.data_value.features[j].marginal_value;
      out << '\n';
    }
  }
  {
    std::ofstream out = open("plotdata_remuneration.csv");
    KeyHeader(out, d_count);
    for (int j = 0; j < d_count; ++j) out << (j ? "," : "") << "remuneration_" << j + 1;
    out << '\n';
    for (const CellResult& c : result.cells) {
      if (!c.ok()) continue;
      Key(out, c.epsilon);
      for (int j = 0; j < d_count; ++j)
        out << (j ? "," : "") << c.forecast_value.features[j].remuneration;
      out << '\n';
    }
  }
  return files;
}

}  // namespace msdro::eval
