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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "common/error.h"
#include "eval/evaluation.h"
#include "opf/network.h"
#include "opf/opf.h"

namespace msdro::eval {
namespace {

using opf::Network;

Network Case5() { return opf::LoadNetwork(std::string(MSDRO_DATA_DIR) + "/case5.json"); }

double Cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double Pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2 * M_PI); }

// Mean of N(mu, sd) restricted to [lo, hi].
double TruncatedMean(double mu, double sd, double lo, double hi) {
  const double a = (lo - mu) / sd, b = (hi - mu) / sd;
  return mu + sd * (Pdf(a) - Pdf(b)) / (Cdf(b) - Cdf(a));
}

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Sampling, PerturbationStd) {
  EXPECT_EQ(PerturbationStd(0.0), 0.0);
  EXPECT_NEAR(PerturbationStd(0.1), 0.12533, 1e-5);
  // Monte Carlo: E|X| = eps for X ~ N(0, PerturbationStd(eps)).
  std::mt19937_64 rng(3);
  std::vector<double> x = TruncatedNormal(0.0, PerturbationStd(0.2), -1e9, 1e9, 200000, rng);
  double abs_mean = 0.0;
  for (double v : x) abs_mean += std::fabs(v) / x.size();
  EXPECT_NEAR(abs_mean, 0.2, 3 * 0.2 * std::sqrt(M_PI / 2 - 1) / std::sqrt(200000.0));
}

TEST(Sampling, TruncatedNormalMatchesAnalyticMean) {
  struct Case {
    double mu, sd, lo, hi;
  };
  // Centred, one-sided, and a window five standard deviations out.
  for (const Case& c : {Case{0, 1, -0.5, 2}, Case{0, 0.225, -0.9, 0.3}, Case{1.5, 0.225, -0.9, 0.3},
                        Case{-2, 0.3, 0.0, 0.5}}) {
    std::mt19937_64 rng(5);
    std::vector<double> x = TruncatedNormal(c.mu, c.sd, c.lo, c.hi, 50000, rng);
    for (double v : x) {
      ASSERT_GE(v, c.lo);
      ASSERT_LE(v, c.hi);
    }
    double var = 0.0;
    const double m = Mean(x);
    for (double v : x) var += (v - m) * (v - m) / x.size();
    EXPECT_NEAR(m, TruncatedMean(c.mu, c.sd, c.lo, c.hi), 4 * std::sqrt(var / x.size()) + 1e-12)
        << c.mu << " " << c.lo << " " << c.hi;
  }
  std::mt19937_64 rng(1);
  std::vector<double> fixed = TruncatedNormal(2.0, 0.0, -1.0, 1.0, 3, rng);
  EXPECT_EQ(fixed, std::vector<double>(3, 1.0));
}

TEST(Sampling, TrainingSamples) {
  Network net = Case5();
  const dro::BoxSupport box = opf::BuildSupport(net);
  for (int j = 0; j < 2; ++j) {
    std::vector<double> a = GenerateTrainingSamples(net.resources[j], 20000, 9);
    std::vector<double> b = GenerateTrainingSamples(net.resources[j], 20000, 9);
    EXPECT_EQ(a, b);
    for (double v : a) {
      ASSERT_GE(v, box.lower[j]);
      ASSERT_LE(v, box.upper[j]);
    }
    const double s = 0.15 * net.resources[j].u;
    EXPECT_NEAR(Mean(a), TruncatedMean(0.0, s, box.lower[j], box.upper[j]),
                3 * s / std::sqrt(20000.0));
  }
  // Feature 1 has a symmetric four-sigma window, so the mean is near zero.
  EXPECT_NEAR(Mean(GenerateTrainingSamples(net.resources[0], 20000, 2)), 0.0,
              3 * 0.15 / std::sqrt(20000.0));
  EXPECT_NE(GenerateTrainingSamples(net.resources[0], 5, 1),
            GenerateTrainingSamples(net.resources[0], 5, 2));

  std::vector<double> shifted =
      GenerateTrainingSamples(net.resources[1], 2000, 4, ErrorMean::kForecastShift);
  for (double v : shifted) {
    ASSERT_GE(v, box.lower[1]);
    ASSERT_LE(v, box.upper[1]);
  }
  EXPECT_GT(Mean(shifted), 0.2);  // Piles up under the upper bound.
}

TEST(Sampling, OosSamples) {
  Network net = Case5();
  const dro::BoxSupport box = opf::BuildSupport(net);
  for (double eps : {0.0, 0.1, 1.0}) {
    std::vector<double> x = GenerateOosSamples(net.resources[0], eps, 20000, 7);
    for (double v : x) {
      ASSERT_GE(v, box.lower[0]);
      ASSERT_LE(v, box.upper[0]);
    }
    EXPECT_NEAR(Mean(x), 0.0, 0.02);  // Symmetric window for feature 1.
  }
  // Wide window: the spread is 0.15u + eps sqrt(pi/2).
  opf::Resource wide{1, 1.0, 0.0, 100.0, 1.0};
  wide.u_min = -100.0;
  std::vector<double> x = GenerateOosSamples(wide, 0.1, 100000, 8);
  double var = 0.0;
  for (double v : x) var += v * v / x.size();
  EXPECT_NEAR(std::sqrt(var), 0.15 + 0.1 * std::sqrt(M_PI / 2), 0.005);
}

TEST(Sampling, DerivedSeeds) {
  EXPECT_EQ(DeriveSeed(1, "oos", {0.1, 0.2}), DeriveSeed(1, "oos", {0.1, 0.2}));
  EXPECT_NE(DeriveSeed(1, "oos", {0.1, 0.2}), DeriveSeed(1, "oos", {0.2, 0.1}));
  EXPECT_NE(DeriveSeed(1, "oos", {0.1, 0.2}), DeriveSeed(2, "oos", {0.1, 0.2}));
  EXPECT_NE(DeriveSeed(1, "oos", {0.1}), DeriveSeed(1, "train", {0.1}));
}

TEST(Sampling, ErrorMeanNames) {
  EXPECT_EQ(ParseErrorMean("zero"), ErrorMean::kZero);
  EXPECT_EQ(ParseErrorMean("forecast-shift"), ErrorMean::kForecastShift);
  EXPECT_STREQ(ErrorMeanName(ErrorMean::kForecastShift), "forecast-shift");
  EXPECT_THROW(ParseErrorMean("mean"), Error);
}

// Decision with slack everywhere except generator 3's upward reserve,
// which covers only 0.1 of a shortfall in feature 1.
opf::OpfDecision HalfSpaceDecision(const Network& net) {
  opf::OpfDecision d;
  const int g_count = net.num_generators();
  d.p.assign(g_count, 0.0);
  d.r_plus.assign(g_count, 100.0);
  d.r_minus.assign(g_count, 100.0);
  d.alpha.assign(g_count, std::vector<double>(2, 0.0));
  d.alpha[2][0] = 1.0;
  d.alpha[4][1] = 1.0;
  d.r_plus[2] = 0.1;
  d.f_ram_plus.assign(net.num_lines(), 100.0);
  d.f_ram_minus.assign(net.num_lines(), 100.0);
  return d;
}

TEST(Violation, ZeroErrorsNeverViolate) {
  Network net = Case5();
  OosResult r = EmpiricalViolation(net, HalfSpaceDecision(net), {{0.0, 0.0}, {0.0, 0.0}});
  EXPECT_EQ(r.samples, 2);
  EXPECT_EQ(r.violations, 0);
  EXPECT_EQ(r.probability, 0.0);
}

TEST(Violation, MatchesAnalyticHalfSpace) {
  Network net = Case5();
  const dro::BoxSupport box = opf::BuildSupport(net);
  const int n = 20000;
  std::vector<std::vector<double>> samples = OosMatrix(net, {0.1, 0.1}, n, 11);
  OosResult r = EmpiricalViolation(net, HalfSpaceDecision(net), samples);
  // Violated exactly when xi_1 < -0.1.
  const double sd = 0.15 + 0.1 * std::sqrt(M_PI / 2);
  const double a = box.lower[0] / sd, b = box.upper[0] / sd;
  const double p = (Cdf(-0.1 / sd) - Cdf(a)) / (Cdf(b) - Cdf(a));
  EXPECT_NEAR(r.probability, p, 3 * std::sqrt(p * (1 - p) / n));
  EXPECT_EQ(r.samples, n);
}

TEST(Violation, RobustDecisionNeverViolates) {
  Network net = Case5();
  dro::MultiDataset data = GenerateTrainingData(net, 20, 1, ErrorMean::kZero, {1.0, 1.0});
  opf::SolutionWithDuals sol = opf::SolveOpf(opf::BuildMsdroOpf(net, data));
  ASSERT_TRUE(sol.optimal());
  for (double eps : {0.0, 0.1, 1.0}) {
    OosResult r = EmpiricalViolation(net, sol.decision, OosMatrix(net, {eps, eps}, 1000, 3));
    EXPECT_EQ(r.violations, 0) << eps;
  }
}

TEST(Violation, RejectsWrongWidth) {
  Network net = Case5();
  EXPECT_THROW(EmpiricalViolation(net, HalfSpaceDecision(net), {{0.0}}), Error);
}

TEST(Sweep, SmallGrid) {
  Network net = Case5();
  SweepConfig config;
  config.grid = {1.0, 0.001};
  config.seed = 42;
  SweepResult result = RunSweep(net, config);
  ASSERT_EQ(result.cells.size(), 4u);
  EXPECT_EQ(result.cells[0].epsilon, (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(result.cells[1].epsilon, (std::vector<double>{1.0, 0.001}));
  EXPECT_EQ(result.cells[3].epsilon, (std::vector<double>{0.001, 0.001}));
  for (const CellResult& c : result.cells) {
    ASSERT_TRUE(c.ok()) << c.message;
    EXPECT_LE(c.final.objective, c.base.objective + 1e-6);
    EXPECT_EQ(c.data_value.features.size(), 2u);
    EXPECT_EQ(c.oos.samples, 1000);
    if (c.epsilon == std::vector<double>{1.0, 1.0}) EXPECT_EQ(c.oos.violations, 0);
  }
  EXPECT_LT(result.cells[3].base.objective, result.cells[0].base.objective);
  // Base objective is non-decreasing in each radius.
  EXPECT_LE(result.cells[1].base.objective, result.cells[0].base.objective + 1e-8);
  EXPECT_LE(result.cells[3].base.objective, result.cells[1].base.objective + 1e-8);
  EXPECT_LE(result.cells[3].base.objective, result.cells[2].base.objective + 1e-8);
  // Training data is shared by every cell.
  EXPECT_EQ(result.training.samples.size(), 2u);
  EXPECT_EQ(result.training.samples[0].size(), 20u);
}

TEST(Sweep, DeterministicAcrossJobs) {
  Network net = Case5();
  SweepConfig config;
  config.grid = {0.1, 0.005};
  config.oos_samples = 200;
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "msdro_eval_test";
  fs::remove_all(root);
  std::vector<std::string> files_a = WriteSweepCsv((root / "a").string(), net, RunSweep(net, config));
  config.jobs = 4;
  std::vector<std::string> files_b = WriteSweepCsv((root / "b").string(), net, RunSweep(net, config));
  ASSERT_EQ(files_a, files_b);
  for (const char* must : {"objectives.csv", "lambdas.csv", "dispatch.csv", "cost_components.csv",
                           "oos.csv", "data_value.csv", "forecast_value.csv"}) {
    EXPECT_NE(std::find(files_a.begin(), files_a.end(), must), files_a.end()) << must;
  }
  for (const std::string& f : files_a) {
    const std::string a = ReadFile(root / "a" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, ReadFile(root / "b" / f)) << f;
  }
  const std::string obj = ReadFile(root / "a" / "objectives.csv");
  EXPECT_EQ(std::count(obj.begin(), obj.end(), '\n'), 5);
  fs::remove_all(root);
}

TEST(Sweep, FailedCellsAreRecorded) {
  Network net = Case5();
  for (opf::Generator& g : net.generators) g.p_max *= 0.3;
  opf::FinalizeNetwork(net);
  SweepConfig config;
  config.grid = {0.1};
  config.oos_samples = 10;
  SweepResult result = RunSweep(net, config);
  ASSERT_EQ(result.cells.size(), 1u);
  EXPECT_FALSE(result.cells[0].ok());
  EXPECT_EQ(result.cells[0].status, "infeasible");
}

TEST(Sweep, RejectsBadConfig) {
  Network net = Case5();
  SweepConfig config;
  config.grid = {-0.1};
  EXPECT_THROW(RunSweep(net, config), Error);
  config.grid = {0.1};
  config.n_samples = 0;
  EXPECT_THROW(RunSweep(net, config), Error);
}

}  // namespace
}  // namespace msdro::eval
