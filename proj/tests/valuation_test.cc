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
#include <functional>
#include <sstream>
#include <string>

#include "common/error.h"
#include "opf/network.h"
#include "opf/opf.h"
#include "opf_oracles.h"
#include "valuation/valuation.h"

namespace msdro::valuation {
namespace {

using opf::Network;
using opf::SolutionWithDuals;
using testing::UniformData;

Network Case5() { return opf::LoadNetwork(std::string(MSDRO_DATA_DIR) + "/case5.json"); }

SolutionWithDuals Solve(const Network& net, const dro::MultiDataset& data, double gamma = 0.05) {
  opf::OpfOptions options;
  options.gamma = gamma;
  return opf::SolveOpf(opf::BuildMsdroOpf(net, data, options));
}

double Weight(const Network& net, const SolutionWithDuals& sol, int j) {
  double w = 0.0;
  for (int g = 0; g < net.num_generators(); ++g)
    w += net.generators[g].c_activation * sol.decision.alpha[g][j];
  return w;
}

TEST(DataValue, RobustBudgetIgnoresData) {
  Network net = Case5();
  dro::MultiDataset data = UniformData(net, 20, 3, {1.0, 1.0});
  SolutionWithDuals sol = Solve(net, data);
  ASSERT_TRUE(sol.optimal());
  DataValueReport report = MarginalDataValue(sol, net, data);
  ASSERT_EQ(report.features.size(), 2u);
  for (const FeatureValue& f : report.features) {
    EXPECT_NEAR(f.lambda_co, 0.0, kLambdaTol);
    EXPECT_NEAR(f.lambda_cc, 0.0, kLambdaTol);
    EXPECT_NEAR(f.marginal_value, 0.0, kLambdaTol);
    EXPECT_EQ(f.regime, Regime::kRobustIgnored);
  }
}

TEST(DataValue, MultiplierDichotomies) {
  Network net = Case5();
  const double grid[] = {1.0, 0.1, 0.005, 0.001};
  int informed = 0;
  for (double e1 : grid) {
    for (double e2 : grid) {
      dro::MultiDataset data = UniformData(net, 20, 21, {e1, e2});
      SolutionWithDuals sol = Solve(net, data);
      ASSERT_TRUE(sol.optimal());
      DataValueReport report = MarginalDataValue(sol, net, data);
      for (int j = 0; j < 2; ++j) {
        const FeatureValue& f = report.features[j];
        const double w = Weight(net, sol, j);
        EXPECT_NEAR(f.activation_weight, w, 1e-9);
        EXPECT_NEAR(f.marginal_value, f.lambda_co + f.phi * f.lambda_cc, 1e-9);
        if (std::fabs(data.epsilon[j] - f.threshold) <= kThresholdBand) continue;
        // Activation multiplier: 0 or the activation weight.
        const bool co_ok = std::fabs(f.lambda_co) <= kLambdaTol ||
                           std::fabs(f.lambda_co - w) <= kLambdaTol * std::max(1.0, w);
        EXPECT_TRUE(co_ok) << e1 << " " << e2 << " j=" << j << " " << f.lambda_co << " " << w;
        if (f.regime == Regime::kDataInformed) ++informed;
        if (f.regime == Regime::kRobustIgnored) {
          EXPECT_NEAR(f.lambda_co, 0.0, kLambdaTol);
          EXPECT_NEAR(f.lambda_cc, 0.0, kLambdaTol);
        }
      }
    }
  }
  EXPECT_GT(informed, 0);
}

// The chance multiplier can sit where two CVaR rows cross rather than at a
// row slope: pinning it to 0 or to any |a'_kj| costs strictly more.
TEST(DataValue, ChanceMultiplierNeedNotSitAtSlope) {
  Network net = Case5();
  dro::MultiDataset data = UniformData(net, 20, 21, {0.001, 0.001});
  opf::OpfModel model = opf::BuildMsdroOpf(net, data);
  SolutionWithDuals sol = opf::SolveOpf(model);
  ASSERT_TRUE(sol.optimal());
  const double lcc = sol.lambda_cc[1];
  std::vector<double> candidates = {0.0};
  bool at_slope = std::fabs(lcc) <= kLambdaTol;
  for (int k = 0; k <= sol.num_cvar_rows(); ++k) {
    candidates.push_back(std::fabs(sol.a_prime[k][1]));
    at_slope = at_slope || std::fabs(lcc - candidates.back()) <= kLambdaTol;
  }
  EXPECT_FALSE(at_slope) << lcc;
  for (double c : candidates) {
    opf::OpfModel pinned = model;
    pinned.mutable_lp().SetBounds(*pinned.lp().FindVariable("lambda_cc_1"), c, c);
    SolutionWithDuals other = opf::SolveOpf(pinned);
    ASSERT_TRUE(other.optimal());
    EXPECT_GT(other.objective, sol.objective + 1e-3) << c;
  }
  DataValueReport report = MarginalDataValue(sol, net, data);
  EXPECT_EQ(report.features[1].regime, Regime::kMixed);
}

TEST(DataValue, PhiMatchesChanceDuals) {
  Network net = Case5();
  for (double eps : {0.1, 0.005, 0.001}) {
    dro::MultiDataset data = UniformData(net, 20, 17, {eps, 2 * eps});
    SolutionWithDuals sol = Solve(net, data);
    ASSERT_TRUE(sol.optimal());
    std::vector<double> phi = PhiFromEta(sol);
    ASSERT_EQ(phi.size(), 20u);
    for (double v : phi) EXPECT_NEAR(v, sol.duals.phi, 1e-6 * std::max(1.0, sol.duals.phi));
  }
}

TEST(DataValue, MissingDualsAreReported) {
  Network net = Case5();
  dro::MultiDataset data = UniformData(net, 5, 1, {0.1, 0.1});
  SolutionWithDuals sol;
  try {
    MarginalDataValue(sol, net, data);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kExtraction);
  }
  sol = Solve(net, data);
  sol.duals.eta.clear();
  try {
    MarginalDataValue(sol, net, data);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kExtraction);
  }
}

TEST(Offline, ThresholdByHand) {
  dro::MultiDataset data;
  data.samples = {{-0.5, 0.1, 0.4}, {-0.6, -0.6}};
  data.epsilon = {0.5, 0.01};
  dro::BoxSupport box{{-0.6, -0.6}, {0.6, 0.6}};
  std::vector<OfflinePrediction> p = OfflineUsefulness(data, box, {10.0, 20.0});
  ASSERT_EQ(p.size(), 2u);
  EXPECT_NEAR(p[0].threshold, 0.6, 1e-12);
  EXPECT_NEAR(p[0].predicted_lambda_co, 10.0, 1e-12);
  EXPECT_FALSE(p[0].degenerate);
  // Every sample already at the worst corner: the data never helps.
  EXPECT_NEAR(p[1].threshold, 0.0, 1e-12);
  EXPECT_NEAR(p[1].predicted_lambda_co, 0.0, 1e-12);

  data.epsilon = {0.6, 0.0};
  p = OfflineUsefulness(data, box, {10.0, 20.0});
  EXPECT_TRUE(p[0].degenerate);
  EXPECT_TRUE(p[1].degenerate);
  data.epsilon = {0.7, 0.1};
  p = OfflineUsefulness(data, box, {10.0, 20.0});
  EXPECT_NEAR(p[0].predicted_lambda_co, 0.0, 1e-12);
}

TEST(Offline, PredictsSolvedMultipliers) {
  Network net = Case5();
  const dro::BoxSupport box = opf::BuildSupport(net);
  const double grid[] = {1.0, 0.1, 0.005, 0.001};
  for (double e1 : grid) {
    for (double e2 : grid) {
      dro::MultiDataset data = UniformData(net, 20, 23, {e1, e2});
      SolutionWithDuals sol = Solve(net, data);
      ASSERT_TRUE(sol.optimal());
      std::vector<double> w = {Weight(net, sol, 0), Weight(net, sol, 1)};
      std::vector<OfflinePrediction> p = OfflineUsefulness(data, box, w);
      for (int j = 0; j < 2; ++j) {
        if (p[j].degenerate) continue;
        EXPECT_NEAR(sol.lambda_co[j], p[j].predicted_lambda_co,
                    kLambdaTol * std::max(1.0, w[j]))
            << e1 << " " << e2 << " j=" << j;
      }
    }
  }
}

// Optimal cost with resource j's forecast moved by h, samples unchanged.
double CostAtForecast(Network net, const dro::MultiDataset& data, int j, double h) {
  net.resources[j].u += h;
  opf::FinalizeNetwork(net);
  SolutionWithDuals sol = Solve(net, data);
  EXPECT_TRUE(sol.optimal());
  return sol.objective;
}

TEST(ForecastValue, MatchesFiniteDifferenceInForecast) {
  Network net = Case5();
  int checked = 0;
  for (double eps : {1.0, 0.1, 0.005, 0.001}) {
    dro::MultiDataset data = UniformData(net, 20, 29, {eps, eps});
    SolutionWithDuals sol = Solve(net, data);
    ForecastValueReport report = ForecastValueDecomposition(sol, net, data);
    ASSERT_EQ(report.features.size(), 2u);
    for (int j = 0; j < 2; ++j) {
      const ForecastValue& f = report.features[j];
      EXPECT_NEAR(f.pi_f, f.lmp_term - f.balancing_term - f.reserve_term, 1e-9);
      EXPECT_NEAR(f.remuneration, net.resources[j].u * f.pi_f - eps * f.pi_d, 1e-9);
      const double h = 1e-5;
      const double base = sol.objective;
      const double up = CostAtForecast(net, data, j, h);
      const double down = CostAtForecast(net, data, j, -h);
      const double right = (base - up) / h, left = (down - base) / h;
      const double scale = std::max(1.0, std::fabs(f.pi_f));
      if (std::fabs(right - left) > 1e-4 * scale) continue;  // Kink.
      EXPECT_NEAR(0.5 * (left + right), f.pi_f, 1e-4 * scale) << "eps=" << eps << " j=" << j;
      ++checked;
    }
  }
  EXPECT_GE(checked, 4);
}

TEST(ForecastValue, NoUncertaintyLeavesPrice) {
  Network net = Case5();
  for (opf::Resource& r : net.resources) r.kappa = 0.0;
  opf::FinalizeNetwork(net);
  dro::MultiDataset data;
  data.samples = {std::vector<double>(5, 0.0), std::vector<double>(5, 0.0)};
  data.epsilon = {0.01, 0.01};
  SolutionWithDuals sol = Solve(net, data);
  ASSERT_TRUE(sol.optimal());
  ForecastValueReport report = ForecastValueDecomposition(sol, net, data);
  for (const ForecastValue& f : report.features) {
    EXPECT_NEAR(f.balancing_term, 0.0, 1e-9);
    EXPECT_NEAR(f.reserve_term, 0.0, 1e-9);
    EXPECT_NEAR(f.pi_f, f.lmp_term, 1e-9);
  }
}

TEST(ForecastValue, RobustBalancingChargeIsWorstCorner) {
  Network net = Case5();
  dro::MultiDataset data = UniformData(net, 20, 31, {1.0, 1.0});
  SolutionWithDuals sol = Solve(net, data);
  ForecastValueReport report = ForecastValueDecomposition(sol, net, data);
  const dro::BoxSupport box = opf::BuildSupport(net);
  for (int j = 0; j < 2; ++j) {
    const double w = Weight(net, sol, j);
    EXPECT_NEAR(net.resources[j].u * report.features[j].balancing_term, -box.lower[j] * w,
                1e-6 * std::max(1.0, w));
  }
}

TEST(Envelope, AgreesAwayFromKinks) {
  Network net = Case5();
  int checked = 0;
  for (double eps : {1.0, 0.1, 0.005, 0.001}) {
    dro::MultiDataset data = UniformData(net, 20, 37, {eps, 1.5 * eps});
    for (int j = 0; j < 2; ++j) {
      EnvelopeResult r = EnvelopeCheck(net, data, 0.05, j);
      EXPECT_GT(r.delta, 0.0);
      if (r.degenerate) continue;
      EXPECT_NEAR(r.finite_difference, r.analytic, 1e-4 * std::max(1.0, std::fabs(r.analytic)))
          << "eps=" << eps << " j=" << j;
      ++checked;
    }
  }
  EXPECT_GE(checked, 4);
}

TEST(Envelope, FlagsTheThreshold) {
  Network net = Case5();
  dro::MultiDataset data = UniformData(net, 20, 41, {0.001, 0.001});
  const dro::BoxSupport box = opf::BuildSupport(net);
  double mean = 0.0;
  for (double x : data.samples[0]) mean += x - box.lower[0];
  data.epsilon[0] = mean / 20;
  // Just beyond the offline threshold the activation multiplier switches off.
  EnvelopeResult r = EnvelopeCheck(net, data, 0.05, 0, 1e-3 * data.epsilon[0]);
  SolutionWithDuals sol = Solve(net, data);
  if (Weight(net, sol, 0) > 1e-6) EXPECT_TRUE(r.degenerate);
}

TEST(Envelope, RejectsBadFeature) {
  Network net = Case5();
  dro::MultiDataset data = UniformData(net, 5, 1, {0.1, 0.1});
  try {
    EnvelopeCheck(net, data, 0.05, 2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInput);
  }
}

TEST(Csv, FixedColumns) {
  Network net = Case5();
  dro::MultiDataset data = UniformData(net, 5, 1, {0.1, 0.1});
  SolutionWithDuals sol = Solve(net, data);
  std::ostringstream a, b;
  WriteDataValueCsv(a, MarginalDataValue(sol, net, data));
  WriteForecastValueCsv(b, ForecastValueDecomposition(sol, net, data), {0.1, 0.1});
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')),
            "feature,lambda_co,lambda_cc,phi,marginal_value,threshold,regime");
  EXPECT_EQ(b.str().substr(0, b.str().find('\n')),
            "eps_1,eps_2,feature,lmp_term,balancing_term,reserve_term,pi_F,pi_D,remuneration");
  const std::string text = a.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

}  // namespace
}  // namespace msdro::valuation
