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

#ifndef MSDRO_VALUATION_VALUATION_H_
#define MSDRO_VALUATION_VALUATION_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "dro/dro.h"
#include "lp/solver.h"
#include "opf/network.h"
#include "opf/opf.h"

namespace msdro::valuation {

// How a dataset enters the optimal decision.
//   kRobustIgnored: both multipliers vanish, the data is not used.
//   kDataInformed:  each multiplier is 0 or sits at its upper value.
//   kMixed:         anything else, including kink points.
enum class Regime { kRobustIgnored, kDataInformed, kMixed };

const char* RegimeName(Regime regime);

// Tolerances for the regime classification.
inline constexpr double kLambdaTol = 1e-6;
inline constexpr double kThresholdBand = 1e-9;

struct FeatureValue {
  int feature = 0;
  double lambda_co = 0.0;
  double lambda_cc = 0.0;
  double phi = 0.0;
  double marginal_value = 0.0;  // d cost / d epsilon_j
  double threshold = 0.0;       // Offline usefulness threshold.
  double activation_weight = 0.0;  // sum_g c^A_g alpha_gj
  Regime regime = Regime::kMixed;
};

struct DataValueReport {
  std::vector<FeatureValue> features;
};

struct OfflinePrediction {
  double threshold = 0.0;
  double predicted_lambda_co = 0.0;
  bool degenerate = false;  // |epsilon - threshold| within kThresholdBand.
};

struct ForecastValue {
  int feature = 0;
  double lmp_term = 0.0;
  double balancing_term = 0.0;
  double reserve_term = 0.0;
  double pi_f = 0.0;  // lmp - balancing - reserve
  double pi_d = 0.0;  // lambda_co + phi lambda_cc
  double remuneration = 0.0;
};

struct ForecastValueReport {
  std::vector<ForecastValue> features;
};

struct EnvelopeResult {
  double base_objective = 0.0;
  double finite_difference = 0.0;
  double analytic = 0.0;
  double delta = 0.0;
  bool degenerate = false;
};

// sum_g c^A_g alpha_gj for every resource.
std::vector<double> ActivationWeights(const opf::Network& network,
                                      const opf::SolutionWithDuals& solution);

// Marginal value of data quality per feature. Raises kExtraction when the
// solution is not optimal or a dual family is missing.
DataValueReport MarginalDataValue(const opf::SolutionWithDuals& solution,
                                  const opf::Network& network, const dro::MultiDataset& data);

// Predicts the activation-cost multiplier from the data alone:
// threshold_j = mean_i(sample_ji - lower_j); 0 when epsilon_j >= threshold_j,
// the activation weight otherwise.
std::vector<OfflinePrediction> OfflineUsefulness(const dro::MultiDataset& data,
                                                 const dro::BoxSupport& support,
                                                 const std::vector<double>& activation_weight);

// N' sum_k eta_ik for every sample i; each entry equals phi at an optimum.
std::vector<double> PhiFromEta(const opf::SolutionWithDuals& solution);

// Value of the forecast u_j split into its locational price and the
// deductions for balancing and reserves, plus the data-quality charge.
ForecastValueReport ForecastValueDecomposition(const opf::SolutionWithDuals& solution,
                                               const opf::Network& network,
                                               const dro::MultiDataset& data);

// Central finite difference of the optimal cost in epsilon_j against
// lambda_co_j + phi lambda_cc_j. delta <= 0 picks 1e-5 epsilon_j (1e-6 at 0,
// where a forward difference is used).
EnvelopeResult EnvelopeCheck(const opf::Network& network, const dro::MultiDataset& data,
                             double gamma, int feature, double delta = 0.0,
                             const lp::Solver* solver = nullptr);

// Compact description of which named multipliers are non-zero.
std::string ActiveSetSignature(const opf::SolutionWithDuals& solution);

void WriteDataValueCsv(std::ostream& out, const DataValueReport& report,
                       const std::vector<double>& key = {}, bool header = true);
void WriteForecastValueCsv(std::ostream& out, const ForecastValueReport& report,
                           const std::vector<double>& key = {}, bool header = true);

}  // namespace msdro::valuation

#endif  // MSDRO_VALUATION_VALUATION_H_
