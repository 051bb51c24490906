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

#ifndef MSDRO_DRO_DRO_H_
#define MSDRO_DRO_DRO_H_

#include <cstddef>
#include <vector>

#include "lp/solver.h"

namespace msdro::dro {

// Box support: per-coordinate interval [lower_j, upper_j] with
// lower_j <= 0 <= upper_j.
struct BoxSupport {
  std::vector<double> lower;
  std::vector<double> upper;

  int dimension() const { return static_cast<int>(lower.size()); }
  void Validate() const;
  bool Contains(int j, double value, double tol = 1e-12) const;
};

struct AffinePiece {
  std::vector<double> a;
  double b = 0.0;
};

// c(xi) = max_k a_k . xi + b_k.
struct PiecewiseMaxAffine {
  std::vector<AffinePiece> pieces;

  int dimension() const { return pieces.empty() ? 0 : static_cast<int>(pieces[0].a.size()); }
  void Validate(int dimension) const;
  double Evaluate(const std::vector<double>& xi) const;
};

// c(xi) = sum_j c_j xi_j.
struct SeparableAffineCost {
  std::vector<double> c;
};

// samples[j][i] is sample i of feature j.
struct MultiDataset {
  std::vector<std::vector<double>> samples;
  std::vector<double> epsilon;

  int dimension() const { return static_cast<int>(samples.size()); }
  bool standardized() const;
  // Shared length N'; requires standardized().
  int shared_count() const;
  void Validate(const BoxSupport* support) const;
};

struct WorstCaseResult {
  double value = 0.0;
  std::vector<double> lambda;
  // Separable form: s[j][i]. Standardized form: a single row s[0][i'].
  std::vector<std::vector<double>> s;
  // Set per feature when epsilon_j sits within 1e-9 of the threshold where
  // the optimal lambda_j switches; the reported lambda is then one of several.
  std::vector<bool> degenerate;
};

struct WorstCaseOptions {
  std::size_t max_multi_index = 100000;
  const lp::Solver* solver = nullptr;  // Default backend when null.
};

// sup_{xi in support} a . xi - sum_j lambda_j |xi_j - sample_j|.
double SupAffineMinusL1(const std::vector<double>& a, const std::vector<double>& lambda,
                        const std::vector<double>& sample, const BoxSupport& support);

// Worst case over the multi-source ambiguity set, one epigraph variable per
// multi-index of the product of the per-feature empirical measures.
double WcExpectationGeneral(const PiecewiseMaxAffine& cost, const MultiDataset& data,
                            const BoxSupport& support, const WorstCaseOptions& options = {});

// Linear-size form for costs that are separable across features.
WorstCaseResult WcExpectationSeparable(const SeparableAffineCost& cost,
                                       const MultiDataset& data, const BoxSupport& support,
                                       const WorstCaseOptions& options = {});

// Linear-size form for standardized data sharing the sample index.
WorstCaseResult WcExpectationStandardized(const PiecewiseMaxAffine& cost,
                                          const MultiDataset& data, const BoxSupport& support,
                                          const WorstCaseOptions& options = {});

// Classic Wasserstein DRO with one budget on the joint 1-norm distance around
// the shared-index empirical distribution.
double WcExpectationSingleBudget(const PiecewiseMaxAffine& cost, const MultiDataset& data,
                                 const BoxSupport& support, double epsilon,
                                 const WorstCaseOptions& options = {});

// Average cost over the product of the per-feature empirical measures.
double ProductSampleAverage(const PiecewiseMaxAffine& cost, const MultiDataset& data);

// Average cost over the shared-index empirical distribution.
double SharedSampleAverage(const PiecewiseMaxAffine& cost, const MultiDataset& data);

// max over the box of the cost.
double RobustValue(const PiecewiseMaxAffine& cost, const BoxSupport& support);

// Distance threshold of a single linear feature cost c_j: mean distance from
// the samples to the corner maximizing c_j xi_j.
double WorstCornerDistance(double c, const std::vector<double>& samples, double lower,
                           double upper);

}  // namespace msdro::dro

#endif  // MSDRO_DRO_DRO_H_
