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

#include "dro/dro.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "common/error.h"
#include "lp/model.h"

namespace msdro::dro {
namespace {

constexpr double kDegenerateBand = 1e-9;

std::string Idx(int a) { return std::to_string(a); }

lp::Solution SolveOrThrow(const lp::Model& model, const WorstCaseOptions& options) {
  std::unique_ptr<lp::Solver> owned;
  const lp::Solver* solver = options.solver;
  if (!solver) {
    owned = lp::MakeDefaultSolver();
    solver = owned.get();
  }
  lp::Solution sol = solver->Solve(model);
  switch (sol.status) {
    case lp::SolveStatus::kOptimal: return sol;
    case lp::SolveStatus::kInfeasible: Fail(ErrorCode::kInfeasible, "worst-case LP infeasible");
    case lp::SolveStatus::kUnbounded: Fail(ErrorCode::kUnbounded, "worst-case LP unbounded");
    case lp::SolveStatus::kError: break;
  }
  Fail(ErrorCode::kSolver, "worst-case LP failed: " + sol.message);
}

void CheckCommon(const PiecewiseMaxAffine& cost, const MultiDataset& data,
                 const BoxSupport& support) {
  support.Validate();
  Require(data.dimension() == support.dimension(), ErrorCode::kInput,
          "dataset and support dimensions differ");
  cost.Validate(support.dimension());
  data.Validate(&support);
}

// Adds t >= sup_{xi_j} a_j xi_j - lambda_j |xi_j - sample_j| as three cuts and
// returns t.
lp::VarId AddInnerSup(lp::Model& model, const std::string& tag, double a, lp::VarId lambda,
                      double sample, double lo, double up) {
  lp::VarId t = model.AddVariable("t_" + tag, -lp::kInf, lp::kInf, 0.0);
  model.AddConstraint("up_" + tag, lp::LinearExpr(t) + lp::LinearExpr(lambda, up - sample),
                      lp::Sense::kGreaterEqual, a * up);
  model.AddConstraint("lo_" + tag, lp::LinearExpr(t) + lp::LinearExpr(lambda, sample - lo),
                      lp::Sense::kGreaterEqual, a * lo);
  model.AddConstraint("av_" + tag, lp::LinearExpr(t), lp::Sense::kGreaterEqual, a * sample);
  return t;
}

// Epigraph LP around an arbitrary discrete reference measure: one s per
// reference point, one inner supremum per (point, piece, feature).
struct ReferenceLp {
  double value = 0.0;
  std::vector<double> lambda;
  std::vector<double> s;
};

ReferenceLp SolveReferenceLp(const PiecewiseMaxAffine& cost,
                             const std::vector<std::vector<double>>& ref, double weight,
                             const BoxSupport& support, const std::vector<double>& eps,
                             bool shared_lambda, const WorstCaseOptions& options) {
  const int d = support.dimension();
  lp::Model model;
  std::vector<lp::VarId> lambda(d);
  if (shared_lambda) {
    double total = 0.0;
    for (double e : eps) total += e;
    lp::VarId l = model.AddVariable("lambda", 0.0, lp::kInf, total);
    lambda.assign(d, l);
  } else {
    for (int j = 0; j < d; ++j) {
      lambda[j] = model.AddVariable("lambda_" + Idx(j), 0.0, lp::kInf, eps[j]);
    }
  }
  std::vector<lp::VarId> s(ref.size());
  for (std::size_t r = 0; r < ref.size(); ++r) {
    s[r] = model.AddVariable("s_" + Idx(r), -lp::kInf, lp::kInf, weight);
    for (std::size_t k = 0; k < cost.pieces.size(); ++k) {
      const AffinePiece& piece = cost.pieces[k];
      lp::LinearExpr row(s[r]);
      for (int j = 0; j < d; ++j) {
        // A zero coefficient contributes sup -lambda|.| = 0.
        if (piece.a[j] == 0.0) continue;
        const std::string tag = Idx(r) + "_" + Idx(k) + "_" + Idx(j);
        row -= lp::LinearExpr(AddInnerSup(model, tag, piece.a[j], lambda[j], ref[r][j],
                                          support.lower[j], support.upper[j]));
      }
      model.AddConstraint("epi_" + Idx(r) + "_" + Idx(k), row, lp::Sense::kGreaterEqual,
                          piece.b);
    }
  }
  const lp::Solution sol = SolveOrThrow(model, options);
  ReferenceLp out;
  out.value = sol.objective;
  for (int j = 0; j < d; ++j) out.lambda.push_back(sol.value(lambda[j]));
  for (lp::VarId v : s) out.s.push_back(sol.value(v));
  return out;
}

std::vector<std::vector<double>> SharedIndexPoints(const MultiDataset& data) {
  const int n = data.shared_count();
  std::vector<std::vector<double>> ref(n, std::vector<double>(data.dimension()));
  for (int j = 0; j < data.dimension(); ++j) {
    for (int i = 0; i < n; ++i) ref[i][j] = data.samples[j][i];
  }
  return ref;
}

// Calls visit(point) for every element of the product of the samples.
template <typename Visit>
void ForEachMultiIndex(const MultiDataset& data, Visit visit) {
  const int d = data.dimension();
  std::vector<int> idx(d, 0);
  std::vector<double> point(d);
  while (true) {
    for (int j = 0; j < d; ++j) point[j] = data.samples[j][idx[j]];
    visit(point);
    int j = d - 1;
    while (j >= 0 && ++idx[j] == static_cast<int>(data.samples[j].size())) {
      idx[j] = 0;
      --j;
    }
    if (j < 0) return;
  }
}

std::size_t MultiIndexCount(const MultiDataset& data, std::size_t cap) {
  std::size_t count = 1;
  for (const auto& f : data.samples) {
    if (count > cap / std::max<std::size_t>(f.size(), 1)) return cap + 1;
    count *= f.size();
  }
  return count;
}

}  // namespace

void BoxSupport::Validate() const {
  Require(lower.size() == upper.size(), ErrorCode::kInput, "support bound sizes differ");
  for (std::size_t j = 0; j < lower.size(); ++j) {
    Require(std::isfinite(lower[j]) && std::isfinite(upper[j]), ErrorCode::kInput,
            "support bounds must be finite");
    Require(lower[j] <= 0.0 && upper[j] >= 0.0, ErrorCode::kInput,
            "support of feature " + Idx(static_cast<int>(j)) + " must contain zero");
  }
}

bool BoxSupport::Contains(int j, double value, double tol) const {
  return value >= lower[j] - tol && value <= upper[j] + tol;
}

void PiecewiseMaxAffine::Validate(int dimension) const {
  Require(!pieces.empty(), ErrorCode::kInput, "cost needs at least one piece");
  for (const AffinePiece& p : pieces) {
    Require(static_cast<int>(p.a.size()) == dimension, ErrorCode::kInput,
            "cost piece has wrong dimension");
    for (double v : p.a) Require(std::isfinite(v), ErrorCode::kInput, "non-finite cost");
    Require(std::isfinite(p.b), ErrorCode::kInput, "non-finite cost");
  }
}

double PiecewiseMaxAffine::Evaluate(const std::vector<double>& xi) const {
  double best = -lp::kInf;
  for (const AffinePiece& p : pieces) {
    double v = p.b;
    for (std::size_t j = 0; j < xi.size(); ++j) v += p.a[j] * xi[j];
    best = std::max(best, v);
  }
  return best;
}

bool MultiDataset::standardized() const {
  if (samples.empty()) return true;
  for (const auto& f : samples) {
    if (f.size() != samples[0].size()) return false;
  }
  return true;
}

int MultiDataset::shared_count() const {
  Require(standardized(), ErrorCode::kMode, "datasets do not share a sample index");
  return samples.empty() ? 0 : static_cast<int>(samples[0].size());
}

void MultiDataset::Validate(const BoxSupport* support) const {
  Require(epsilon.size() == samples.size(), ErrorCode::kInput,
          "one epsilon is required per feature");
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const std::string name = "feature " + Idx(static_cast<int>(j));
    Require(std::isfinite(epsilon[j]) && epsilon[j] >= 0.0, ErrorCode::kInput,
            name + " has a negative or non-finite epsilon");
    Require(!samples[j].empty(), ErrorCode::kInput, name + " has no samples");
    for (double v : samples[j]) {
      Require(std::isfinite(v), ErrorCode::kInput, name + " has a non-finite sample");
      if (support) {
        Require(support->Contains(static_cast<int>(j), v), ErrorCode::kInput,
                name + " has a sample outside the support");
      }
    }
  }
}

double SupAffineMinusL1(const std::vector<double>& a, const std::vector<double>& lambda,
                        const std::vector<double>& sample, const BoxSupport& support) {
  const std::size_t d = support.lower.size();
  Require(a.size() == d && lambda.size() == d && sample.size() == d, ErrorCode::kInput,
          "vector lengths differ from the support dimension");
  double total = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    Require(lambda[j] >= 0.0, ErrorCode::kInput, "lambda must be non-negative");
    Require(support.Contains(static_cast<int>(j), sample[j]), ErrorCode::kInput,
            "sample lies outside the support");
    const double lo = support.lower[j];
    const double up = support.upper[j];
    total += std::max({a[j] * up - lambda[j] * (up - sample[j]),
                       a[j] * lo + lambda[j] * (lo - sample[j]), a[j] * sample[j]});
  }
  return total;
}

double WcExpectationGeneral(const PiecewiseMaxAffine& cost, const MultiDataset& data,
                            const BoxSupport& support, const WorstCaseOptions& options) {
  CheckCommon(cost, data, support);
  const std::size_t count = MultiIndexCount(data, options.max_multi_index);
  Require(count <= options.max_multi_index, ErrorCode::kSize,
          "product of sample counts exceeds " + std::to_string(options.max_multi_index) +
              "; use the separable or standardized form");
  std::vector<std::vector<double>> ref;
  ref.reserve(count);
  ForEachMultiIndex(data, [&](const std::vector<double>& p) { ref.push_back(p); });
  return SolveReferenceLp(cost, ref, 1.0 / static_cast<double>(count), support, data.epsilon,
                          false, options)
      .value;
}

WorstCaseResult WcExpectationSeparable(const SeparableAffineCost& cost,
                                       const MultiDataset& data, const BoxSupport& support,
                                       const WorstCaseOptions& options) {
  support.Validate();
  const int d = support.dimension();
  Require(data.dimension() == d && static_cast<int>(cost.c.size()) == d, ErrorCode::kInput,
          "cost, dataset and support dimensions differ");
  data.Validate(&support);
  lp::Model model;
  std::vector<lp::VarId> lambda(d);
  std::vector<std::vector<lp::VarId>> s(d);
  for (int j = 0; j < d; ++j) {
    lambda[j] = model.AddVariable("lambda_" + Idx(j), 0.0, lp::kInf, data.epsilon[j]);
    const auto& xs = data.samples[j];
    const double w = 1.0 / static_cast<double>(xs.size());
    const double lo = support.lower[j];
    const double up = support.upper[j];
    const double c = cost.c[j];
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const std::string tag = Idx(j) + "_" + Idx(static_cast<int>(i));
      lp::VarId v = model.AddVariable("s_" + tag, -lp::kInf, lp::kInf, w);
      s[j].push_back(v);
      model.AddConstraint("up_" + tag, lp::LinearExpr(v) + lp::LinearExpr(lambda[j], up - xs[i]),
                          lp::Sense::kGreaterEqual, c * up);
      model.AddConstraint("lo_" + tag, lp::LinearExpr(v) + lp::LinearExpr(lambda[j], xs[i] - lo),
                          lp::Sense::kGreaterEqual, c * lo);
      model.AddConstraint("av_" + tag, lp::LinearExpr(v), lp::Sense::kGreaterEqual, c * xs[i]);
    }
  }
  const lp::Solution sol = SolveOrThrow(model, options);
  WorstCaseResult out;
  out.value = sol.objective;
  out.s.resize(d);
  for (int j = 0; j < d; ++j) {
    out.lambda.push_back(sol.value(lambda[j]));
    for (lp::VarId v : s[j]) out.s[j].push_back(sol.value(v));
    const double threshold = WorstCornerDistance(cost.c[j], data.samples[j], support.lower[j],
                                                 support.upper[j]);
    out.degenerate.push_back(cost.c[j] != 0.0 &&
                             std::abs(data.epsilon[j] - threshold) < kDegenerateBand);
  }
  return out;
}

WorstCaseResult WcExpectationStandardized(const PiecewiseMaxAffine& cost,
                                          const MultiDataset& data, const BoxSupport& support,
                                          const WorstCaseOptions& options) {
  Require(data.standardized(), ErrorCode::kMode,
          "standardized form needs equal sample counts with a shared index");
  CheckCommon(cost, data, support);
  const int n = data.shared_count();
  const ReferenceLp lp = SolveReferenceLp(cost, SharedIndexPoints(data), 1.0 / n, support,
                                          data.epsilon, false, options);
  WorstCaseResult out;
  out.value = lp.value;
  out.lambda = lp.lambda;
  out.s = {lp.s};
  for (int j = 0; j < data.dimension(); ++j) {
    bool flag = false;
    if (cost.pieces.size() == 1) {
      const double c = cost.pieces[0].a[j];
      const double threshold =
          WorstCornerDistance(c, data.samples[j], support.lower[j], support.upper[j]);
      flag = c != 0.0 && std::abs(data.epsilon[j] - threshold) < kDegenerateBand;
    }
    out.degenerate.push_back(flag);
  }
  return out;
}

double WcExpectationSingleBudget(const PiecewiseMaxAffine& cost, const MultiDataset& data,
                                 const BoxSupport& support, double epsilon,
                                 const WorstCaseOptions& options) {
  Require(data.standardized(), ErrorCode::kMode,
          "single-budget comparator needs a shared sample index");
  Require(epsilon >= 0.0 && std::isfinite(epsilon), ErrorCode::kInput,
          "epsilon must be non-negative");
  CheckCommon(cost, data, support);
  // One multiplier for the joint budget: same LP with all lambda_j tied.
  std::vector<double> eps(data.dimension(), 0.0);
  if (!eps.empty()) eps[0] = epsilon;
  return SolveReferenceLp(cost, SharedIndexPoints(data), 1.0 / data.shared_count(), support,
                          eps, true, options)
      .value;
}

double ProductSampleAverage(const PiecewiseMaxAffine& cost, const MultiDataset& data) {
  double total = 0.0;
  double count = 0.0;
  ForEachMultiIndex(data, [&](const std::vector<double>& p) {
    total += cost.Evaluate(p);
    count += 1.0;
  });
  return total / count;
}

double SharedSampleAverage(const PiecewiseMaxAffine& cost, const MultiDataset& data) {
  const auto ref = SharedIndexPoints(data);
  double total = 0.0;
  for (const auto& p : ref) total += cost.Evaluate(p);
  return total / static_cast<double>(ref.size());
}

double RobustValue(const PiecewiseMaxAffine& cost, const BoxSupport& support) {
  double best = -lp::kInf;
  for (const AffinePiece& p : cost.pieces) {
    double v = p.b;
    for (int j = 0; j < support.dimension(); ++j) {
      v += std::max(p.a[j] * support.lower[j], p.a[j] * support.upper[j]);
    }
    best = std::max(best, v);
  }
  return best;
}

double WorstCornerDistance(double c, const std::vector<double>& samples, double lower,
                           double upper) {
  if (c == 0.0 || samples.empty()) return 0.0;
  double total = 0.0;
  for (double x : samples) total += c < 0 ? x - lower : upper - x;
  return total / static_cast<double>(samples.size());
}

}  // namespace msdro::dro
