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

#include "lp/solver.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "common/error.h"
#include "lp/highs_backend.h"
#include "lp/simplex.h"

namespace msdro::lp {

const char* SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kError: return "error";
  }
  return "unknown";
}

std::unique_ptr<Solver> MakeSolver(std::string_view backend,
                                   const SolverOptions& options) {
  if (backend.empty() || backend == "auto") {
    if (HighsAvailable()) return std::make_unique<HighsSolver>(options);
    return std::make_unique<SimplexSolver>(options);
  }
  if (backend == "simplex") return std::make_unique<SimplexSolver>(options);
  if (backend == "highs") return std::make_unique<HighsSolver>(options);
  Fail(ErrorCode::kUnsupported, "unknown LP backend '" + std::string(backend) + "'");
}

std::unique_ptr<Solver> MakeDefaultSolver(const SolverOptions& options) {
  const char* env = std::getenv("MSDRO_SOLVER");
  return MakeSolver(env ? std::string_view(env) : std::string_view(), options);
}

double MaxPrimalViolation(const Model& model, const std::vector<double>& x) {
  double worst = 0.0;
  for (int j = 0; j < model.num_variables(); ++j) {
    const Variable& v = model.variables()[j];
    worst = std::max({worst, v.lower - x[j], x[j] - v.upper});
  }
  for (const Constraint& row : model.constraints()) {
    double s = 0.0;
    for (const Term& t : row.terms) s += t.coef * x[t.var.index];
    switch (row.sense) {
      case Sense::kLessEqual: worst = std::max(worst, s - row.rhs); break;
      case Sense::kGreaterEqual: worst = std::max(worst, row.rhs - s); break;
      case Sense::kEqual: worst = std::max(worst, std::abs(s - row.rhs)); break;
    }
  }
  return worst;
}

double DualObjective(const Model& model, const Solution& solution) {
  const int n = model.num_variables();
  std::vector<double> d(n);
  for (int j = 0; j < n; ++j) d[j] = model.variables()[j].cost;
  double value = model.objective_offset();
  for (int i = 0; i < model.num_constraints(); ++i) {
    const Constraint& row = model.constraints()[i];
    const double y = solution.row_dual[i];
    value += y * row.rhs;
    for (const Term& t : row.terms) d[t.var.index] -= y * t.coef;
  }
  for (int j = 0; j < n; ++j) {
    const Variable& v = model.variables()[j];
    // Round-off sized reduced costs of basic variables are ignored; a genuine
    // reduced cost pointing at an infinite bound means the duals are not
    // feasible and the dual objective is -inf.
    if (std::abs(d[j]) <= 1e-9 * (1.0 + std::abs(v.cost))) continue;
    const double bound = d[j] > 0 ? v.lower : v.upper;
    if (std::isinf(bound)) return -kInf;
    value += d[j] * bound;
  }
  return value;
}

}  // namespace msdro::lp
