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

#ifndef MSDRO_LP_SOLVER_H_
#define MSDRO_LP_SOLVER_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lp/model.h"

namespace msdro::lp {

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kError };

const char* SolveStatusName(SolveStatus status);

// Primal and dual values of a solved Model.
//
// Dual convention, independent of the backend: row_dual[i] is the derivative
// of the optimal objective with respect to rhs_i. For a minimization this
// makes duals of binding `<=` rows non-positive and duals of binding `>=` rows
// non-negative. reduced_cost[j] is the derivative with respect to the active
// bound of variable j.
struct Solution {
  SolveStatus status = SolveStatus::kError;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> reduced_cost;
  std::vector<double> row_dual;
  std::vector<double> row_activity;
  int iterations = 0;
  std::string backend;
  std::string message;

  bool optimal() const { return status == SolveStatus::kOptimal; }
  double value(VarId var) const { return x.at(var.index); }
  double dual(RowId row) const { return row_dual.at(row.index); }
};

struct SolverOptions {
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
  int max_iterations = 200000;
};

class Solver {
 public:
  virtual ~Solver() = default;
  virtual std::string_view name() const = 0;
  virtual Solution Solve(const Model& model) const = 0;
};

// Backends: "simplex" (built in), "highs" (libhighs loaded at run time; see
// highs_backend.h) and "auto" (highs when it loads, simplex otherwise). An
// empty name means "auto". Unknown names raise ErrorCode::kUnsupported.
std::unique_ptr<Solver> MakeSolver(std::string_view backend,
                                   const SolverOptions& options = {});

// Backend named by the MSDRO_SOLVER environment variable, "auto" if unset.
std::unique_ptr<Solver> MakeDefaultSolver(const SolverOptions& options = {});

// Largest violation of any constraint or bound by `x`.
double MaxPrimalViolation(const Model& model, const std::vector<double>& x);

// Dual objective sum_i rhs_i*y_i + bound contributions of the reduced costs,
// plus the offset. Equals the primal objective at an optimal pair.
double DualObjective(const Model& model, const Solution& solution);

}  // namespace msdro::lp

#endif  // MSDRO_LP_SOLVER_H_
