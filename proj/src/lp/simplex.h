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

// Built-in LP backend: bounded revised primal simplex.
//
// Every row gets a logical variable (a_i'x - r_i = 0, r_i within the row
// bounds) so the all-logical basis is always a valid start. Phase 1 minimizes
// the sum of bound infeasibilities of the basic variables; phase 2 the true
// objective. The basis is held as a sparse LU factorization with product-form
// eta updates between refactorizations. The ratio test is a two-pass Harris
// test; long runs of degenerate pivots switch pricing to Bland's rule until
// the objective moves again. The final basis is a vertex, so duals are basic
// dual solutions rather than interior-point averages.

#ifndef MSDRO_LP_SIMPLEX_H_
#define MSDRO_LP_SIMPLEX_H_

#include <string_view>

#include "lp/solver.h"

namespace msdro::lp {

class SimplexSolver : public Solver {
 public:
  explicit SimplexSolver(SolverOptions options = {}) : options_(options) {}

  std::string_view name() const override { return "simplex"; }
  Solution Solve(const Model& model) const override;

 private:
  SolverOptions options_;
};

}  // namespace msdro::lp

#endif  // MSDRO_LP_SIMPLEX_H_
