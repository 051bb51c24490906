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

// Optional LP backend that drives a HiGHS shared library through its C API.
//
// Nothing is linked at build time: the library is opened with dlopen on first
// use. The search order is $MSDRO_HIGHS_LIBRARY, then "libhighs.so" and
// "libhighs.so.1" on the default loader path, then the copy bundled with the
// `highspy` Python wheel if python3 can locate it.

#ifndef MSDRO_LP_HIGHS_BACKEND_H_
#define MSDRO_LP_HIGHS_BACKEND_H_

#include <string>
#include <string_view>

#include "lp/solver.h"

namespace msdro::lp {

// True if a usable libhighs could be loaded. Never throws.
bool HighsAvailable();

// Path of the loaded library, empty if unavailable.
std::string HighsLibraryPath();

class HighsSolver : public Solver {
 public:
  explicit HighsSolver(SolverOptions options = {});

  std::string_view name() const override { return "highs"; }
  Solution Solve(const Model& model) const override;

 private:
  SolverOptions options_;
};

}  // namespace msdro::lp

#endif  // MSDRO_LP_HIGHS_BACKEND_H_
