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

#include "lp/highs_backend.h"

#include <dlfcn.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <vector>

#include "common/error.h"

namespace msdro::lp {
namespace {

// Subset of the HiGHS C API. HighsInt is 32 or 64 bit depending on how the
// library was built; index arrays are marshalled through void*.
struct HighsApi {
  void* handle = nullptr;
  std::string path;
  void* (*create)() = nullptr;
  void (*destroy)(void*) = nullptr;
  int (*get_sizeof_highs_int)(const void*) = nullptr;
  void* pass_lp = nullptr;
  void* run = nullptr;
  void* get_model_status = nullptr;
  void* get_solution = nullptr;
  void* set_bool_option = nullptr;
  void* set_string_option = nullptr;
  void* set_double_option = nullptr;
  void* get_simplex_iteration_count = nullptr;
  double (*get_infinity)(const void*) = nullptr;
};

std::string PythonWheelLibrary() {
  FILE* pipe = popen(
      "python3 -c \"import highspy, os; print(os.path.dirname(highspy.__file__))\" "
      "2>/dev/null",
      "r");
  if (pipe == nullptr) return "";
  std::array<char, 4096> buf{};
  std::string out;
  while (fgets(buf.data(), buf.size(), pipe) != nullptr) out += buf.data();
  pclose(pipe);
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  if (out.empty()) return "";
  return out + "/libhighs.so.1";
}

const HighsApi* LoadApi() {
  static std::once_flag once;
  static HighsApi api;
  static bool ok = false;
  std::call_once(once, [] {
    std::vector<std::string> candidates;
    if (const char* env = std::getenv("MSDRO_HIGHS_LIBRARY"); env && *env) {
      candidates.emplace_back(env);
    }
    candidates.emplace_back("libhighs.so");
    candidates.emplace_back("libhighs.so.1");
    if (std::string wheel = PythonWheelLibrary(); !wheel.empty()) {
      candidates.push_back(wheel);
    }
    for (const std::string& path : candidates) {
      void* h = dlopen(path.c_str(), RTLD_NOW | RTLD_LOCAL);
      if (h == nullptr) continue;
      api.handle = h;
      api.path = path;
      api.create = reinterpret_cast<void* (*)()>(dlsym(h, "Highs_create"));
      api.destroy = reinterpret_cast<void (*)(void*)>(dlsym(h, "Highs_destroy"));
      api.get_sizeof_highs_int = reinterpret_cast<int (*)(const void*)>(
          dlsym(h, "Highs_getSizeofHighsInt"));
      api.pass_lp = dlsym(h, "Highs_passLp");
      api.run = dlsym(h, "Highs_run");
      api.get_model_status = dlsym(h, "Highs_getModelStatus");
      api.get_solution = dlsym(h, "Highs_getSolution");
      api.set_bool_option = dlsym(h, "Highs_setBoolOptionValue");
      api.set_string_option = dlsym(h, "Highs_setStringOptionValue");
      api.set_double_option = dlsym(h, "Highs_setDoubleOptionValue");
      api.get_simplex_iteration_count = dlsym(h, "Highs_getSimplexIterationCount");
      api.get_infinity = reinterpret_cast<double (*)(const void*)>(
          dlsym(h, "Highs_getInfinity"));
      ok = api.create && api.destroy && api.get_sizeof_highs_int && api.pass_lp &&
           api.run && api.get_model_status && api.get_solution &&
           api.set_bool_option && api.set_string_option && api.get_infinity;
      if (ok) return;
      dlclose(h);
      api = HighsApi{};
    }
  });
  return ok ? &api : nullptr;
}

// Model status codes of the HiGHS C API.
constexpr int kHighsOptimal = 7;
constexpr int kHighsInfeasible = 8;
constexpr int kHighsUnboundedOrInfeasible = 9;
constexpr int kHighsUnbounded = 10;

template <typename HighsInt>
Solution SolveWith(const HighsApi& api, const Model& model,
                   const SolverOptions& options) {
  using PassLp = HighsInt (*)(void*, HighsInt, HighsInt, HighsInt, HighsInt,
                              HighsInt, double, const double*, const double*,
                              const double*, const double*, const double*,
                              const HighsInt*, const HighsInt*, const double*);
  using Run = HighsInt (*)(void*);
  using GetStatus = HighsInt (*)(const void*);
  using GetSolution = HighsInt (*)(const void*, double*, double*, double*, double*);
  using SetBool = HighsInt (*)(void*, const char*, HighsInt);
  using SetString = HighsInt (*)(void*, const char*, const char*);
  using SetDouble = HighsInt (*)(void*, const char*, double);
  using GetIterations = HighsInt (*)(const void*);

  void* highs = api.create();
  Require(highs != nullptr, ErrorCode::kSolver, "Highs_create failed");
  struct Guard {
    const HighsApi& api;
    void* h;
    ~Guard() { api.destroy(h); }
  } guard{api, highs};

  const double inf = api.get_infinity(highs);
  auto clamp = [inf](double v) {
    if (std::isinf(v)) return v > 0 ? inf : -inf;
    return v;
  };

  const int n = model.num_variables();
  const int m = model.num_constraints();
  std::vector<double> cost(n), lo(n), up(n), rlo(m), rup(m);
  for (int j = 0; j < n; ++j) {
    const Variable& v = model.variables()[j];
    cost[j] = v.cost;
    lo[j] = clamp(v.lower);
    up[j] = clamp(v.upper);
  }
  std::vector<HighsInt> start(m + 1, 0), index;
  std::vector<double> value;
  for (int i = 0; i < m; ++i) {
    const Constraint& row = model.constraints()[i];
    rlo[i] = row.sense == Sense::kLessEqual ? -inf : row.rhs;
    rup[i] = row.sense == Sense::kGreaterEqual ? inf : row.rhs;
    for (const Term& t : row.terms) {
      index.push_back(static_cast<HighsInt>(t.var.index));
      value.push_back(t.coef);
    }
    start[i + 1] = static_cast<HighsInt>(index.size());
  }

  reinterpret_cast<SetBool>(api.set_bool_option)(highs, "output_flag", 0);
  reinterpret_cast<SetString>(api.set_string_option)(highs, "solver", "simplex");
  reinterpret_cast<SetString>(api.set_string_option)(highs, "presolve", "off");
  if (api.set_double_option != nullptr) {
    auto set_double = reinterpret_cast<SetDouble>(api.set_double_option);
    set_double(highs, "primal_feasibility_tolerance", options.primal_tolerance);
    set_double(highs, "dual_feasibility_tolerance", options.dual_tolerance);
  }

  constexpr HighsInt kRowwise = 2;
  constexpr HighsInt kMinimize = 1;
  const HighsInt pass = reinterpret_cast<PassLp>(api.pass_lp)(
      highs, n, m, static_cast<HighsInt>(index.size()), kRowwise, kMinimize,
      model.objective_offset(), cost.data(), lo.data(), up.data(), rlo.data(),
      rup.data(), start.data(), index.empty() ? nullptr : index.data(),
      value.empty() ? nullptr : value.data());
  Solution sol;
  sol.backend = "highs";
  if (pass < 0) {
    sol.status = SolveStatus::kError;
    sol.message = "Highs_passLp rejected the model";
    return sol;
  }
  reinterpret_cast<Run>(api.run)(highs);
  const HighsInt status = reinterpret_cast<GetStatus>(api.get_model_status)(highs);
  if (api.get_simplex_iteration_count != nullptr) {
    sol.iterations = static_cast<int>(
        reinterpret_cast<GetIterations>(api.get_simplex_iteration_count)(highs));
  }
  if (status == kHighsInfeasible) {
    sol.status = SolveStatus::kInfeasible;
    return sol;
  }
  if (status == kHighsUnbounded || status == kHighsUnboundedOrInfeasible) {
    sol.status = SolveStatus::kUnbounded;
    return sol;
  }
  if (status != kHighsOptimal) {
    sol.status = SolveStatus::kError;
    sol.message = "HiGHS model status " + std::to_string(status);
    return sol;
  }
  sol.status = SolveStatus::kOptimal;
  sol.x.resize(n);
  sol.reduced_cost.resize(n);
  sol.row_activity.resize(m);
  sol.row_dual.resize(m);
  reinterpret_cast<GetSolution>(api.get_solution)(
      highs, sol.x.data(), sol.reduced_cost.data(), sol.row_activity.data(),
      sol.row_dual.data());
  double obj = model.objective_offset();
  for (int j = 0; j < n; ++j) obj += cost[j] * sol.x[j];
  sol.objective = obj;
  return sol;
}

}  // namespace

bool HighsAvailable() { return LoadApi() != nullptr; }

std::string HighsLibraryPath() {
  const HighsApi* api = LoadApi();
  return api ? api->path : std::string();
}

HighsSolver::HighsSolver(SolverOptions options) : options_(options) {}

Solution HighsSolver::Solve(const Model& model) const {
  const HighsApi* api = LoadApi();
  Require(api != nullptr, ErrorCode::kUnsupported,
          "HiGHS backend requested but libhighs could not be loaded");
  void* probe = api->create();
  const int width = api->get_sizeof_highs_int(probe);
  api->destroy(probe);
  if (width == 8) return SolveWith<std::int64_t>(*api, model, options_);
  return SolveWith<std::int32_t>(*api, model, options_);
}

}  // namespace msdro::lp
