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

#ifndef MSDRO_OPF_OPF_H_
#define MSDRO_OPF_OPF_H_

#include <string>
#include <vector>

#include "dro/dro.h"
#include "lp/model.h"
#include "lp/solver.h"
#include "opf/network.h"

namespace msdro::opf {

using Matrix = std::vector<std::vector<double>>;
using Tensor = std::vector<std::vector<std::vector<double>>>;

// One row a_k . xi + b_k <= 0 of the joint chance constraint.
enum class RowKind { kReserveUp, kReserveDown, kRamUp, kRamDown, kZero };

struct CvarRow {
  RowKind kind = RowKind::kZero;
  int index = -1;  // Generator or line; -1 for the zero row.
};

struct OpfOptions {
  double gamma = 0.05;
  // Generators whose reserve rows are taken out of the CVaR block, with
  // r+ = r- = 0 and alpha = 0 enforced directly.
  std::vector<int> fixed_generators;
};

struct OpfDecision {
  std::vector<double> p;
  Matrix alpha;  // G x D.
  std::vector<double> r_plus, r_minus;
  std::vector<double> f_ram_plus, f_ram_minus;
};

// Multipliers of the named constraint families. Equality and <= row duals
// are reported as derivatives of the optimal cost w.r.t. the right-hand side
// as written; the >= epigraph duals and phi, sigma are non-negative.
struct OpfDuals {
  double pi = 0.0;
  std::vector<double> chi;                   // D
  std::vector<double> sigma_up, sigma_lo;    // G
  std::vector<double> beta_up, beta_lo;      // L
  double phi = 0.0;
  double tau_nu = 0.0;
  Matrix eta;                                // N' x (K+1)
  Matrix mu_up, mu_lo, mu_av;                // D x N'
  Tensor rho_up, rho_lo, rho_av;             // D x N' x (K+1)
};

struct SolutionWithDuals {
  lp::SolveStatus status = lp::SolveStatus::kError;
  std::string message;
  std::vector<std::string> conflict;  // Named rows when infeasible.
  double objective = 0.0;
  double dual_objective = 0.0;
  double energy_cost = 0.0;
  double reserve_cost = 0.0;
  double activation_cost = 0.0;  // Worst-case expected activation cost.
  OpfDecision decision;
  std::vector<double> lambda_co, lambda_cc;
  double tau = 0.0;
  double nu = 0.0;
  Matrix s_co;   // D x N'
  std::vector<double> s_cc;  // N'
  Tensor s_aux;  // D x N' x (K+1)
  OpfDuals duals;
  std::vector<CvarRow> rows;  // K+1 rows, the last one the zero row.
  Matrix a_prime;             // (K+1) x D at the optimum.
  std::vector<double> b_prime;
  std::vector<int> fixed_generators;
  double gamma = 0.0;
  int iterations = 0;
  std::string backend;

  bool optimal() const { return status == lp::SolveStatus::kOptimal; }
  int num_cvar_rows() const { return static_cast<int>(rows.size()) - 1; }  // K
};

class OpfModel {
 public:
  const lp::Model& lp() const { return lp_; }
  lp::Model& mutable_lp() { return lp_; }
  const Network& network() const { return network_; }
  const dro::MultiDataset& data() const { return data_; }
  const dro::BoxSupport& support() const { return support_; }
  const OpfOptions& options() const { return options_; }
  const std::vector<CvarRow>& rows() const { return rows_; }
  int samples() const { return samples_; }

 private:
  friend OpfModel BuildMsdroOpf(const Network&, const dro::MultiDataset&, const OpfOptions&);
  friend SolutionWithDuals SolveOpf(const OpfModel&, const lp::Solver*);

  lp::Model lp_;
  Network network_;
  dro::MultiDataset data_;
  dro::BoxSupport support_;
  OpfOptions options_;
  std::vector<CvarRow> rows_;
  int samples_ = 0;

  std::vector<lp::VarId> p_, r_plus_, r_minus_, f_plus_, f_minus_;
  std::vector<std::vector<lp::VarId>> alpha_;  // G x D
  std::vector<lp::VarId> lambda_co_, lambda_cc_, s_cc_;
  std::vector<std::vector<lp::VarId>> s_co_;            // D x N'
  std::vector<std::vector<std::vector<lp::VarId>>> s_aux_;  // D x N' x (K+1)
  lp::VarId tau_, nu_;

  lp::RowId balance_, tau_nu_, budget_;
  std::vector<lp::RowId> participation_, gen_up_, gen_lo_, line_up_, line_lo_;
  std::vector<std::vector<lp::RowId>> co_up_, co_lo_, co_av_;  // D x N'
  std::vector<std::vector<lp::RowId>> eta_;                    // N' x (K+1)
  std::vector<std::vector<std::vector<lp::RowId>>> rho_up_, rho_lo_, rho_av_;
};

// Builds the complete DRO OPF linear program.
OpfModel BuildMsdroOpf(const Network& network, const dro::MultiDataset& data,
                       const OpfOptions& options = {});

// Solves and extracts primal values and named duals. Uses the default backend
// when `solver` is null. Non-optimal statuses are reported, not thrown.
SolutionWithDuals SolveOpf(const OpfModel& model, const lp::Solver* solver = nullptr);

// Re-solves with idle balancing generators (alpha_gj = 0 for all j) taken out
// of the CVaR block. Returns `first` unchanged when there are none.
SolutionWithDuals CvarTighteningRerun(const Network& network, const dro::MultiDataset& data,
                                      double gamma, const SolutionWithDuals& first,
                                      const lp::Solver* solver = nullptr);

// Idle generators of a solution, with tolerance 1e-9 on alpha.
std::vector<int> IdleGenerators(const SolutionWithDuals& solution);

// a_k and b_k of every CVaR row for a fixed decision.
void EvaluateCvarRows(const Network& network, const OpfDecision& decision,
                      const std::vector<CvarRow>& rows, Matrix& a, std::vector<double>& b);

// Rows of the joint chance constraint with the given generators left out.
std::vector<CvarRow> MakeCvarRows(const Network& network, const std::vector<int>& fixed);

const char* RowKindName(RowKind kind);

}  // namespace msdro::opf

#endif  // MSDRO_OPF_OPF_H_
