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

#include "lp/simplex.h"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "common/error.h"

namespace msdro::lp {
namespace {

enum class VarStatus : unsigned char { kBasic, kAtLower, kAtUpper, kFree };

// Rounds a positive scale factor to the nearest power of two so that scaling
// is exact in floating point.
double PowerOfTwo(double s) { return std::exp2(std::round(std::log2(s))); }

struct Eta {
  int pivot_row = 0;
  double pivot = 1.0;
  std::vector<std::pair<int, double>> entries;  // excludes the pivot row
};

class Engine {
 public:
  Engine(const Model& model, const SolverOptions& options);
  Solution Run();

 private:
  using SpMat = Eigen::SparseMatrix<double>;
  using Vec = Eigen::VectorXd;

  void BuildScaledMatrix(const Model& model);
  void InitialBasis();
  bool Refactor();
  void ComputeBasicValues();
  void PerturbBasicBounds();
  void RestoreBounds();
  void Ftran(Vec& v) const;
  void Btran(Vec& v) const;
  double ColumnDot(int j, const Vec& y) const;
  void LoadColumn(int j, Vec& v) const;
  Solution Finish(SolveStatus status, const std::string& message);

  const Model& model_;
  SolverOptions opt_;
  int m_ = 0;
  int n_ = 0;

  // Scaled structural columns in CSC form.
  std::vector<int> col_start_;
  std::vector<int> row_index_;
  std::vector<double> value_;
  std::vector<double> row_scale_;
  std::vector<double> col_scale_;

  // Per variable (structural then logical), scaled.
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> cost_;
  std::vector<double> x_;
  // Unperturbed bounds while a perturbation is active.
  std::vector<double> true_lower_, true_upper_;
  bool perturbed_ = false;
  int perturbations_ = 0;
  std::vector<VarStatus> status_;

  std::vector<int> basis_;  // basic variable in each basis position
  // transpose() is non-const in Eigen 3.4.
  mutable Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;

  std::vector<int> good_basis_;
  std::vector<VarStatus> good_status_;

  int iterations_ = 0;
};

Engine::Engine(const Model& model, const SolverOptions& options)
    : model_(model), opt_(options) {
  m_ = model.num_constraints();
  n_ = model.num_variables();
  BuildScaledMatrix(model);
}

void Engine::BuildScaledMatrix(const Model& model) {
  // Column-wise copy of the constraint matrix.
  std::vector<int> count(n_ + 1, 0);
  for (const Constraint& row : model.constraints()) {
    for (const Term& t : row.terms) ++count[t.var.index + 1];
  }
  col_start_.assign(n_ + 1, 0);
  for (int j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + count[j + 1];
  row_index_.assign(col_start_[n_], 0);
  value_.assign(col_start_[n_], 0.0);
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (int i = 0; i < m_; ++i) {
    for (const Term& t : model.constraints()[i].terms) {
      const int pos = fill[t.var.index]++;
      row_index_[pos] = i;
      value_[pos] = t.coef;
    }
  }

  // Geometric-mean equilibration.
  row_scale_.assign(m_, 1.0);
  col_scale_.assign(n_, 1.0);
  for (int pass = 0; pass < 6; ++pass) {
    std::vector<double> rmin(m_, kInf), rmax(m_, 0.0);
    for (int j = 0; j < n_; ++j) {
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
        const double a = std::abs(value_[p]) * col_scale_[j];
        const int i = row_index_[p];
        rmin[i] = std::min(rmin[i], a);
        rmax[i] = std::max(rmax[i], a);
      }
    }
    for (int i = 0; i < m_; ++i) {
      if (rmax[i] > 0) row_scale_[i] = PowerOfTwo(1.0 / std::sqrt(rmin[i] * rmax[i]));
    }
    for (int j = 0; j < n_; ++j) {
      double cmin = kInf, cmax = 0.0;
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
        const double a = std::abs(value_[p]) * row_scale_[row_index_[p]];
        cmin = std::min(cmin, a);
        cmax = std::max(cmax, a);
      }
      if (cmax > 0) col_scale_[j] = PowerOfTwo(1.0 / std::sqrt(cmin * cmax));
    }
  }
  for (int j = 0; j < n_; ++j) {
    for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
      value_[p] *= row_scale_[row_index_[p]] * col_scale_[j];
    }
  }

  const int total = n_ + m_;
  lower_.assign(total, 0.0);
  upper_.assign(total, 0.0);
  cost_.assign(total, 0.0);
  for (int j = 0; j < n_; ++j) {
    const Variable& v = model.variables()[j];
    lower_[j] = v.lower / col_scale_[j];
    upper_[j] = v.upper / col_scale_[j];
    cost_[j] = v.cost * col_scale_[j];
  }
  for (int i = 0; i < m_; ++i) {
    const Constraint& row = model.constraints()[i];
    const double rhs = row.rhs * row_scale_[i];
    switch (row.sense) {
      case Sense::kLessEqual:
        lower_[n_ + i] = -kInf;
        upper_[n_ + i] = rhs;
        break;
      case Sense::kGreaterEqual:
        lower_[n_ + i] = rhs;
        upper_[n_ + i] = kInf;
        break;
      case Sense::kEqual:
        lower_[n_ + i] = rhs;
        upper_[n_ + i] = rhs;
        break;
    }
  }
}

void Engine::InitialBasis() {
  const int total = n_ + m_;
  x_.assign(total, 0.0);
  status_.assign(total, VarStatus::kFree);
  for (int j = 0; j < n_; ++j) {
    if (std::isfinite(lower_[j])) {
      status_[j] = VarStatus::kAtLower;
      x_[j] = lower_[j];
    } else if (std::isfinite(upper_[j])) {
      status_[j] = VarStatus::kAtUpper;
      x_[j] = upper_[j];
    } else {
      status_[j] = VarStatus::kFree;
      x_[j] = 0.0;
    }
  }
  basis_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    basis_[i] = n_ + i;
    status_[n_ + i] = VarStatus::kBasic;
  }
}

void Engine::LoadColumn(int j, Vec& v) const {
  v.setZero();
  if (j < n_) {
    for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
      v[row_index_[p]] = value_[p];
    }
  } else {
    v[j - n_] = -1.0;
  }
}

double Engine::ColumnDot(int j, const Vec& y) const {
  if (j >= n_) return -y[j - n_];
  double s = 0.0;
  for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
    s += value_[p] * y[row_index_[p]];
  }
  return s;
}

bool Engine::Refactor() {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(m_ * 3);
  for (int pos = 0; pos < m_; ++pos) {
    const int j = basis_[pos];
    if (j >= n_) {
      trip.emplace_back(j - n_, pos, -1.0);
    } else {
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
        trip.emplace_back(row_index_[p], pos, value_[p]);
      }
    }
  }
  SpMat basis(m_, m_);
  basis.setFromTriplets(trip.begin(), trip.end());
  basis.makeCompressed();
  lu_.analyzePattern(basis);
  lu_.factorize(basis);
  etas_.clear();
  if (lu_.info() != Eigen::Success) return false;
  good_basis_ = basis_;
  good_status_ = status_;
  return true;
}

void Engine::Ftran(Vec& v) const {
  v = lu_.solve(v).eval();
  for (const Eta& eta : etas_) {
    const double xr = v[eta.pivot_row] / eta.pivot;
    v[eta.pivot_row] = xr;
    if (xr == 0.0) continue;
    for (const auto& [i, a] : eta.entries) v[i] -= a * xr;
  }
}

void Engine::Btran(Vec& v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->pivot_row];
    for (const auto& [i, a] : it->entries) s -= a * v[i];
    v[it->pivot_row] = s / it->pivot;
  }
  v = lu_.transpose().solve(v).eval();
}

void Engine::ComputeBasicValues() {
  Vec rhs = Vec::Zero(m_);
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[j] == VarStatus::kBasic || x_[j] == 0.0) continue;
    if (j >= n_) {
      rhs[j - n_] += x_[j];
    } else {
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
        rhs[row_index_[p]] -= value_[p] * x_[j];
      }
    }
  }
  Ftran(rhs);
  for (int pos = 0; pos < m_; ++pos) x_[basis_[pos]] = rhs[pos];
}

// Widens the bounds of basic variables by small random amounts so that a
// degenerate vertex becomes non-degenerate.
void Engine::PerturbBasicBounds() {
  true_lower_ = lower_;
  true_upper_ = upper_;
  std::mt19937 rng(1234 + perturbations_);
  std::uniform_real_distribution<double> unit(1.0, 2.0);
  for (int pos = 0; pos < m_; ++pos) {
    const int j = basis_[pos];
    if (std::isfinite(lower_[j])) lower_[j] -= 1e-7 * unit(rng) * (1.0 + std::abs(lower_[j]));
    if (std::isfinite(upper_[j])) upper_[j] += 1e-7 * unit(rng) * (1.0 + std::abs(upper_[j]));
  }
  perturbed_ = true;
  ++perturbations_;
}

void Engine::RestoreBounds() {
  lower_ = true_lower_;
  upper_ = true_upper_;
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[j] == VarStatus::kAtLower) x_[j] = lower_[j];
    if (status_[j] == VarStatus::kAtUpper) x_[j] = upper_[j];
  }
  perturbed_ = false;
  ComputeBasicValues();
}

Solution Engine::Run() {
  InitialBasis();
  if (m_ == 0) {
    // Each variable sits at its cheapest bound.
    for (int j = 0; j < n_; ++j) {
      if (cost_[j] > 0) {
        if (!std::isfinite(lower_[j])) return Finish(SolveStatus::kUnbounded, "unbounded variable");
        x_[j] = lower_[j];
      } else if (cost_[j] < 0) {
        if (!std::isfinite(upper_[j])) return Finish(SolveStatus::kUnbounded, "unbounded variable");
        x_[j] = upper_[j];
      }
    }
    return Finish(SolveStatus::kOptimal, "");
  }
  if (!Refactor()) return Finish(SolveStatus::kError, "initial basis is singular");
  ComputeBasicValues();

  const double ptol = opt_.primal_tolerance;
  const double dtol = opt_.dual_tolerance;
  constexpr int kRefactorInterval = 80;
  constexpr int kDegenerateLimit = 60;
  constexpr int kMaxPerturbations = 3;
  constexpr double kPivotTol = 1e-9;

  Vec y(m_), alpha(m_);
  std::vector<double> phase_cost(m_);
  constexpr double kDriftTol = 1e-7;
  int degenerate_run = 0;
  bool bland = false;
  bool was_feasible = false;
  int cleanups = 0;
  constexpr int kMaxCleanups = 5;
  int failed_refactors = 0;
  std::vector<int> rejected(n_ + m_, -1);

  while (true) {
    if (iterations_ >= opt_.max_iterations) {
      return Finish(SolveStatus::kError, "iteration limit reached");
    }
    if (static_cast<int>(etas_.size()) >= kRefactorInterval) {
      if (!Refactor()) {
        basis_ = good_basis_;
        status_ = good_status_;
        if (++failed_refactors > 5 || !Refactor()) {
          return Finish(SolveStatus::kError, "basis factorization failed");
        }
      }
      ComputeBasicValues();
    }

    // Phase selection: phase 1 whenever some basic variable is infeasible.
    double sum_inf = 0.0;
    double max_inf = 0.0;
    for (int pos = 0; pos < m_; ++pos) {
      const int var = basis_[pos];
      double inf = 0.0;
      if (x_[var] < lower_[var] - ptol) {
        phase_cost[pos] = -1.0;
        inf = lower_[var] - x_[var];
      } else if (x_[var] > upper_[var] + ptol) {
        phase_cost[pos] = 1.0;
        inf = x_[var] - upper_[var];
      } else {
        phase_cost[pos] = 0.0;
      }
      sum_inf += inf;
      max_inf = std::max(max_inf, inf);
    }
    bool phase1 = sum_inf > 0.0;
    // Rounding drift after phase 1 ended is carried along and cleaned up
    // once phase 2 is optimal.
    const bool drift = phase1 && was_feasible && max_inf < kDriftTol;
    if (drift) phase1 = false;
    if (!phase1) was_feasible = true;
    for (int pos = 0; pos < m_; ++pos) {
      y[pos] = phase1 ? phase_cost[pos] : cost_[basis_[pos]];
    }
    Btran(y);
    double phase_objective = 0.0;
    for (int pos = 0; pos < m_; ++pos) {
      phase_objective += (phase1 ? phase_cost[pos] : cost_[basis_[pos]]) * x_[basis_[pos]];
    }

    // Pricing.
    int entering = -1;
    double best = 0.0;
    double entering_d = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      const VarStatus st = status_[j];
      if (st == VarStatus::kBasic) continue;
      if (rejected[j] == iterations_) continue;
      if (upper_[j] - lower_[j] <= 0.0 && st != VarStatus::kFree) continue;
      const double d = (phase1 ? 0.0 : cost_[j]) - ColumnDot(j, y);
      double score = 0.0;
      if (st == VarStatus::kAtLower && d < -dtol) score = -d;
      if (st == VarStatus::kAtUpper && d > dtol) score = d;
      if (st == VarStatus::kFree && std::abs(d) > dtol) score = std::abs(d);
      if (score <= 0.0) continue;
      if (bland) {
        entering = j;
        entering_d = d;
        break;
      }
      if (score > best) {
        best = score;
        entering = j;
        entering_d = d;
      }
    }

    if (entering < 0) {
      // Candidate optimum of the current phase; confirm on a fresh
      // factorization before reporting.
      if (!etas_.empty()) {
        if (!Refactor()) {
          basis_ = good_basis_;
          status_ = good_status_;
          if (++failed_refactors > 5 || !Refactor()) {
            return Finish(SolveStatus::kError, "basis factorization failed");
          }
        }
        ComputeBasicValues();
        continue;
      }
      if (perturbed_) {
        RestoreBounds();
        was_feasible = false;
        continue;
      }
      if (drift && cleanups < kMaxCleanups) {
        ++cleanups;
        was_feasible = false;
        continue;
      }
      if (phase1) {
        return Finish(SolveStatus::kInfeasible,
                      "phase 1 ended with infeasibility " + std::to_string(sum_inf));
      }
      return Finish(SolveStatus::kOptimal, "");
    }

    const double dir = entering_d < 0 ? 1.0 : -1.0;
    LoadColumn(entering, alpha);
    Ftran(alpha);

    // Ratio test. Basic variable in position i changes at rate -dir*alpha_i.
    auto bounds_of = [&](int var, double& lo, double& up) {
      lo = lower_[var];
      up = upper_[var];
      if (phase1) {
        if (x_[var] < lower_[var] - ptol) {
          lo = -kInf;
          up = lower_[var];
        } else if (x_[var] > upper_[var] + ptol) {
          lo = upper_[var];
          up = kInf;
        }
      }
    };

    const double flip_range = upper_[entering] - lower_[entering];
    int leave_pos = -1;
    double theta = kInf;
    bool leave_to_upper = false;

    if (bland) {
      int leave_var = -1;
      for (int pos = 0; pos < m_; ++pos) {
        const double rate = -dir * alpha[pos];
        if (std::abs(rate) <= kPivotTol) continue;
        const int var = basis_[pos];
        double lo, up;
        bounds_of(var, lo, up);
        double t;
        bool to_upper;
        if (rate < 0) {
          if (!std::isfinite(lo)) continue;
          t = std::max(0.0, (x_[var] - lo) / -rate);
          to_upper = false;
        } else {
          if (!std::isfinite(up)) continue;
          t = std::max(0.0, (up - x_[var]) / rate);
          to_upper = true;
        }
        if (t < theta - 1e-12 || (t <= theta + 1e-12 && var < leave_var)) {
          theta = t;
          leave_pos = pos;
          leave_var = var;
          leave_to_upper = to_upper;
        }
      }
    } else {
      double theta_max = kInf;
      for (int pos = 0; pos < m_; ++pos) {
        const double rate = -dir * alpha[pos];
        if (std::abs(rate) <= kPivotTol) continue;
        const int var = basis_[pos];
        double lo, up;
        bounds_of(var, lo, up);
        if (rate < 0 && std::isfinite(lo)) {
          theta_max = std::min(theta_max, (x_[var] - lo + ptol) / -rate);
        } else if (rate > 0 && std::isfinite(up)) {
          theta_max = std::min(theta_max, (up - x_[var] + ptol) / rate);
        }
      }
      double best_pivot = 0.0;
      for (int pos = 0; pos < m_; ++pos) {
        const double rate = -dir * alpha[pos];
        if (std::abs(rate) <= kPivotTol) continue;
        const int var = basis_[pos];
        double lo, up;
        bounds_of(var, lo, up);
        double t;
        bool to_upper;
        if (rate < 0 && std::isfinite(lo)) {
          t = (x_[var] - lo) / -rate;
          to_upper = false;
        } else if (rate > 0 && std::isfinite(up)) {
          t = (up - x_[var]) / rate;
          to_upper = true;
        } else {
          continue;
        }
        if (t <= theta_max && std::abs(rate) > best_pivot) {
          best_pivot = std::abs(rate);
          theta = std::max(t, 0.0);
          leave_pos = pos;
          leave_to_upper = to_upper;
        }
      }
    }

    if (flip_range < kInf && flip_range <= theta) {
      // Bound flip of the entering variable; the basis is unchanged.
      const double step = dir * flip_range;
      x_[entering] = dir > 0 ? upper_[entering] : lower_[entering];
      status_[entering] = dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
      for (int pos = 0; pos < m_; ++pos) x_[basis_[pos]] -= step * alpha[pos];
      ++iterations_;
      degenerate_run = 0;
      bland = false;
      continue;
    }
    if (leave_pos < 0) {
      if (phase1) {
        // Cannot happen with exact arithmetic; treat as numerical trouble.
        rejected[entering] = ++iterations_;
        continue;
      }
      return Finish(SolveStatus::kUnbounded, "primal ray found");
    }
    if (std::abs(alpha[leave_pos]) < 1e-7 && !etas_.empty()) {
      // Weak pivot: refactor to clear accumulated error, then retry.
      if (Refactor()) {
        ComputeBasicValues();
        continue;
      }
    }

    const int leaving = basis_[leave_pos];
    double target;
    {
      double lo, up;
      bounds_of(leaving, lo, up);
      target = leave_to_upper ? up : lo;
    }
    const double step = dir * theta;
    x_[entering] += step;
    for (int pos = 0; pos < m_; ++pos) x_[basis_[pos]] -= step * alpha[pos];
    {
      x_[leaving] = target;
      // A phase-1 variable leaves at the bound it was heading to, which is
      // one of its true bounds.
      if (x_[leaving] == upper_[leaving]) {
        status_[leaving] = VarStatus::kAtUpper;
      } else {
        status_[leaving] = VarStatus::kAtLower;
      }
      if (lower_[leaving] == upper_[leaving]) status_[leaving] = VarStatus::kAtLower;
    }
    basis_[leave_pos] = entering;
    status_[entering] = VarStatus::kBasic;

    Eta eta;
    eta.pivot_row = leave_pos;
    eta.pivot = alpha[leave_pos];
    for (int pos = 0; pos < m_; ++pos) {
      if (pos != leave_pos && alpha[pos] != 0.0) eta.entries.emplace_back(pos, alpha[pos]);
    }
    etas_.push_back(std::move(eta));
    ++iterations_;

    // Progress is measured on the objective of the current phase, so tiny
    // Harris steps do not count as leaving a degenerate vertex.
    const double progress = std::abs(entering_d) * theta;
    if (progress <= 1e-11 * (1.0 + std::abs(phase_objective))) {
      if (++degenerate_run > kDegenerateLimit) {
        if (!perturbed_ && perturbations_ < kMaxPerturbations) {
          PerturbBasicBounds();
          degenerate_run = 0;
        } else {
          bland = true;
        }
      }
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }
}

Solution Engine::Finish(SolveStatus status, const std::string& message) {
  Solution sol;
  sol.status = status;
  sol.iterations = iterations_;
  sol.backend = "simplex";
  sol.message = message;
  if (status != SolveStatus::kOptimal) return sol;

  sol.x.resize(n_);
  for (int j = 0; j < n_; ++j) sol.x[j] = x_[j] * col_scale_[j];

  Vec y = Vec::Zero(m_);
  if (m_ > 0) {
    for (int pos = 0; pos < m_; ++pos) y[pos] = cost_[basis_[pos]];
    Btran(y);
  }
  sol.row_dual.resize(m_);
  for (int i = 0; i < m_; ++i) sol.row_dual[i] = y[i] * row_scale_[i];
  sol.reduced_cost.assign(n_, 0.0);
  for (int j = 0; j < n_; ++j) {
    if (status_[j] == VarStatus::kBasic) continue;
    sol.reduced_cost[j] = (cost_[j] - ColumnDot(j, y)) / col_scale_[j];
  }
  sol.row_activity.assign(m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    double s = 0.0;
    for (const Term& t : model_.constraints()[i].terms) s += t.coef * sol.x[t.var.index];
    sol.row_activity[i] = s;
  }
  double obj = model_.objective_offset();
  for (int j = 0; j < n_; ++j) obj += model_.variables()[j].cost * sol.x[j];
  sol.objective = obj;
  return sol;
}

}  // namespace

Solution SimplexSolver::Solve(const Model& model) const {
  Engine engine(model, options_);
  return engine.Run();
}

}  // namespace msdro::lp
