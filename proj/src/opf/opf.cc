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

#include "opf/opf.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <string>

#include "common/error.h"
#include "lp/solver.h"

namespace msdro::opf {

namespace {

using lp::LinearExpr;
using lp::Sense;

std::string Tag(const char* base, std::initializer_list<int> idx) {
  std::string out(base);
  for (int i : idx) out += "_" + std::to_string(i);
  return out;
}

// Coefficients of row k in xi_j as a linear expression in alpha (plus a
// constant), i.e. a_kj(alpha).
LinearExpr RowSlope(const Network& net, const CvarRow& row, int j,
                    const std::vector<std::vector<lp::VarId>>& alpha) {
  LinearExpr e;
  switch (row.kind) {
    case RowKind::kReserveUp: e.Add(alpha[row.index][j], -1.0); break;
    case RowKind::kReserveDown: e.Add(alpha[row.index][j], 1.0); break;
    case RowKind::kRamUp:
    case RowKind::kRamDown: {
      const double sign = row.kind == RowKind::kRamUp ? 1.0 : -1.0;
      e.AddConstant(sign * net.maps.resource(row.index, j));
      for (int g = 0; g < net.num_generators(); ++g) {
        if (!alpha[g].empty()) e.Add(alpha[g][j], -sign * net.maps.gen(row.index, g));
      }
      break;
    }
    case RowKind::kZero: break;
  }
  return e;
}

// Variables with positive infeasibility in an elastic copy of the model.
std::vector<std::string> ElasticConflict(const lp::Model& model, const lp::Solver& solver) {
  lp::Model elastic;
  for (const lp::Variable& v : model.variables()) {
    elastic.AddVariable(v.name, v.lower, v.upper, 0.0);
  }
  std::vector<std::pair<lp::VarId, std::string>> slacks;
  for (const lp::Constraint& c : model.constraints()) {
    LinearExpr e;
    for (const lp::Term& t : c.terms) e.Add(t.var, t.coef);
    if (c.sense != Sense::kGreaterEqual) {
      lp::VarId s = elastic.AddVariable("elastic_minus_" + c.name, 0.0, lp::kInf, 1.0);
      e.Add(s, -1.0);
      slacks.push_back({s, c.name});
    }
    if (c.sense != Sense::kLessEqual) {
      lp::VarId s = elastic.AddVariable("elastic_plus_" + c.name, 0.0, lp::kInf, 1.0);
      e.Add(s, 1.0);
      slacks.push_back({s, c.name});
    }
    elastic.AddConstraint(c.name, e, c.sense, c.rhs);
  }
  std::vector<std::string> out;
  lp::Solution sol = solver.Solve(elastic);
  if (!sol.optimal()) return out;
  for (const auto& [var, name] : slacks) {
    if (sol.value(var) > 1e-7 && (out.empty() || out.back() != name)) out.push_back(name);
  }
  return out;
}

}  // namespace

const char* RowKindName(RowKind kind) {
  switch (kind) {
    case RowKind::kReserveUp: return "reserve_up";
    case RowKind::kReserveDown: return "reserve_down";
    case RowKind::kRamUp: return "line_up";
    case RowKind::kRamDown: return "line_down";
    case RowKind::kZero: return "zero";
  }
  return "unknown";
}

std::vector<CvarRow> MakeCvarRows(const Network& network, const std::vector<int>& fixed) {
  const std::set<int> skip(fixed.begin(), fixed.end());
  std::vector<CvarRow> rows;
  for (RowKind kind : {RowKind::kReserveUp, RowKind::kReserveDown}) {
    for (int g = 0; g < network.num_generators(); ++g) {
      if (!skip.count(g)) rows.push_back({kind, g});
    }
  }
  for (RowKind kind : {RowKind::kRamUp, RowKind::kRamDown}) {
    for (int l = 0; l < network.num_lines(); ++l) rows.push_back({kind, l});
  }
  rows.push_back({RowKind::kZero, -1});
  return rows;
}

void EvaluateCvarRows(const Network& net, const OpfDecision& d, const std::vector<CvarRow>& rows,
                      Matrix& a, std::vector<double>& b) {
  const int d_count = net.num_resources();
  a.assign(rows.size(), std::vector<double>(d_count, 0.0));
  b.assign(rows.size(), 0.0);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const CvarRow& row = rows[k];
    switch (row.kind) {
      case RowKind::kReserveUp:
        for (int j = 0; j < d_count; ++j) a[k][j] = -d.alpha[row.index][j];
        b[k] = -d.r_plus[row.index];
        break;
      case RowKind::kReserveDown:
        for (int j = 0; j < d_count; ++j) a[k][j] = d.alpha[row.index][j];
        b[k] = -d.r_minus[row.index];
        break;
      case RowKind::kRamUp:
      case RowKind::kRamDown: {
        const double sign = row.kind == RowKind::kRamUp ? 1.0 : -1.0;
        for (int j = 0; j < d_count; ++j) {
          double v = net.maps.resource(row.index, j);
          for (int g = 0; g < net.num_generators(); ++g) v -= net.maps.gen(row.index, g) * d.alpha[g][j];
          a[k][j] = sign * v;
        }
        b[k] = row.kind == RowKind::kRamUp ? -d.f_ram_plus[row.index] : -d.f_ram_minus[row.index];
        break;
      }
      case RowKind::kZero: break;
    }
  }
}

OpfModel BuildMsdroOpf(const Network& network, const dro::MultiDataset& data,
                       const OpfOptions& options) {
  OpfModel m;
  m.network_ = network;
  m.data_ = data;
  m.options_ = options;
  m.support_ = BuildSupport(network);

  const Network& net = m.network_;
  const int g_count = net.num_generators();
  const int l_count = net.num_lines();
  const int d_count = net.num_resources();
  Require(std::isfinite(options.gamma) && options.gamma >= 0.0 && options.gamma < 1.0,
          ErrorCode::kInput, "risk level gamma must lie in [0, 1)");
  Require(data.dimension() == d_count, ErrorCode::kInput,
          "dataset has " + std::to_string(data.dimension()) + " features, network has " +
              std::to_string(d_count) + " resources");
  Require(static_cast<int>(data.epsilon.size()) == d_count, ErrorCode::kInput,
          "one Wasserstein budget per resource required");
  for (int g : options.fixed_generators) {
    Require(g >= 0 && g < g_count, ErrorCode::kInput, "fixed generator index out of range");
  }
  int n = 1;
  if (d_count > 0) {
    n = data.shared_count();
    Require(n > 0, ErrorCode::kInput, "dataset has no samples");
    data.Validate(&m.support_);
  }
  m.samples_ = n;
  const std::set<int> fixed(options.fixed_generators.begin(), options.fixed_generators.end());
  m.options_.fixed_generators.assign(fixed.begin(), fixed.end());
  m.rows_ = MakeCvarRows(net, m.options_.fixed_generators);
  const int rows = static_cast<int>(m.rows_.size());
  const int k_count = rows - 1;
  const std::vector<double>& lo = m.support_.lower;
  const std::vector<double>& up = m.support_.upper;
  auto sample = [&](int j, int i) { return data.samples[j][i]; };

  lp::Model& model = m.lp_;

  // First stage.
  LinearExpr total;
  for (int g = 0; g < g_count; ++g) {
    const Generator& gen = net.generators[g];
    const double r_up = fixed.count(g) ? 0.0 : lp::kInf;
    m.p_.push_back(model.AddVariable(Tag("p", {g}), 0.0, lp::kInf, gen.c_energy));
    m.r_plus_.push_back(model.AddVariable(Tag("r_plus", {g}), 0.0, r_up, gen.c_reserve));
    m.r_minus_.push_back(model.AddVariable(Tag("r_minus", {g}), 0.0, r_up, gen.c_reserve));
    m.alpha_.emplace_back();
    for (int j = 0; j < d_count; ++j) {
      m.alpha_[g].push_back(model.AddVariable(Tag("alpha", {g, j}), 0.0, fixed.count(g) ? 0.0 : lp::kInf));
    }
    total.Add(m.p_[g], 1.0);
  }
  for (int l = 0; l < l_count; ++l) {
    m.f_plus_.push_back(model.AddVariable(Tag("f_ram_plus", {l})));
    m.f_minus_.push_back(model.AddVariable(Tag("f_ram_minus", {l})));
  }
  m.balance_ = model.AddConstraint("balance", total, Sense::kEqual,
                                   net.TotalDemand() - net.TotalForecast());
  for (int j = 0; j < d_count; ++j) {
    LinearExpr col;
    for (int g = 0; g < g_count; ++g) col.Add(m.alpha_[g][j], 1.0);
    m.participation_.push_back(model.AddConstraint(Tag("participation", {j}), col, Sense::kEqual, 1.0));
  }
  for (int g = 0; g < g_count; ++g) {
    m.gen_up_.push_back(model.AddConstraint(
        Tag("gen_up", {g}), LinearExpr(m.p_[g]) + LinearExpr(m.r_plus_[g]), Sense::kLessEqual,
        net.generators[g].p_max));
    m.gen_lo_.push_back(model.AddConstraint(
        Tag("gen_lo", {g}), LinearExpr(m.p_[g]) - LinearExpr(m.r_minus_[g]),
        Sense::kGreaterEqual, net.generators[g].p_min));
  }
  const Eigen::VectorXd demand = net.BusDemand();
  for (int l = 0; l < l_count; ++l) {
    LinearExpr flow;
    for (int g = 0; g < g_count; ++g) flow.Add(m.p_[g], net.maps.gen(l, g));
    double injected = 0.0;
    for (int j = 0; j < d_count; ++j) injected += net.maps.resource(l, j) * net.resources[j].u;
    for (int v = 0; v < net.num_buses(); ++v) injected -= net.maps.bus(l, v) * demand[v];
    const double fmax = net.lines[l].f_max;
    m.line_up_.push_back(model.AddConstraint(Tag("line_up", {l}), flow + LinearExpr(m.f_plus_[l]),
                                             Sense::kEqual, fmax - injected));
    m.line_lo_.push_back(model.AddConstraint(Tag("line_lo", {l}),
                                             LinearExpr(m.f_minus_[l]) - flow, Sense::kEqual,
                                             fmax + injected));
  }

  // Worst-case expected activation cost, feature by feature.
  for (int j = 0; j < d_count; ++j) {
    m.lambda_co_.push_back(model.AddVariable(Tag("lambda_co", {j}), 0.0, lp::kInf, data.epsilon[j]));
    LinearExpr weighted;  // sum_g c^A_g alpha_gj
    for (int g = 0; g < g_count; ++g) weighted.Add(m.alpha_[g][j], net.generators[g].c_activation);
    m.s_co_.emplace_back();
    m.co_up_.emplace_back();
    m.co_lo_.emplace_back();
    m.co_av_.emplace_back();
    for (int i = 0; i < n; ++i) {
      const double xi = sample(j, i);
      lp::VarId s = model.AddVariable(Tag("s_co", {j, i}), -lp::kInf, lp::kInf, 1.0 / n);
      m.s_co_[j].push_back(s);
      m.co_up_[j].push_back(model.AddConstraint(
          Tag("co_up", {j, i}), LinearExpr(s) + up[j] * weighted + LinearExpr(m.lambda_co_[j], up[j] - xi),
          Sense::kGreaterEqual, 0.0));
      m.co_lo_[j].push_back(model.AddConstraint(
          Tag("co_lo", {j, i}), LinearExpr(s) + lo[j] * weighted + LinearExpr(m.lambda_co_[j], xi - lo[j]),
          Sense::kGreaterEqual, 0.0));
      m.co_av_[j].push_back(model.AddConstraint(Tag("co_av", {j, i}),
                                                LinearExpr(s) + xi * weighted,
                                                Sense::kGreaterEqual, 0.0));
    }
  }

  // Worst-case CVaR of the joint security constraint.
  m.tau_ = model.AddVariable("tau", -lp::kInf, 0.0, 0.0);
  m.nu_ = model.AddVariable("nu", -lp::kInf, lp::kInf, 0.0);
  m.tau_nu_ = model.AddConstraint("tau_nu", LinearExpr(m.tau_) + LinearExpr(m.nu_),
                                  Sense::kLessEqual, 0.0);
  LinearExpr budget(m.nu_, -options.gamma);
  for (int j = 0; j < d_count; ++j) {
    m.lambda_cc_.push_back(model.AddVariable(Tag("lambda_cc", {j})));
    budget.Add(m.lambda_cc_[j], data.epsilon[j]);
  }
  for (int i = 0; i < n; ++i) {
    m.s_cc_.push_back(model.AddVariable(Tag("s_cc", {i}), -lp::kInf, lp::kInf, 0.0));
    budget.Add(m.s_cc_[i], 1.0 / n);
  }
  m.s_aux_.assign(d_count, std::vector<std::vector<lp::VarId>>(n));
  m.rho_up_.assign(d_count, std::vector<std::vector<lp::RowId>>(n));
  m.rho_lo_ = m.rho_up_;
  m.rho_av_ = m.rho_up_;
  for (int j = 0; j < d_count; ++j) {
    for (int i = 0; i < n; ++i) {
      const double xi = sample(j, i);
      for (int k = 0; k < rows; ++k) {
        lp::VarId s = model.AddVariable(Tag("s_aux", {j, i, k}), -lp::kInf, lp::kInf, 0.0);
        m.s_aux_[j][i].push_back(s);
        const LinearExpr slope = RowSlope(net, m.rows_[k], j, m.alpha_);
        m.rho_up_[j][i].push_back(model.AddConstraint(
            Tag("rho_up", {j, i, k}),
            LinearExpr(s) - up[j] * slope + LinearExpr(m.lambda_cc_[j], up[j] - xi),
            Sense::kGreaterEqual, 0.0));
        m.rho_lo_[j][i].push_back(model.AddConstraint(
            Tag("rho_lo", {j, i, k}),
            LinearExpr(s) - lo[j] * slope + LinearExpr(m.lambda_cc_[j], xi - lo[j]),
            Sense::kGreaterEqual, 0.0));
        m.rho_av_[j][i].push_back(model.AddConstraint(
            Tag("rho_av", {j, i, k}), LinearExpr(s) - xi * slope, Sense::kGreaterEqual, 0.0));
      }
    }
  }
  m.eta_.assign(n, {});
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < rows; ++k) {
      LinearExpr e(m.s_cc_[i]);
      for (int j = 0; j < d_count; ++j) e.Add(m.s_aux_[j][i][k], -1.0);
      if (k < k_count) {
        const CvarRow& row = m.rows_[k];
        // -b_k: the reserve or line margin of the row.
        switch (row.kind) {
          case RowKind::kReserveUp: e.Add(m.r_plus_[row.index], 1.0); break;
          case RowKind::kReserveDown: e.Add(m.r_minus_[row.index], 1.0); break;
          case RowKind::kRamUp: e.Add(m.f_plus_[row.index], 1.0); break;
          case RowKind::kRamDown: e.Add(m.f_minus_[row.index], 1.0); break;
          case RowKind::kZero: break;
        }
        e.Add(m.tau_, 1.0);
      }
      m.eta_[i].push_back(model.AddConstraint(Tag("eta", {i, k}), e, Sense::kGreaterEqual, 0.0));
    }
  }
  m.budget_ = model.AddConstraint("cvar_budget", budget, Sense::kLessEqual, 0.0);
  return m;
}

SolutionWithDuals SolveOpf(const OpfModel& m, const lp::Solver* solver) {
  std::unique_ptr<lp::Solver> owned;
  if (!solver) {
    owned = lp::MakeDefaultSolver();
    solver = owned.get();
  }
  const Network& net = m.network_;
  const int g_count = net.num_generators();
  const int d_count = net.num_resources();
  const int n = m.samples_;

  SolutionWithDuals out;
  out.rows = m.rows_;
  out.fixed_generators = m.options_.fixed_generators;
  out.gamma = m.options_.gamma;
  out.backend = std::string(solver->name());

  const lp::Solution sol = solver->Solve(m.lp_);
  out.status = sol.status;
  out.message = sol.message;
  out.iterations = sol.iterations;
  if (sol.status == lp::SolveStatus::kInfeasible) {
    out.conflict = ElasticConflict(m.lp_, *solver);
  }
  if (!sol.optimal()) return out;

  out.objective = sol.objective;
  out.dual_objective = lp::DualObjective(m.lp_, sol);
  auto vals = [&](const std::vector<lp::VarId>& ids) {
    std::vector<double> v;
    for (lp::VarId id : ids) v.push_back(sol.value(id));
    return v;
  };
  auto duals = [&](const std::vector<lp::RowId>& ids, double sign) {
    std::vector<double> v;
    for (lp::RowId id : ids) v.push_back(sign * sol.dual(id));
    return v;
  };
  OpfDecision& d = out.decision;
  d.p = vals(m.p_);
  d.r_plus = vals(m.r_plus_);
  d.r_minus = vals(m.r_minus_);
  d.f_ram_plus = vals(m.f_plus_);
  d.f_ram_minus = vals(m.f_minus_);
  for (int g = 0; g < g_count; ++g) d.alpha.push_back(vals(m.alpha_[g]));
  out.lambda_co = vals(m.lambda_co_);
  out.lambda_cc = vals(m.lambda_cc_);
  out.tau = sol.value(m.tau_);
  out.nu = sol.value(m.nu_);
  for (int j = 0; j < d_count; ++j) {
    out.s_co.push_back(vals(m.s_co_[j]));
    out.s_aux.emplace_back();
    for (int i = 0; i < n; ++i) out.s_aux[j].push_back(vals(m.s_aux_[j][i]));
  }
  out.s_cc = vals(m.s_cc_);

  for (int g = 0; g < g_count; ++g) {
    const Generator& gen = net.generators[g];
    out.energy_cost += gen.c_energy * d.p[g];
    out.reserve_cost += gen.c_reserve * (d.r_plus[g] + d.r_minus[g]);
  }
  for (int j = 0; j < d_count; ++j) {
    out.activation_cost += m.data_.epsilon[j] * out.lambda_co[j];
    for (int i = 0; i < n; ++i) out.activation_cost += out.s_co[j][i] / n;
  }

  OpfDuals& y = out.duals;
  y.pi = sol.dual(m.balance_);
  y.chi = duals(m.participation_, 1.0);
  y.sigma_up = duals(m.gen_up_, -1.0);
  y.sigma_lo = duals(m.gen_lo_, 1.0);
  y.beta_up = duals(m.line_up_, 1.0);
  y.beta_lo = duals(m.line_lo_, 1.0);
  y.phi = -sol.dual(m.budget_);
  y.tau_nu = -sol.dual(m.tau_nu_);
  for (int i = 0; i < n; ++i) y.eta.push_back(duals(m.eta_[i], 1.0));
  for (int j = 0; j < d_count; ++j) {
    y.mu_up.push_back(duals(m.co_up_[j], 1.0));
    y.mu_lo.push_back(duals(m.co_lo_[j], 1.0));
    y.mu_av.push_back(duals(m.co_av_[j], 1.0));
    y.rho_up.emplace_back();
    y.rho_lo.emplace_back();
    y.rho_av.emplace_back();
    for (int i = 0; i < n; ++i) {
      y.rho_up[j].push_back(duals(m.rho_up_[j][i], 1.0));
      y.rho_lo[j].push_back(duals(m.rho_lo_[j][i], 1.0));
      y.rho_av[j].push_back(duals(m.rho_av_[j][i], 1.0));
    }
  }
  EvaluateCvarRows(net, d, out.rows, out.a_prime, out.b_prime);
  return out;
}

std::vector<int> IdleGenerators(const SolutionWithDuals& solution) {
  std::vector<int> idle;
  for (std::size_t g = 0; g < solution.decision.alpha.size(); ++g) {
    const auto& row = solution.decision.alpha[g];
    if (std::all_of(row.begin(), row.end(), [](double a) { return std::abs(a) <= 1e-9; })) {
      idle.push_back(static_cast<int>(g));
    }
  }
  return idle;
}

SolutionWithDuals CvarTighteningRerun(const Network& network, const dro::MultiDataset& data,
                                      double gamma, const SolutionWithDuals& first,
                                      const lp::Solver* solver) {
  if (!first.optimal()) return first;
  std::vector<int> idle = IdleGenerators(first);
  std::vector<int> merged = first.fixed_generators;
  merged.insert(merged.end(), idle.begin(), idle.end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  if (merged == first.fixed_generators) return first;
  OpfOptions options;
  options.gamma = gamma;
  options.fixed_generators = merged;
  return SolveOpf(BuildMsdroOpf(network, data, options), solver);
}

}  // namespace msdro::opf
