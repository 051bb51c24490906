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

#ifndef MSDRO_TESTS_OPF_ORACLES_H_
#define MSDRO_TESTS_OPF_ORACLES_H_

// Independent comparator LPs for the DRO OPF. They share only the network
// data and flow maps with the library.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dro/dro.h"
#include "lp/model.h"
#include "lp/simplex.h"
#include "opf/network.h"

namespace msdro::testing {

inline std::string Name(const char* p, int a, int b = -1) {
  return std::string(p) + std::to_string(a) + (b >= 0 ? "_" + std::to_string(b) : "");
}

// Deterministic constraints and first-stage cost shared by the comparators.
struct BaseLp {
  lp::Model model;
  std::vector<lp::VarId> p, rp, rm, fp, fm;
  std::vector<std::vector<lp::VarId>> alpha;
};

inline BaseLp BuildBase(const opf::Network& net) {
  BaseLp b;
  const int g_count = net.num_generators();
  const int d_count = net.num_resources();
  const int l_count = net.num_lines();
  const Eigen::VectorXd demand = net.BusDemand();
  lp::LinearExpr total;
  for (int g = 0; g < g_count; ++g) {
    const opf::Generator& gen = net.generators[g];
    b.p.push_back(b.model.AddVariable(Name("p", g), 0, lp::kInf, gen.c_energy));
    b.rp.push_back(b.model.AddVariable(Name("rp", g), 0, lp::kInf, gen.c_reserve));
    b.rm.push_back(b.model.AddVariable(Name("rm", g), 0, lp::kInf, gen.c_reserve));
    b.alpha.emplace_back();
    for (int j = 0; j < d_count; ++j) b.alpha[g].push_back(b.model.AddVariable(Name("a", g, j)));
    total.Add(b.p[g], 1.0);
    b.model.AddConstraint(Name("pmax", g), lp::LinearExpr(b.p[g]) + lp::LinearExpr(b.rp[g]),
                          lp::Sense::kLessEqual, gen.p_max);
    b.model.AddConstraint(Name("pmin", g), lp::LinearExpr(b.p[g]) - lp::LinearExpr(b.rm[g]),
                          lp::Sense::kGreaterEqual, gen.p_min);
  }
  b.model.AddConstraint("balance", total, lp::Sense::kEqual,
                        net.TotalDemand() - net.TotalForecast());
  for (int j = 0; j < d_count; ++j) {
    lp::LinearExpr col;
    for (int g = 0; g < g_count; ++g) col.Add(b.alpha[g][j], 1.0);
    b.model.AddConstraint(Name("part", j), col, lp::Sense::kEqual, 1.0);
  }
  for (int l = 0; l < l_count; ++l) {
    b.fp.push_back(b.model.AddVariable(Name("fp", l)));
    b.fm.push_back(b.model.AddVariable(Name("fm", l)));
    lp::LinearExpr flow;
    double constant = 0.0;
    for (int g = 0; g < g_count; ++g) flow.Add(b.p[g], net.maps.gen(l, g));
    for (int j = 0; j < d_count; ++j) constant += net.maps.resource(l, j) * net.resources[j].u;
    for (int v = 0; v < net.num_buses(); ++v) constant -= net.maps.bus(l, v) * demand[v];
    const double fmax = net.lines[l].f_max;
    b.model.AddConstraint(Name("lup", l), flow + lp::LinearExpr(b.fp[l]), lp::Sense::kEqual,
                          fmax - constant);
    b.model.AddConstraint(Name("llo", l), lp::LinearExpr(b.fm[l]) - flow, lp::Sense::kEqual,
                          fmax + constant);
  }
  return b;
}

// Row k of the joint constraint evaluated as a linear expression in the
// decision for a fixed xi.
inline void AddJointRows(BaseLp& b, const opf::Network& net, const std::vector<double>& xi,
                         const std::string& tag, lp::VarId shift, bool has_shift,
                         std::vector<lp::LinearExpr>* rows_out) {
  const int g_count = net.num_generators();
  const int d_count = net.num_resources();
  std::vector<lp::LinearExpr> rows;
  for (int g = 0; g < g_count; ++g) {
    lp::LinearExpr up, dn;
    for (int j = 0; j < d_count; ++j) {
      up.Add(b.alpha[g][j], -xi[j]);
      dn.Add(b.alpha[g][j], xi[j]);
    }
    up.Add(b.rp[g], -1.0);
    dn.Add(b.rm[g], -1.0);
    rows.push_back(up);
    rows.push_back(dn);
  }
  for (int l = 0; l < net.num_lines(); ++l) {
    lp::LinearExpr plus, minus;
    double c = 0.0;
    for (int j = 0; j < d_count; ++j) c += net.maps.resource(l, j) * xi[j];
    plus.AddConstant(c);
    minus.AddConstant(-c);
    for (int g = 0; g < g_count; ++g) {
      for (int j = 0; j < d_count; ++j) {
        plus.Add(b.alpha[g][j], -net.maps.gen(l, g) * xi[j]);
        minus.Add(b.alpha[g][j], net.maps.gen(l, g) * xi[j]);
      }
    }
    plus.Add(b.fp[l], -1.0);
    minus.Add(b.fm[l], -1.0);
    rows.push_back(plus);
    rows.push_back(minus);
  }
  if (rows_out) {
    *rows_out = rows;
    return;
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    lp::LinearExpr e = rows[k];
    if (has_shift) e.Add(shift, -1.0);
    b.model.AddConstraint(tag + "_" + std::to_string(k), e, lp::Sense::kLessEqual, 0.0);
  }
}

// Every joint row enforced at every corner of the box, with worst-case
// activation cost over the box.
inline double RobustComparator(const opf::Network& net) {
  BaseLp b = BuildBase(net);
  const dro::BoxSupport box = opf::BuildSupport(net);
  const int d_count = net.num_resources();
  for (int j = 0; j < d_count; ++j) {
    lp::VarId w = b.model.AddVariable(Name("w", j), -lp::kInf, lp::kInf, 1.0);
    for (double corner : {box.lower[j], box.upper[j]}) {
      lp::LinearExpr e(w);
      for (int g = 0; g < net.num_generators(); ++g) {
        e.Add(b.alpha[g][j], net.generators[g].c_activation * corner);
      }
      b.model.AddConstraint(Name(corner < 0 ? "wlo" : "wup", j), e, lp::Sense::kGreaterEqual,
                            0.0);
    }
  }
  for (int mask = 0; mask < (1 << d_count); ++mask) {
    std::vector<double> xi(d_count);
    for (int j = 0; j < d_count; ++j) xi[j] = (mask >> j) & 1 ? box.upper[j] : box.lower[j];
    AddJointRows(b, net, xi, "corner" + std::to_string(mask), lp::VarId{}, false, nullptr);
  }
  lp::Solution sol = lp::SimplexSolver().Solve(b.model);
  return sol.optimal() ? sol.objective : lp::kInf;
}

// Sample-average cost with the sample-average CVaR of the joint constraint.
inline double SaaCvarComparator(const opf::Network& net, const dro::MultiDataset& data,
                                double gamma) {
  BaseLp b = BuildBase(net);
  const int d_count = net.num_resources();
  const int n = data.shared_count();
  for (int j = 0; j < d_count; ++j) {
    double mean = 0.0;
    for (double v : data.samples[j]) mean += v / n;
    for (int g = 0; g < net.num_generators(); ++g) {
      b.model.AddCost(b.alpha[g][j], -net.generators[g].c_activation * mean);
    }
  }
  lp::VarId t = b.model.AddVariable("t", -lp::kInf, lp::kInf, 0.0);
  lp::LinearExpr cvar(t);
  for (int i = 0; i < n; ++i) {
    lp::VarId z = b.model.AddVariable(Name("z", i));
    cvar.Add(z, 1.0 / (gamma * n));
    std::vector<double> xi(d_count);
    for (int j = 0; j < d_count; ++j) xi[j] = data.samples[j][i];
    std::vector<lp::LinearExpr> rows;
    AddJointRows(b, net, xi, "", lp::VarId{}, false, &rows);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      lp::LinearExpr e = rows[k];
      e.Add(t, -1.0);
      e.Add(z, -1.0);
      b.model.AddConstraint(Name("saa", i, static_cast<int>(k)), e, lp::Sense::kLessEqual, 0.0);
    }
  }
  b.model.AddConstraint("cvar", cvar, lp::Sense::kLessEqual, 0.0);
  lp::Solution sol = lp::SimplexSolver().Solve(b.model);
  return sol.optimal() ? sol.objective : lp::kInf;
}

// Plain DC-OPF without uncertainty.
inline double DeterministicComparator(const opf::Network& net) {
  BaseLp b = BuildBase(net);
  lp::Solution sol = lp::SimplexSolver().Solve(b.model);
  return sol.optimal() ? sol.objective : lp::kInf;
}

// Uniform samples inside the support, shared index.
inline dro::MultiDataset UniformData(const opf::Network& net, int n, std::uint64_t seed,
                                     std::vector<double> eps) {
  const dro::BoxSupport box = opf::BuildSupport(net);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  dro::MultiDataset data;
  for (int j = 0; j < net.num_resources(); ++j) {
    std::vector<double> s;
    for (int i = 0; i < n; ++i) {
      // Concentrated around zero like forecast errors.
      const double x = 0.3 * (2 * unit(rng) - 1);
      s.push_back(x < 0 ? x * -box.lower[j] : x * box.upper[j]);
    }
    data.samples.push_back(s);
  }
  data.epsilon = std::move(eps);
  return data;
}

}  // namespace msdro::testing

#endif  // MSDRO_TESTS_OPF_ORACLES_H_
