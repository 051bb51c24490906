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

#include "valuation/valuation.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "common/error.h"

namespace msdro::valuation {
namespace {

void RequireDuals(const opf::SolutionWithDuals& sol, int d_count) {
  Require(sol.optimal(), ErrorCode::kExtraction, "solution is not optimal");
  const opf::OpfDuals& y = sol.duals;
  const int n = static_cast<int>(y.eta.size());
  bool ok = static_cast<int>(sol.lambda_co.size()) == d_count &&
            static_cast<int>(sol.lambda_cc.size()) == d_count && n > 0 &&
            static_cast<int>(y.mu_up.size()) == d_count &&
            static_cast<int>(y.mu_lo.size()) == d_count &&
            static_cast<int>(y.rho_up.size()) == d_count &&
            static_cast<int>(y.rho_lo.size()) == d_count &&
            static_cast<int>(sol.a_prime.size()) == sol.num_cvar_rows() + 1 &&
            static_cast<int>(sol.decision.alpha.size()) > 0;
  for (int j = 0; ok && j < d_count; ++j) {
    ok = static_cast<int>(y.mu_up[j].size()) == n && static_cast<int>(y.mu_lo[j].size()) == n &&
         static_cast<int>(y.rho_up[j].size()) == n && static_cast<int>(y.rho_lo[j].size()) == n;
  }
  Require(ok, ErrorCode::kExtraction, "solution is missing dual values");
}

bool Near(double a, double b) { return std::fabs(a - b) <= kLambdaTol * std::max(1.0, std::fabs(b)); }

void WriteKey(std::ostream& out, const std::vector<double>& key) {
  for (double v : key) out << v << ',';
}

void WriteKeyHeader(std::ostream& out, std::size_t size) {
  for (std::size_t j = 0; j < size; ++j) out << "eps_" << j + 1 << ',';
}

}  // namespace

const char* RegimeName(Regime regime) {
  switch (regime) {
    case Regime::kRobustIgnored:
      return "robust-ignored";
    case Regime::kDataInformed:
      return "data-informed";
    case Regime::kMixed:
      return "mixed";
  }
  return "unknown";
}

std::vector<double> ActivationWeights(const opf::Network& network,
                                      const opf::SolutionWithDuals& solution) {
  const int d_count = network.num_resources();
  std::vector<double> w(d_count, 0.0);
  Require(static_cast<int>(solution.decision.alpha.size()) == network.num_generators(),
          ErrorCode::kExtraction, "solution has no participation factors");
  for (int g = 0; g < network.num_generators(); ++g) {
    for (int j = 0; j < d_count; ++j)
      w[j] += network.generators[g].c_activation * solution.decision.alpha[g][j];
  }
  return w;
}

std::vector<OfflinePrediction> OfflineUsefulness(const dro::MultiDataset& data,
                                                 const dro::BoxSupport& support,
                                                 const std::vector<double>& activation_weight) {
  const int d_count = data.dimension();
  Require(support.dimension() == d_count && static_cast<int>(data.epsilon.size()) == d_count &&
              static_cast<int>(activation_weight.size()) == d_count,
          ErrorCode::kInput, "dimension mismatch");
  std::vector<OfflinePrediction> out(d_count);
  for (int j = 0; j < d_count; ++j) {
    const std::vector<double>& s = data.samples[j];
    Require(!s.empty(), ErrorCode::kInput, "feature without samples");
    double sum = 0.0;
    for (double x : s) sum += x - support.lower[j];
    out[j].threshold = sum / static_cast<double>(s.size());
    const double gap = data.epsilon[j] - out[j].threshold;
    out[j].degenerate = std::fabs(gap) <= kThresholdBand;
    out[j].predicted_lambda_co = gap >= 0 ? 0.0 : activation_weight[j];
  }
  return out;
}

std::vector<double> PhiFromEta(const opf::SolutionWithDuals& solution) {
  const int n = static_cast<int>(solution.duals.eta.size());
  std::vector<double> out;
  for (const std::vector<double>& row : solution.duals.eta) {
    double sum = 0.0;
    for (double v : row) sum += v;
    out.push_back(n * sum);
  }
  return out;
}

DataValueReport MarginalDataValue(const opf::SolutionWithDuals& solution,
                                  const opf::Network& network, const dro::MultiDataset& data) {
  const int d_count = network.num_resources();
  RequireDuals(solution, d_count);
  Require(data.dimension() == d_count, ErrorCode::kInput, "dimension mismatch");
  const std::vector<double> w = ActivationWeights(network, solution);
  const std::vector<OfflinePrediction> offline =
      OfflineUsefulness(data, opf::BuildSupport(network), w);
  const double phi = solution.duals.phi;
  DataValueReport report;
  for (int j = 0; j < d_count; ++j) {
    FeatureValue f;
    f.feature = j;
    f.lambda_co = solution.lambda_co[j];
    f.lambda_cc = solution.lambda_cc[j];
    f.phi = phi;
    f.marginal_value = f.lambda_co + phi * f.lambda_cc;
    f.threshold = offline[j].threshold;
    f.activation_weight = w[j];
    const bool co_zero = std::fabs(f.lambda_co) <= kLambdaTol;
    const bool cc_zero = std::fabs(f.lambda_cc) <= kLambdaTol;
    bool cc_extreme = cc_zero;
    for (int k = 0; k < solution.num_cvar_rows() && !cc_extreme; ++k)
      cc_extreme = Near(f.lambda_cc, std::fabs(solution.a_prime[k][j]));
    if (co_zero && cc_zero) {
      f.regime = Regime::kRobustIgnored;
    } else if ((co_zero || Near(f.lambda_co, w[j])) && cc_extreme && !offline[j].degenerate) {
      f.regime = Regime::kDataInformed;
    } else {
      f.regime = Regime::kMixed;
    }
    report.features.push_back(f);
  }
  return report;
}

ForecastValueReport ForecastValueDecomposition(const opf::SolutionWithDuals& solution,
                                               const opf::Network& network,
                                               const dro::MultiDataset& data) {
  const int d_count = network.num_resources();
  RequireDuals(solution, d_count);
  Require(static_cast<int>(data.epsilon.size()) == d_count, ErrorCode::kInput,
          "dimension mismatch");
  const opf::OpfDuals& y = solution.duals;
  const std::vector<double> w = ActivationWeights(network, solution);
  const int n = static_cast<int>(y.eta.size());
  const int k_count = solution.num_cvar_rows();
  ForecastValueReport report;
  for (int j = 0; j < d_count; ++j) {
    const opf::Resource& res = network.resources[j];
    ForecastValue f;
    f.feature = j;
    f.lmp_term = y.pi;
    for (int l = 0; l < network.num_lines(); ++l)
      f.lmp_term += network.maps.resource(l, j) * (y.beta_up[l] - y.beta_lo[l]);
    const double lco = solution.lambda_co[j];
    const double lcc = solution.lambda_cc[j];
    double balancing = 0.0, reserve = 0.0;
    for (int i = 0; i < n; ++i) {
      balancing += y.mu_up[j][i] * (w[j] + lco) + y.mu_lo[j][i] * (w[j] - lco);
      for (int k = 0; k < k_count; ++k) {
        const double a = solution.a_prime[k][j];
        reserve += y.rho_up[j][i][k] * (lcc - a) - y.rho_lo[j][i][k] * (lcc + a);
      }
    }
    f.balancing_term = res.kappa * balancing;
    f.reserve_term = res.kappa * reserve;
    f.pi_f = f.lmp_term - f.balancing_term - f.reserve_term;
    f.pi_d = lco + y.phi * lcc;
    f.remuneration = res.u * f.pi_f - data.epsilon[j] * f.pi_d;
    report.features.push_back(f);
  }
  return report;
}

std::string ActiveSetSignature(const opf::SolutionWithDuals& solution) {
  std::string sig;
  auto bit = [&sig](double v) { sig.push_back(std::fabs(v) > kLambdaTol ? '1' : '0'); };
  for (double v : solution.lambda_co) bit(v);
  sig.push_back('|');
  for (double v : solution.lambda_cc) bit(v);
  sig.push_back('|');
  for (const std::vector<double>& row : solution.decision.alpha)
    for (double v : row) bit(v);
  sig.push_back('|');
  bit(solution.duals.phi);
  return sig;
}

EnvelopeResult EnvelopeCheck(const opf::Network& network, const dro::MultiDataset& data,
                             double gamma, int feature, double delta, const lp::Solver* solver) {
  Require(feature >= 0 && feature < data.dimension() &&
              feature < static_cast<int>(data.epsilon.size()),
          ErrorCode::kInput, "feature index out of range");
  const double eps = data.epsilon[feature];
  const bool forward = eps <= 0.0;
  if (delta <= 0.0) delta = forward ? 1e-6 : 1e-5 * eps;
  if (!forward) delta = std::min(delta, eps);
  opf::OpfOptions options;
  options.gamma = gamma;
  auto solve = [&](double e) {
    dro::MultiDataset d = data;
    d.epsilon[feature] = e;
    opf::SolutionWithDuals s = opf::SolveOpf(opf::BuildMsdroOpf(network, d, options), solver);
    if (!s.optimal()) Fail(ErrorCode::kSolver, "envelope solve failed: " + s.message);
    return s;
  };
  const opf::SolutionWithDuals base = solve(eps);
  const opf::SolutionWithDuals up = solve(eps + delta);
  EnvelopeResult r;
  r.base_objective = base.objective;
  r.delta = delta;
  r.analytic = base.lambda_co[feature] + base.duals.phi * base.lambda_cc[feature];
  const double tol = 1e-4 * std::max(1.0, std::fabs(r.analytic));
  const double right = (up.objective - base.objective) / delta;
  if (forward) {
    r.finite_difference = right;
    r.degenerate = ActiveSetSignature(base) != ActiveSetSignature(up);
    return r;
  }
  const opf::SolutionWithDuals down = solve(eps - delta);
  const double left = (base.objective - down.objective) / delta;
  r.finite_difference = (up.objective - down.objective) / (2 * delta);
  r.degenerate = std::fabs(right - left) > tol ||
                 ActiveSetSignature(down) != ActiveSetSignature(up);
  return r;
}

void WriteDataValueCsv(std::ostream& out, const DataValueReport& report,
                       const std::vector<double>& key, bool header) {
  if (header) {
    WriteKeyHeader(out, key.size());
    out << "feature,lambda_co,lambda_cc,phi,marginal_value,threshold,regime\n";
  }
  for (const FeatureValue& f : report.features) {
    WriteKey(out, key);
    out << f.feature + 1 << ',' << f.lambda_co << ',' << f.lambda_cc << ',' << f.phi << ','
        << f.marginal_value << ',' << f.threshold << ',' << RegimeName(f.regime) << '\n';
  }
}

void WriteForecastValueCsv(std::ostream& out, const ForecastValueReport& report,
                           const std::vector<double>& key, bool header) {
  if (header) {
    WriteKeyHeader(out, key.size());
    out << "feature,lmp_term,balancing_term,reserve_term,pi_F,pi_D,remuneration\n";
  }
  for (const ForecastValue& f : report.features) {
    WriteKey(out, key);
    out << f.feature + 1 << ',' << f.lmp_term << ',' << f.balancing_term << ','
        << f.reserve_term << ',' << f.pi_f << ',' << f.pi_d << ',' << f.remuneration << '\n';
  }
}

}  // namespace msdro::valuation
