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

// Acceptance report: one PASS/FAIL line per criterion, details indented.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dro/dro.h"
#include "eval/evaluation.h"
#include "lp/model.h"
#include "lp/solver.h"
#include "opf/network.h"
#include "opf/opf.h"
#include "quality/quality.h"
#include "valuation/valuation.h"

namespace {

using namespace msdro;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double Rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void Note(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    details.emplace_back(buf);
  }
  // Records a sub-check; any failing sub-check fails the criterion.
  void Require(bool ok, const char* what) {
    Note("%s %s", ok ? "ok:  " : "FAIL:", what);
    pass = pass && ok;
  }
};

struct Context {
  opf::Network net;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::unique_ptr<lp::Solver> solver;
  eval::SweepResult sweep;
  double sweep_seconds = 0.0;
};

dro::MultiDataset CellData(const Context& ctx, const eval::CellResult& cell) {
  dro::MultiDataset data = ctx.sweep.training;
  data.epsilon = cell.epsilon;
  return data;
}

Outcome RobustCorner(Context& ctx) {
  Outcome out;
  const auto start = Clock::now();
  const dro::MultiDataset data =
      eval::GenerateTrainingData(ctx.net, 20, ctx.seed, eval::ErrorMean::kZero, {1.0, 1.0});
  const opf::SolutionWithDuals sol =
      opf::SolveOpf(opf::BuildMsdroOpf(ctx.net, data, {}), ctx.solver.get());
  const double seconds = Seconds(start);
  if (!sol.optimal()) {
    out.Require(false, "robust corner solves");
    return out;
  }
  const double target = 24241.6;
  const double rel = std::abs(sol.objective - target) / target;
  out.Note("objective %.4f, reference %.1f, relative gap %.3g", sol.objective, target, rel);
  out.Require(rel <= 1e-3, "objective within 0.1% of the reference");
  out.Note("runtime %.3f s", seconds);
  out.Require(seconds < 1.0, "runtime under 1 s");
  // Sample independence: a second seed gives the same value.
  const dro::MultiDataset other = eval::GenerateTrainingData(ctx.net, 20, ctx.seed + 1000,
                                                             eval::ErrorMean::kZero, {1.0, 1.0});
  const opf::SolutionWithDuals again =
      opf::SolveOpf(opf::BuildMsdroOpf(ctx.net, other, {}), ctx.solver.get());
  out.Require(again.optimal() && Rel(again.objective, sol.objective) < 1e-8,
              "value independent of the training samples");
  return out;
}

Outcome Dichotomy(Context& ctx) {
  Outcome out;
  int checked = 0, co_bad = 0, cc_bad = 0, failed_cells = 0;
  for (const eval::CellResult& cell : ctx.sweep.cells) {
    if (!cell.ok()) {
      ++failed_cells;
      continue;
    }
    const opf::SolutionWithDuals& sol = cell.base;
    const std::vector<double> w = valuation::ActivationWeights(ctx.net, sol);
    for (int j = 0; j < ctx.net.num_resources(); ++j) {
      ++checked;
      const double co = sol.lambda_co[j], cc = sol.lambda_cc[j];
      if (!(std::abs(co) <= 1e-6 || Rel(co, w[j]) <= 1e-6)) {
        ++co_bad;
        out.Note("eps (%g, %g) feature %d: lambda_co %.9g, weight %.9g", cell.epsilon[0],
                 cell.epsilon[1], j + 1, co, w[j]);
      }
      bool slope = std::abs(cc) <= 1e-6;
      for (int k = 0; k < static_cast<int>(sol.a_prime.size()) && !slope; ++k) {
        slope = Rel(cc, std::abs(sol.a_prime[k][j])) <= 1e-6;
      }
      if (!slope) {
        ++cc_bad;
        out.Note("eps (%g, %g) feature %d: lambda_cc %.9g matches no |a'_k|", cell.epsilon[0],
                 cell.epsilon[1], j + 1, cc);
      }
    }
  }
  out.Note("%d cells, %d multipliers of each kind checked, %d cells failed to solve",
           static_cast<int>(ctx.sweep.cells.size()), checked, failed_cells);
  out.Require(failed_cells == 0, "every cell solves");
  out.Require(co_bad == 0, "lambda_co is 0 or the activation weight");
  out.Require(cc_bad == 0, "lambda_cc is 0 or some |a'_kj|");
  out.Note("sweep runtime %.2f s", ctx.sweep_seconds);
  out.Require(ctx.sweep_seconds < 30.0, "sweep under 30 s");
  return out;
}

Outcome OracleEquivalence(Context& ctx) {
  Outcome out;
  const auto start = Clock::now();
  std::mt19937_64 rng(eval::DeriveSeed(ctx.seed, "oracle"));
  std::uniform_real_distribution<double> unit(0.0, 1.0), coef(-3.0, 3.0);
  dro::WorstCaseOptions opts;
  opts.solver = ctx.solver.get();
  int p2_bad = 0, p1_bad = 0, bracket_bad = 0;
  double p2_worst = 0.0, p1_worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int d = 1 + t % 3, n = 1 + (t / 3) % 4, k = 1 + (t / 12) % 4;
    dro::BoxSupport box;
    dro::PiecewiseMaxAffine cost;
    dro::MultiDataset data;
    for (int j = 0; j < d; ++j) {
      box.lower.push_back(-0.2 - unit(rng));
      box.upper.push_back(0.2 + unit(rng));
    }
    for (int p = 0; p < k; ++p) {
      dro::AffinePiece piece;
      for (int j = 0; j < d; ++j) piece.a.push_back(coef(rng));
      piece.b = coef(rng);
      cost.pieces.push_back(piece);
    }
    for (int j = 0; j < d; ++j) {
      std::vector<double> s;
      for (int i = 0; i < n; ++i)
        s.push_back(box.lower[j] + (box.upper[j] - box.lower[j]) * unit(rng));
      data.samples.push_back(s);
      data.epsilon.push_back(0.5 * unit(rng));
    }
    const double general = dro::WcExpectationGeneral(cost, data, box, opts);
    const double standardized = dro::WcExpectationStandardized(cost, data, box, opts).value;
    const double gap = Rel(standardized, general);
    p2_worst = std::max(p2_worst, gap);
    if (gap > 1e-6) ++p2_bad;

    // Separable cost: the joint value against one-feature problems.
    dro::SeparableAffineCost linear;
    for (int j = 0; j < d; ++j) linear.c.push_back(coef(rng));
    const double joint = dro::WcExpectationSeparable(linear, data, box, opts).value;
    double sum = 0.0;
    for (int j = 0; j < d; ++j) {
      dro::PiecewiseMaxAffine one{{dro::AffinePiece{{linear.c[j]}, 0.0}}};
      dro::MultiDataset single{{data.samples[j]}, {data.epsilon[j]}};
      dro::BoxSupport interval{{box.lower[j]}, {box.upper[j]}};
      sum += dro::WcExpectationGeneral(one, single, interval, opts);
    }
    p1_worst = std::max(p1_worst, Rel(joint, sum));
    if (Rel(joint, sum) > 1e-6) ++p1_bad;

    const double robust = dro::RobustValue(cost, box);
    const double tol = 1e-7 * std::max(1.0, std::abs(robust));
    if (general < dro::ProductSampleAverage(cost, data) - tol ||
        standardized < dro::SharedSampleAverage(cost, data) - tol || general > robust + tol ||
        standardized > robust + tol) {
      ++bracket_bad;
    }
  }
  const double seconds = Seconds(start);
  out.Note("shared-index form vs product form: %d of 50 differ, worst relative gap %.3g", p2_bad,
           p2_worst);
  out.Require(p2_bad == 0, "shared-index value equals product value");
  out.Note("separable joint vs per-feature sum: worst relative gap %.3g", p1_worst);
  out.Require(p1_bad == 0, "separable value is the sum of one-feature values");
  out.Require(bracket_bad == 0, "values between sample average and robust value");
  out.Note("runtime %.2f s", seconds);
  out.Require(seconds < 60.0, "runtime under 60 s");
  return out;
}

Outcome Exactness(Context& ctx) {
  Outcome out;
  dro::WorstCaseOptions opts;
  opts.solver = ctx.solver.get();
  const dro::BoxSupport support = opf::BuildSupport(ctx.net);
  double worst = 0.0;
  int checked = 0;
  for (const eval::CellResult& cell : ctx.sweep.cells) {
    if (!cell.ok()) continue;
    const dro::MultiDataset data = CellData(ctx, cell);
    for (const opf::SolutionWithDuals* sol : {&cell.base, &cell.final}) {
      dro::SeparableAffineCost cost;
      for (double w : valuation::ActivationWeights(ctx.net, *sol)) cost.c.push_back(-w);
      const double wc = dro::WcExpectationSeparable(cost, data, support, opts).value;
      worst = std::max(worst, Rel(sol->activation_cost, wc));
      ++checked;
    }
  }
  out.Note("%d solutions checked, worst relative difference %.3g", checked, worst);
  out.Require(checked > 0 && worst <= 1e-6, "activation cost equals the worst-case expectation");
  return out;
}

Outcome Envelope(Context& ctx) {
  Outcome out;
  std::mt19937_64 rng(eval::DeriveSeed(ctx.seed, "envelope"));
  std::uniform_real_distribution<double> log_eps(std::log(1e-3), std::log(0.5));
  int good = 0, skipped = 0, bad = 0, draws = 0;
  while (good + bad < 10 && draws < 100) {
    ++draws;
    const std::vector<double> eps = {std::exp(log_eps(rng)), std::exp(log_eps(rng))};
    const int feature = static_cast<int>(rng() % 2);
    const dro::MultiDataset data = eval::GenerateTrainingData(
        ctx.net, 20, eval::DeriveSeed(ctx.seed, "envelope", {double(draws)}),
        eval::ErrorMean::kZero, eps);
    const valuation::EnvelopeResult r =
        valuation::EnvelopeCheck(ctx.net, data, 0.05, feature, 0.0, ctx.solver.get());
    if (r.degenerate) {
      ++skipped;
      out.Note("skipped degenerate point eps (%.4g, %.4g) feature %d", eps[0], eps[1],
               feature + 1);
      continue;
    }
    const double rel = Rel(r.finite_difference, r.analytic);
    (rel <= 1e-3 ? good : bad)++;
    out.Note("eps (%.4g, %.4g) feature %d: difference quotient %.6g, multipliers %.6g, rel %.2g",
             eps[0], eps[1], feature + 1, r.finite_difference, r.analytic, rel);
  }
  out.Note("%d agree, %d disagree, %d degenerate points skipped", good, bad, skipped);
  out.Require(good == 10, "10 non-degenerate points agree within 1e-3");
  return out;
}

Outcome OutOfSample(Context& ctx) {
  Outcome out;
  const int n = ctx.sweep.config.oos_samples;
  const double bound = 0.05 + 3.0 * std::sqrt(0.05 * 0.95 / n);
  int over = 0, checked = 0;
  for (const eval::CellResult& cell : ctx.sweep.cells) {
    if (!cell.ok()) continue;
    ++checked;
    const bool ok = cell.oos.probability <= bound;
    if (!ok) ++over;
    out.Note("eps (%g, %g): %.1f%%%s", cell.epsilon[0], cell.epsilon[1],
             100.0 * cell.oos.probability, ok ? "" : "  above bound");
  }
  out.Note("bound 5%% + 3 standard errors = %.2f%% over %d samples", 100.0 * bound, n);
  out.Require(checked == static_cast<int>(ctx.sweep.cells.size()) && over == 0,
              "every cell with eps > 0 within the bound");
  eval::SweepConfig saa = ctx.sweep.config;
  saa.grid = {0.0};
  const eval::SweepResult zero = eval::RunSweep(ctx.net, saa, ctx.solver.get());
  if (!zero.cells.empty() && zero.cells[0].ok()) {
    out.Note("sample-average cell eps (0, 0): %.1f%% (reported, not bounded)",
             100.0 * zero.cells[0].oos.probability);
  } else {
    out.Note("sample-average cell eps (0, 0): %s",
             zero.cells.empty() ? "missing" : zero.cells[0].status.c_str());
  }
  return out;
}

Outcome Monotonicity(Context& ctx) {
  Outcome out;
  const std::vector<double> refine = {0.001, 0.005623, 0.031623, 0.177828, 1.0};
  int series = 0, breaks = 0;
  for (int j = 0; j < 2; ++j) {
    for (double other : ctx.sweep.config.grid) {
      ++series;
      double last = -INFINITY;
      for (double e : refine) {
        std::vector<double> eps = {other, other};
        eps[j] = e;
        dro::MultiDataset data = ctx.sweep.training;
        data.epsilon = eps;
        const opf::SolutionWithDuals sol =
            opf::SolveOpf(opf::BuildMsdroOpf(ctx.net, data, {}), ctx.solver.get());
        if (!sol.optimal()) {
          ++breaks;
          out.Note("eps (%g, %g) did not solve", eps[0], eps[1]);
          break;
        }
        if (sol.objective < last - 1e-8 * std::max(1.0, std::abs(last))) {
          ++breaks;
          out.Note("feature %d, other eps %g: %.10g after %.10g at eps %g", j + 1, other,
                   sol.objective, last, e);
        }
        last = sol.objective;
      }
    }
  }
  out.Note("%d series of 5 points, %d decreases", series, breaks);
  out.Require(breaks == 0, "objective non-decreasing in each eps (slack 1e-8 relative)");
  return out;
}

double TransportLp(const std::vector<double>& a, const std::vector<double>& b) {
  lp::Model model;
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<lp::VarId>> plan(n, std::vector<lp::VarId>(n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      plan[i][k] = model.AddVariable("t" + std::to_string(i) + "_" + std::to_string(k), 0,
                                     lp::kInf, std::abs(a[i] - b[k]));
  for (int i = 0; i < n; ++i) {
    lp::LinearExpr row, col;
    for (int k = 0; k < n; ++k) {
      row.Add(plan[i][k], 1.0);
      col.Add(plan[k][i], 1.0);
    }
    model.AddConstraint("a" + std::to_string(i), row, lp::Sense::kEqual, 1.0 / n);
    model.AddConstraint("b" + std::to_string(i), col, lp::Sense::kEqual, 1.0 / n);
  }
  const lp::Solution sol = lp::MakeSolver("simplex")->Solve(model);
  return sol.optimal() ? sol.objective : NAN;
}

Outcome DataQuality(Context& ctx) {
  Outcome out;
  std::mt19937_64 rng(eval::DeriveSeed(ctx.seed, "quality"));
  std::normal_distribution<double> draw(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 8;
    std::vector<double> a(n), b(n);
    for (double& v : a) v = draw(rng);
    for (double& v : b) v = 0.5 * draw(rng) + 0.2;
    const double gap = std::abs(quality::EmpiricalWasserstein1d(a, b, 1.0) - TransportLp(a, b));
    worst = std::isnan(gap) ? INFINITY : std::max(worst, gap);
  }
  out.Note("100 instances, worst absolute difference %.3g", worst);
  out.Require(worst <= 1e-12, "sorted formula equals the transport LP");

  const double scale = 0.05;
  const double eps =
      quality::AdditiveNoiseBound(quality::NoiseModel::Laplace(scale), 1.0, quality::Norm::kL1)
          .epsilon;
  std::exponential_distribution<double> expo(1.0 / scale);
  const int n = 1000000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = std::abs(expo(rng) - expo(rng));
    s += v;
    s2 += v * v;
  }
  const double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
  out.Note("Laplace(%.2f) bound %.6g, Monte Carlo %.6g +- %.2g", scale, eps, mean, se);
  out.Require(std::abs(mean - eps) <= 3.0 * se, "Laplace bound within 3 standard errors");
  return out;
}

Outcome Qualitative(Context& ctx) {
  Outcome out;
  const int gens = ctx.net.num_generators();
  int single_owner = 0, owner_bad = 0, alpha52 = 0, alpha52_bad = 0, product_bad = 0;
  int cells = 0;
  std::vector<int> at_max(gens, 0);
  for (const eval::CellResult& cell : ctx.sweep.cells) {
    if (!cell.ok()) continue;
    ++cells;
    const opf::SolutionWithDuals& sol = cell.base;
    const dro::MultiDataset data = CellData(ctx, cell);
    const std::vector<double> w = valuation::ActivationWeights(ctx.net, sol);
    const std::vector<valuation::OfflinePrediction> pred =
        valuation::OfflineUsefulness(data, opf::BuildSupport(ctx.net), w);
    for (int j = 0; j < ctx.net.num_resources(); ++j) {
      const double co = sol.lambda_co[j];
      for (int g = 0; g < gens; ++g) {
        if (std::abs(sol.decision.alpha[g][j] - 1.0) > 1e-9) continue;
        // One unit carries the whole resource: the multiplier is its price
        // below the threshold and zero above it.
        ++single_owner;
        const double price = ctx.net.generators[g].c_activation;
        const bool ok = pred[j].degenerate ||
                        (data.epsilon[j] < pred[j].threshold ? Rel(co, price) <= 1e-6
                                                             : std::abs(co) <= 1e-6);
        if (!ok) {
          ++owner_bad;
          out.Note("eps (%g, %g): alpha_%d%d = 1, lambda_co %.6g, price %.6g", cell.epsilon[0],
                   cell.epsilon[1], g + 1, j + 1, co, price);
        }
        if (g == 4 && j == 1) {
          ++alpha52;
          if (!ok || Rel(co, 8000.0) > 1e-6) ++alpha52_bad;
        }
      }
      const valuation::FeatureValue& fv = cell.data_value.features[j];
      if (fv.lambda_co * data.epsilon[j] != co * data.epsilon[j]) ++product_bad;
    }
    for (int g = 0; g < gens; ++g) {
      if (sol.decision.p[g] >= ctx.net.generators[g].p_max - 1e-6) ++at_max[g];
    }
  }
  out.Note("training seed %llu (documented seed of this report)",
           static_cast<unsigned long long>(ctx.seed));
  out.Note("%d single-owner (alpha_gj = 1) cases; alpha_52 = 1 in %d cells", single_owner,
           alpha52);
  out.Require(owner_bad == 0 && alpha52_bad == 0,
              "lambda_co equals the owner's activation price below the threshold");
  out.Require(product_bad == 0, "eps_j lambda_co_j reported as the product");
  for (int g = 0; g < gens; ++g)
    out.Note("g%d at p_max in %d of %d cells", g + 1, at_max[g], cells);
  out.Require(cells > 0 && at_max[0] == cells && at_max[1] == cells,
              "g1 and g2 at p_max in every cell");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance report"};
  std::string network = MSDRO_DEFAULT_NETWORK;
  std::string backend = "auto";
  std::vector<int> expect_fail;
  Context ctx;
  app.add_option("--network", network, "Network JSON")->capture_default_str();
  app.add_option("--seed", ctx.seed, "Training seed")->capture_default_str();
  app.add_option("--jobs", ctx.jobs, "Sweep worker threads")->capture_default_str();
  app.add_option("--solver", backend, "LP backend")->capture_default_str();
  app.add_option("--expect-fail", expect_fail,
                 "Criteria known to fail; exit status reports only surprises")
      ->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  try {
    ctx.net = opf::LoadNetwork(network);
    ctx.solver = lp::MakeSolver(backend);
    eval::SweepConfig config;
    config.seed = ctx.seed;
    config.jobs = ctx.jobs;
    const auto start = Clock::now();
    ctx.sweep = eval::RunSweep(ctx.net, config, ctx.solver.get());
    ctx.sweep_seconds = Seconds(start);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance: %s\n", e.what());
    return 2;
  }

  const std::vector<std::pair<const char*, std::function<Outcome(Context&)>>> criteria = {
      {"robust corner objective", RobustCorner},
      {"multiplier dichotomies over the sweep", Dichotomy},
      {"worst-case oracle equivalence", OracleEquivalence},
      {"exact activation-cost block", Exactness},
      {"envelope derivative", Envelope},
      {"out-of-sample violation", OutOfSample},
      {"monotone in the radii", Monotonicity},
      {"data-quality unit checks", DataQuality},
      {"qualitative table pattern", Qualitative},
  };
  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  int surprises = 0, failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome out;
    try {
      out = criteria[i].second(ctx);
    } catch (const std::exception& e) {
      out.pass = false;
      out.Note("error: %s", e.what());
    }
    const bool marked = expected.count(id) > 0;
    std::printf("criterion %d: %s  %s%s\n", id, out.pass ? "PASS" : "FAIL", criteria[i].first,
                !out.pass && marked ? "  (known)" : "");
    for (const std::string& line : out.details) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
    if (out.pass == marked) ++surprises;
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return surprises == 0 ? 0 : 1;
}
