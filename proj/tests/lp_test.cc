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

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "common/error.h"
#include "gtest/gtest.h"
#include "lp/highs_backend.h"
#include "lp/model.h"
#include "lp/simplex.h"
#include "lp/solver.h"

namespace msdro::lp {
namespace {

TEST(LinearExpr, MergesDuplicatesAndMovesConstant) {
  Model model;
  VarId x = model.AddVariable("x");
  LinearExpr e(x, 2.0);
  e.Add(x, 3.0).AddConstant(4.0);
  RowId r = model.AddConstraint("c", e, Sense::kLessEqual, 10.0);
  const Constraint& row = model.constraint(r);
  ASSERT_EQ(row.terms.size(), 1u);
  EXPECT_DOUBLE_EQ(row.terms[0].coef, 5.0);
  EXPECT_DOUBLE_EQ(row.rhs, 6.0);
}

TEST(Model, RejectsDuplicateNames) {
  Model model;
  model.AddVariable("x");
  EXPECT_THROW(model.AddVariable("x"), Error);
}

TEST(Model, ListingNamesRowsAndBounds) {
  Model model;
  VarId x = model.AddVariable("x", 0, 4, 1.0);
  VarId y = model.AddVariable("y", -kInf, kInf, -2.0);
  model.AddConstraint("cap", LinearExpr(x) + LinearExpr(y), Sense::kLessEqual, 3);
  const std::string listing = model.ToLpListing();
  EXPECT_NE(listing.find("cap: x + y <= 3"), std::string::npos) << listing;
  EXPECT_NE(listing.find("y free"), std::string::npos) << listing;
  EXPECT_NE(listing.find("0 <= x <= 4"), std::string::npos) << listing;
}

TEST(Simplex, TextbookMaximization) {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), value 36.
  Model model;
  VarId x = model.AddVariable("x", 0, kInf, -3);
  VarId y = model.AddVariable("y", 0, kInf, -5);
  RowId r1 = model.AddConstraint("r1", LinearExpr(x), Sense::kLessEqual, 4);
  RowId r2 = model.AddConstraint("r2", LinearExpr(y, 2), Sense::kLessEqual, 12);
  RowId r3 = model.AddConstraint("r3", LinearExpr(x, 3) + LinearExpr(y, 2),
                                 Sense::kLessEqual, 18);
  Solution sol = SimplexSolver().Solve(model);
  ASSERT_TRUE(sol.optimal()) << sol.message;
  EXPECT_NEAR(sol.objective, -36, 1e-9);
  EXPECT_NEAR(sol.value(x), 2, 1e-9);
  EXPECT_NEAR(sol.value(y), 6, 1e-9);
  // Shadow prices of the maximization are (0, 3/2, 1); minimization flips sign.
  EXPECT_NEAR(sol.dual(r1), 0.0, 1e-9);
  EXPECT_NEAR(sol.dual(r2), -1.5, 1e-9);
  EXPECT_NEAR(sol.dual(r3), -1.0, 1e-9);
  EXPECT_NEAR(DualObjective(model, sol), sol.objective, 1e-9);
}

TEST(Simplex, EqualityAndGreaterRows) {
  // min x + 2y s.t. x + y = 3, x - y >= -1, y >= 0.2, x <= 2.5.
  Model model;
  VarId x = model.AddVariable("x", -kInf, 2.5, 1);
  VarId y = model.AddVariable("y", 0.2, kInf, 2);
  RowId bal = model.AddConstraint("bal", LinearExpr(x) + LinearExpr(y), Sense::kEqual, 3);
  model.AddConstraint("diff", LinearExpr(x) - LinearExpr(y), Sense::kGreaterEqual, -1);
  Solution sol = SimplexSolver().Solve(model);
  ASSERT_TRUE(sol.optimal()) << sol.message;
  EXPECT_NEAR(sol.value(x), 2.5, 1e-9);
  EXPECT_NEAR(sol.value(y), 0.5, 1e-9);
  EXPECT_NEAR(sol.objective, 3.5, 1e-9);
  // Raising the balance rhs is served by y at cost 2.
  EXPECT_NEAR(sol.dual(bal), 2.0, 1e-9);
  EXPECT_NEAR(DualObjective(model, sol), sol.objective, 1e-9);
}

TEST(Simplex, DetectsInfeasibility) {
  Model model;
  VarId x = model.AddVariable("x", 0, 1);
  model.AddConstraint("need", LinearExpr(x), Sense::kGreaterEqual, 2);
  EXPECT_EQ(SimplexSolver().Solve(model).status, SolveStatus::kInfeasible);
}

TEST(Simplex, DetectsUnboundedness) {
  Model model;
  VarId x = model.AddVariable("x", 0, kInf, -1);
  VarId y = model.AddVariable("y", 0, kInf, 0);
  model.AddConstraint("r", LinearExpr(x) - LinearExpr(y), Sense::kLessEqual, 1);
  EXPECT_EQ(SimplexSolver().Solve(model).status, SolveStatus::kUnbounded);
}

TEST(Simplex, FreeVariablesAndEpigraph) {
  // min t s.t. t >= x - 1, t >= 1 - x, x free: optimum t = 0 at x = 1.
  Model model;
  VarId x = model.AddVariable("x", -kInf, kInf, 0);
  VarId t = model.AddVariable("t", -kInf, kInf, 1);
  model.AddConstraint("a", LinearExpr(t) - LinearExpr(x), Sense::kGreaterEqual, -1);
  model.AddConstraint("b", LinearExpr(t) + LinearExpr(x), Sense::kGreaterEqual, 1);
  Solution sol = SimplexSolver().Solve(model);
  ASSERT_TRUE(sol.optimal());
  EXPECT_NEAR(sol.objective, 0, 1e-12);
  EXPECT_NEAR(sol.value(x), 1, 1e-12);
}

TEST(Simplex, NoConstraints) {
  Model model;
  model.AddVariable("x", -1, 2, 3);
  model.AddVariable("y", -1, 2, -1);
  Solution sol = SimplexSolver().Solve(model);
  ASSERT_TRUE(sol.optimal());
  EXPECT_NEAR(sol.objective, -5, 1e-12);
}

// Brute-force oracle: enumerate every basic point of a tiny box-bounded LP
// min c'x s.t. Ax <= b, 0 <= x <= u.
double EnumerateVertices(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                         const Eigen::VectorXd& c, double box) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(b.size());
  // Stack all half-spaces g'x <= h including the box.
  Eigen::MatrixXd g(m + 2 * n, n);
  Eigen::VectorXd h(m + 2 * n);
  g.topRows(m) = a;
  h.head(m) = b;
  for (int j = 0; j < n; ++j) {
    g.row(m + 2 * j).setZero();
    g(m + 2 * j, j) = -1;
    h[m + 2 * j] = 0;
    g.row(m + 2 * j + 1).setZero();
    g(m + 2 * j + 1, j) = 1;
    h[m + 2 * j + 1] = box;
  }
  const int rows = m + 2 * n;
  double best = kInf;
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int depth, int from) {
    if (depth == n) {
      Eigen::MatrixXd sub(n, n);
      Eigen::VectorXd rhs(n);
      for (int k = 0; k < n; ++k) {
        sub.row(k) = g.row(pick[k]);
        rhs[k] = h[pick[k]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
      if (!lu.isInvertible()) return;
      Eigen::VectorXd x = lu.solve(rhs);
      if (((g * x - h).array() > 1e-9).any()) return;
      best = std::min(best, c.dot(x));
      return;
    }
    for (int r = from; r < rows; ++r) {
      pick[depth] = r;
      rec(depth + 1, r + 1);
    }
  };
  rec(0, 0);
  return best;
}

TEST(Simplex, MatchesVertexEnumerationOnRandomLps) {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> coef(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 3;
    const int m = 2 + trial % 5;
    Eigen::MatrixXd a(m, n);
    Eigen::VectorXd b(m), c(n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = coef(rng);
      b[i] = std::abs(coef(rng));
    }
    for (int j = 0; j < n; ++j) c[j] = coef(rng);
    Model model;
    std::vector<VarId> x;
    for (int j = 0; j < n; ++j) x.push_back(model.AddVariable("x" + std::to_string(j), 0, 5, c[j]));
    for (int i = 0; i < m; ++i) {
      LinearExpr e;
      for (int j = 0; j < n; ++j) e.Add(x[j], a(i, j));
      model.AddConstraint("r" + std::to_string(i), e, Sense::kLessEqual, b[i]);
    }
    Solution sol = SimplexSolver().Solve(model);
    ASSERT_TRUE(sol.optimal()) << "trial " << trial;
    EXPECT_NEAR(sol.objective, EnumerateVertices(a, b, c, 5), 1e-8) << "trial " << trial;
    EXPECT_LE(MaxPrimalViolation(model, sol.x), 1e-8);
    EXPECT_NEAR(DualObjective(model, sol), sol.objective, 1e-8);
    for (int i = 0; i < m; ++i) EXPECT_LE(sol.row_dual[i], 1e-9);
  }
}

TEST(Simplex, DegenerateTransportationProblem) {
  // Balanced 4x4 transportation problem with equal supplies: every basis is
  // highly degenerate.
  const int k = 4;
  Model model;
  std::vector<std::vector<VarId>> x(k, std::vector<VarId>(k));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      x[i][j] = model.AddVariable("x" + std::to_string(i) + std::to_string(j), 0,
                                  kInf, std::abs(i - j));
    }
  }
  for (int i = 0; i < k; ++i) {
    LinearExpr row, col;
    for (int j = 0; j < k; ++j) {
      row.Add(x[i][j], 1);
      col.Add(x[j][i], 1);
    }
    model.AddConstraint("s" + std::to_string(i), row, Sense::kEqual, 1);
    model.AddConstraint("d" + std::to_string(i), col, Sense::kEqual, 1);
  }
  Solution sol = SimplexSolver().Solve(model);
  ASSERT_TRUE(sol.optimal());
  EXPECT_NEAR(sol.objective, 0.0, 1e-12);
  EXPECT_NEAR(DualObjective(model, sol), 0.0, 1e-9);
}

TEST(Backends, FactoryRejectsUnknownName) {
  EXPECT_THROW(MakeSolver("cplex"), Error);
  EXPECT_EQ(MakeSolver("simplex")->name(), "simplex");
}

TEST(Backends, HighsAgreesWithSimplexWhenAvailable) {
  if (!HighsAvailable()) GTEST_SKIP() << "libhighs not found";
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-3, 3);
  HighsSolver highs;
  for (int trial = 0; trial < 300; ++trial) {
    Model model;
    const int n = 6, m = 8;
    std::vector<VarId> x;
    for (int j = 0; j < n; ++j) x.push_back(model.AddVariable("x" + std::to_string(j), -2, 4, coef(rng)));
    for (int i = 0; i < m; ++i) {
      LinearExpr e;
      for (int j = 0; j < n; ++j) e.Add(x[j], coef(rng));
      model.AddConstraint("r" + std::to_string(i), e,
                          i % 3 == 0 ? Sense::kGreaterEqual : Sense::kLessEqual,
                          i % 3 == 0 ? -std::abs(coef(rng)) - 20 : std::abs(coef(rng)) + 20);
    }
    Solution a = SimplexSolver().Solve(model);
    Solution b = highs.Solve(model);
    ASSERT_TRUE(a.optimal()) << "trial " << trial << ": " << a.message;
    ASSERT_TRUE(b.optimal()) << "trial " << trial << ": " << SolveStatusName(b.status)
                             << " " << b.message;
    EXPECT_NEAR(a.objective, b.objective, 1e-7);
    // Same sign convention for duals: strong duality holds with either set.
    EXPECT_NEAR(DualObjective(model, b), b.objective, 1e-6);
    EXPECT_NEAR(DualObjective(model, a), a.objective, 1e-6);
    EXPECT_LE(MaxPrimalViolation(model, a.x), 1e-8);
  }
}

}  // namespace
}  // namespace msdro::lp
