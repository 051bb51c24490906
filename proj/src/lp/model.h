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

// Solver-neutral linear program representation.
//
// A Model is a minimization problem
//
//   min  c'x + offset
//   s.t. a_i'x  {<=, >=, =}  rhs_i     for every named constraint i
//        lower <= x <= upper
//
// Variables and constraints carry names so that solutions and duals can be
// addressed by role rather than index, and so that a plain-text listing of the
// model is readable when debugging a formulation.

#ifndef MSDRO_LP_MODEL_H_
#define MSDRO_LP_MODEL_H_

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace msdro::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct VarId {
  int index = -1;
  bool valid() const { return index >= 0; }
  friend bool operator==(VarId a, VarId b) { return a.index == b.index; }
};

struct RowId {
  int index = -1;
  bool valid() const { return index >= 0; }
  friend bool operator==(RowId a, RowId b) { return a.index == b.index; }
};

enum class Sense { kLessEqual, kGreaterEqual, kEqual };

struct Term {
  VarId var;
  double coef = 0.0;
};

// Sparse affine expression sum_k coef_k * x_k + constant.
class LinearExpr {
 public:
  LinearExpr() = default;
  LinearExpr(double constant) : constant_(constant) {}  // NOLINT
  LinearExpr(VarId var, double coef = 1.0) { Add(var, coef); }  // NOLINT

  LinearExpr& Add(VarId var, double coef) {
    if (coef != 0.0) terms_.push_back({var, coef});
    return *this;
  }
  LinearExpr& AddConstant(double value) {
    constant_ += value;
    return *this;
  }
  LinearExpr& operator+=(const LinearExpr& other);
  LinearExpr& operator-=(const LinearExpr& other);
  LinearExpr& operator*=(double scale);

  const std::vector<Term>& terms() const { return terms_; }
  double constant() const { return constant_; }

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

LinearExpr operator+(LinearExpr a, const LinearExpr& b);
LinearExpr operator-(LinearExpr a, const LinearExpr& b);
LinearExpr operator*(double scale, LinearExpr a);

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  double cost = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;  // merged, one entry per variable
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

class Model {
 public:
  VarId AddVariable(std::string name, double lower = 0.0, double upper = kInf,
                    double cost = 0.0);

  // Adds `expr sense rhs`; the constant part of `expr` is moved to the
  // right-hand side. Duplicate variables in `expr` are merged.
  RowId AddConstraint(std::string name, const LinearExpr& expr, Sense sense,
                      double rhs);

  void SetCost(VarId var, double cost);
  void AddCost(VarId var, double cost);
  void SetBounds(VarId var, double lower, double upper);
  void SetObjectiveOffset(double offset) { offset_ = offset; }

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }
  std::size_t num_nonzeros() const;

  const Variable& variable(VarId var) const { return vars_.at(var.index); }
  const Constraint& constraint(RowId row) const { return rows_.at(row.index); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  double objective_offset() const { return offset_; }

  std::optional<VarId> FindVariable(std::string_view name) const;
  std::optional<RowId> FindConstraint(std::string_view name) const;

  // Human-readable listing: objective, one line per constraint, then bounds.
  std::string ToLpListing() const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::unordered_map<std::string, int> var_index_;
  std::unordered_map<std::string, int> row_index_;
  double offset_ = 0.0;
};

}  // namespace msdro::lp

#endif  // MSDRO_LP_MODEL_H_
