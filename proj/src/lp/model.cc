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

#include "lp/model.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "common/error.h"

namespace msdro::lp {

LinearExpr& LinearExpr::operator+=(const LinearExpr& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  constant_ += other.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& other) {
  for (const Term& t : other.terms_) terms_.push_back({t.var, -t.coef});
  constant_ -= other.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator*=(double scale) {
  for (Term& t : terms_) t.coef *= scale;
  constant_ *= scale;
  return *this;
}

LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
LinearExpr operator*(double scale, LinearExpr a) { return a *= scale; }

VarId Model::AddVariable(std::string name, double lower, double upper,
                         double cost) {
  Require(!std::isnan(lower) && !std::isnan(upper) && lower <= upper,
          ErrorCode::kInput, "variable '" + name + "' has invalid bounds");
  Require(std::isfinite(cost), ErrorCode::kInput,
          "variable '" + name + "' has non-finite cost");
  const int index = num_variables();
  Require(var_index_.emplace(name, index).second, ErrorCode::kInput,
          "duplicate variable name '" + name + "'");
  vars_.push_back({std::move(name), lower, upper, cost});
  return VarId{index};
}

RowId Model::AddConstraint(std::string name, const LinearExpr& expr,
                           Sense sense, double rhs) {
  std::map<int, double> merged;
  for (const Term& t : expr.terms()) {
    Require(t.var.valid() && t.var.index < num_variables(), ErrorCode::kInput,
            "constraint '" + name + "' references an unknown variable");
    merged[t.var.index] += t.coef;
  }
  Constraint row;
  row.sense = sense;
  row.rhs = rhs - expr.constant();
  Require(std::isfinite(row.rhs), ErrorCode::kInput,
          "constraint '" + name + "' has non-finite right-hand side");
  for (const auto& [index, coef] : merged) {
    if (coef != 0.0) row.terms.push_back({VarId{index}, coef});
  }
  const int index = num_constraints();
  Require(row_index_.emplace(name, index).second, ErrorCode::kInput,
          "duplicate constraint name '" + name + "'");
  row.name = std::move(name);
  rows_.push_back(std::move(row));
  return RowId{index};
}

void Model::SetCost(VarId var, double cost) { vars_.at(var.index).cost = cost; }

void Model::AddCost(VarId var, double cost) {
  vars_.at(var.index).cost += cost;
}

void Model::SetBounds(VarId var, double lower, double upper) {
  Require(lower <= upper, ErrorCode::kInput, "invalid bounds");
  vars_.at(var.index).lower = lower;
  vars_.at(var.index).upper = upper;
}

std::size_t Model::num_nonzeros() const {
  std::size_t nnz = 0;
  for (const Constraint& row : rows_) nnz += row.terms.size();
  return nnz;
}

std::optional<VarId> Model::FindVariable(std::string_view name) const {
  auto it = var_index_.find(std::string(name));
  if (it == var_index_.end()) return std::nullopt;
  return VarId{it->second};
}

std::optional<RowId> Model::FindConstraint(std::string_view name) const {
  auto it = row_index_.find(std::string(name));
  if (it == row_index_.end()) return std::nullopt;
  return RowId{it->second};
}

namespace {

void AppendTerm(std::ostringstream& out, double coef, const std::string& name,
                bool first) {
  if (coef < 0) {
    out << (first ? " -" : " - ");
  } else {
    out << (first ? " " : " + ");
  }
  const double mag = std::abs(coef);
  if (mag != 1.0) out << mag << " ";
  out << name;
}

}  // namespace

std::string Model::ToLpListing() const {
  std::ostringstream out;
  out.precision(17);
  out << "Minimize\n obj:";
  bool first = true;
  for (const Variable& v : vars_) {
    if (v.cost == 0.0) continue;
    AppendTerm(out, v.cost, v.name, first);
    first = false;
  }
  if (offset_ != 0.0 || first) out << (first ? " " : " + ") << offset_;
  out << "\nSubject To\n";
  for (const Constraint& row : rows_) {
    out << " " << row.name << ":";
    if (row.terms.empty()) out << " 0";
    first = true;
    for (const Term& t : row.terms) {
      AppendTerm(out, t.coef, vars_[t.var.index].name, first);
      first = false;
    }
    switch (row.sense) {
      case Sense::kLessEqual: out << " <= "; break;
      case Sense::kGreaterEqual: out << " >= "; break;
      case Sense::kEqual: out << " = "; break;
    }
    out << row.rhs << "\n";
  }
  out << "Bounds\n";
  for (const Variable& v : vars_) {
    if (std::isinf(v.lower) && std::isinf(v.upper)) {
      out << " " << v.name << " free\n";
    } else if (v.lower == v.upper) {
      out << " " << v.name << " = " << v.lower << "\n";
    } else {
      out << " ";
      if (std::isinf(v.lower)) {
        out << "-inf";
      } else {
        out << v.lower;
      }
      out << " <= " << v.name << " <= ";
      if (std::isinf(v.upper)) {
        out << "+inf";
      } else {
        out << v.upper;
      }
      out << "\n";
    }
  }
  out << "End\n";
  return out.str();
}

}  // namespace msdro::lp
