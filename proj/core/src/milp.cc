#include "twoscvrp/milp.h"

#include <algorithm>
#include <set>

namespace twoscvrp {

const char* ToString(VarKind kind) {
  switch (kind) {
    case VarKind::kBinary: return "binary";
    case VarKind::kInteger: return "integer";
    case VarKind::kContinuous: return "continuous";
  }
  return "?";
}

const char* ToString(Sense sense) {
  switch (sense) {
    case Sense::kLe: return "<=";
    case Sense::kEq: return "=";
    case Sense::kGe: return ">=";
  }
  return "?";
}

std::vector<Term> Coalesce(std::vector<Term> terms) {
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (const auto& t : terms) {
    if (!out.empty() && out.back().var == t.var) {
      out.back().coef += t.coef;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const Term& t) { return t.coef.is_zero(); });
  return out;
}

VarId ModelIR::AddVar(const std::string& name, VarKind kind, std::optional<Rational> lower,
                      std::optional<Rational> upper) {
  if (name.empty()) throw ModelError("variable name must not be empty");
  if (by_name_.count(name)) throw ModelError("duplicate variable name '" + name + "'");
  if (kind == VarKind::kBinary) {
    lower = Rational(0);
    upper = Rational(1);
  }
  if (lower && upper && *lower > *upper) {
    throw ModelError("variable '" + name + "' has lower bound above upper bound");
  }
  if (kind == VarKind::kInteger && ((lower && !lower->is_integer()) || (upper && !upper->is_integer()))) {
    throw ModelError("integer variable '" + name + "' needs integral bounds");
  }
  VarId id = static_cast<VarId>(vars_.size());
  vars_.push_back(VarDef{name, kind, lower, upper});
  by_name_.emplace(name, id);
  return id;
}

void ModelIR::CheckTerms(const std::vector<Term>& terms, const std::string& where) const {
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= num_vars()) {
      throw ModelError(where + ": unknown variable id " + std::to_string(t.var));
    }
  }
}

int ModelIR::AddConstraint(LinearConstraint c) {
  CheckTerms(c.terms, "constraint '" + c.name + "'");
  c.terms = Coalesce(std::move(c.terms));
  constraints_.push_back(std::move(c));
  return static_cast<int>(constraints_.size()) - 1;
}

void ModelIR::SetObjective(std::vector<Term> terms) {
  CheckTerms(terms, "objective");
  objective_ = Coalesce(std::move(terms));
}

void ModelIR::SetBounds(VarId id, std::optional<Rational> lower, std::optional<Rational> upper) {
  auto& v = vars_.at(id);
  if (lower && upper && *lower > *upper) {
    throw ModelError("variable '" + v.name + "' has lower bound above upper bound");
  }
  v.lower = lower;
  v.upper = upper;
}

std::vector<std::string> ModelIR::Validate() const {
  std::vector<std::string> defects;
  if (vars_.empty()) defects.push_back("model has no variables");
  std::set<std::string> names;
  for (size_t id = 0; id < vars_.size(); ++id) {
    const auto& v = vars_[id];
    if (!names.insert(v.name).second) defects.push_back("duplicate variable name '" + v.name + "'");
    if (v.lower && v.upper && *v.lower > *v.upper) {
      defects.push_back("variable '" + v.name + "': lower > upper");
    }
    if (v.kind == VarKind::kBinary &&
        (!v.lower || !v.upper || *v.lower < Rational(0) || *v.upper > Rational(1))) {
      defects.push_back("binary variable '" + v.name + "' has bounds outside [0,1]");
    }
    if (v.is_integral() && ((v.lower && !v.lower->is_integer()) || (v.upper && !v.upper->is_integer()))) {
      defects.push_back("integer variable '" + v.name + "' has non-integral bounds");
    }
  }
  std::set<std::string> row_names;
  auto check_terms = [&](const std::vector<Term>& terms, const std::string& where) {
    std::set<VarId> seen;
    for (const auto& t : terms) {
      if (t.var < 0 || t.var >= num_vars()) {
        defects.push_back(where + ": dangling variable id " + std::to_string(t.var));
      } else if (!seen.insert(t.var).second) {
        defects.push_back(where + ": duplicate variable '" + vars_[t.var].name + "'");
      }
    }
  };
  for (const auto& c : constraints_) {
    if (!row_names.insert(c.name).second) defects.push_back("duplicate constraint name '" + c.name + "'");
    check_terms(c.terms, "constraint '" + c.name + "'");
  }
  check_terms(objective_, "objective");
  return defects;
}

std::optional<VarId> ModelIR::FindVar(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

Rational ModelIR::EvaluateObjective(const std::vector<Rational>& values) const {
  Rational sum;
  for (const auto& t : objective_) sum += t.coef * values.at(t.var);
  return sum;
}

Rational ModelIR::EvaluateRow(int row, const std::vector<Rational>& values) const {
  Rational sum;
  for (const auto& t : constraints_.at(row).terms) sum += t.coef * values.at(t.var);
  return sum;
}

std::vector<int> ModelIR::ViolatedConstraints(const std::vector<Rational>& values) const {
  std::vector<int> out;
  for (int r = 0; r < num_constraints(); ++r) {
    const auto& c = constraints_[r];
    Rational lhs = EvaluateRow(r, values);
    bool ok = c.sense == Sense::kLe ? lhs <= c.rhs : c.sense == Sense::kGe ? lhs >= c.rhs : lhs == c.rhs;
    if (!ok) out.push_back(r);
  }
  return out;
}

std::vector<VarId> ModelIR::ViolatedBounds(const std::vector<Rational>& values) const {
  std::vector<VarId> out;
  for (VarId id = 0; id < num_vars(); ++id) {
    const auto& v = vars_[id];
    const Rational& x = values.at(id);
    if ((v.lower && x < *v.lower) || (v.upper && x > *v.upper) || (v.is_integral() && !x.is_integer())) {
      out.push_back(id);
    }
  }
  return out;
}

}  // namespace twoscvrp
