#ifndef TWOSCVRP_MILP_H_
#define TWOSCVRP_MILP_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "twoscvrp/rational.h"

namespace twoscvrp {

using VarId = int32_t;

enum class VarKind { kBinary, kInteger, kContinuous };
enum class Sense { kLe, kEq, kGe };

const char* ToString(VarKind kind);
const char* ToString(Sense sense);

struct VarDef {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  std::optional<Rational> lower;  // nullopt: -inf
  std::optional<Rational> upper;  // nullopt: +inf

  bool is_integral() const { return kind != VarKind::kContinuous; }
};

struct Term {
  Rational coef;
  VarId var = 0;

  bool operator==(const Term&) const = default;
};

struct LinearConstraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::kLe;
  Rational rhs;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sums duplicate variables, drops zero coefficients, sorts by variable id.
std::vector<Term> Coalesce(std::vector<Term> terms);

class ModelIR {
 public:
  explicit ModelIR(std::string name = "model") : name_(std::move(name)) {}

  const std::string& name() const { return name_; }

  VarId AddVar(const std::string& name, VarKind kind, std::optional<Rational> lower = Rational(0),
               std::optional<Rational> upper = std::nullopt);
  VarId AddBinary(const std::string& name) { return AddVar(name, VarKind::kBinary, 0, 1); }

  int AddConstraint(LinearConstraint c);
  int AddConstraint(const std::string& name, std::vector<Term> terms, Sense sense, Rational rhs) {
    return AddConstraint(LinearConstraint{name, std::move(terms), sense, rhs});
  }

  void SetObjective(std::vector<Term> terms);

  // Tightens bounds of an existing variable (used for fixing).
  void SetBounds(VarId id, std::optional<Rational> lower, std::optional<Rational> upper);

  // Empty iff every invariant holds.
  std::vector<std::string> Validate() const;

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const std::vector<VarDef>& vars() const { return vars_; }
  const VarDef& var(VarId id) const { return vars_.at(id); }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  const std::vector<Term>& objective() const { return objective_; }
  std::optional<VarId> FindVar(const std::string& name) const;

  // Exact evaluation; values are indexed by VarId.
  Rational EvaluateObjective(const std::vector<Rational>& values) const;
  Rational EvaluateRow(int row, const std::vector<Rational>& values) const;
  // Indices of constraints violated by an assignment, exactly.
  std::vector<int> ViolatedConstraints(const std::vector<Rational>& values) const;
  // Indices of variables whose value breaks a bound or integrality.
  std::vector<VarId> ViolatedBounds(const std::vector<Rational>& values) const;

  // Unchecked access for tests that need to build malformed models.
  std::vector<VarDef>& raw_vars() { return vars_; }
  std::vector<LinearConstraint>& raw_constraints() { return constraints_; }
  std::vector<Term>& raw_objective() { return objective_; }

 private:
  void CheckTerms(const std::vector<Term>& terms, const std::string& where) const;

  std::string name_;
  std::vector<VarDef> vars_;
  std::vector<LinearConstraint> constraints_;
  std::vector<Term> objective_;
  std::unordered_map<std::string, VarId> by_name_;
};

}  // namespace twoscvrp

#endif  // TWOSCVRP_MILP_H_
