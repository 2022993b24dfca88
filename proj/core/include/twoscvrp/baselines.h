#ifndef TWOSCVRP_BASELINES_H_
#define TWOSCVRP_BASELINES_H_

#include <optional>
#include <string>
#include <vector>

#include "twoscvrp/instance.h"
#include "twoscvrp/model_build.h"
#include "twoscvrp/solution.h"
#include "twoscvrp/solver.h"

namespace twoscvrp {

// The two-phase methods split the problem and solve each half exactly.
//   bp_then_vrp: cheapest packing of boxes/pallets/trucks, then routes for
//                the calling sets that packing implies.
//   vrp_then_bp: one pallet per destination group (cheapest matching of
//                groups to pallets), then pallets to trucks plus routing.
enum class Method { kIntegrated, kBpThenVrp, kVrpThenBp };
const char* ToString(Method method);
std::optional<Method> ParseMethod(const std::string& name);

struct CompositeResult {
  Method method = Method::kIntegrated;
  bool feasible = false;
  // Both phases (or the single integrated solve) finished with proof.
  bool proven = false;
  std::string failed_phase;  // "phase1", "phase2" or "" when feasible
  std::string message;
  std::optional<SolveResult> phase1;
  std::optional<SolveResult> phase2;
  Solution solution;
  Rational packing_cost;
  Rational routing_cost;
  Rational total_cost;
  double wall_seconds = 0;
};

struct BaselineOptions {
  ModelConfig model;
  SolveOptions solve;
  std::string backend;  // empty: built-in branch-and-bound
};

CompositeResult SolveIntegrated(const Instance& instance, const BaselineOptions& options);
CompositeResult SolveBpThenVrp(const Instance& instance, const BaselineOptions& options);
// 1D only; throws BuildError for a 3D instance.
CompositeResult SolveVrpThenBp(const Instance& instance, const BaselineOptions& options);
CompositeResult SolveMethod(Method method, const Instance& instance, const BaselineOptions& options);

struct ComparisonRow {
  Method method;
  CompositeResult result;
  std::string error;  // set when the method threw
};

struct Comparison {
  std::string instance;
  std::vector<ComparisonRow> rows;

  // instance,method,status,total_cost,packing_cost,routing_cost,seconds,note
  std::string ToCsv(bool header = true) const;
  std::string ToText() const;
};

// Methods that do not apply (vrp_then_bp on 3D) or fail are kept as rows
// with an error; nothing is thrown.
Comparison Compare(const Instance& instance, const std::vector<Method>& methods, const BaselineOptions& options);

}  // namespace twoscvrp

#endif  // TWOSCVRP_BASELINES_H_
