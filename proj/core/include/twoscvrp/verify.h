#ifndef TWOSCVRP_VERIFY_H_
#define TWOSCVRP_VERIFY_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "twoscvrp/instance.h"
#include "twoscvrp/model_build.h"
#include "twoscvrp/solution.h"

namespace twoscvrp {

// Which reading of the in-pallet stacking rule to check, and whether the
// z/y separators were exact when the solution was produced. Mirrors the
// ModelConfig the solution was built under.
struct VerifyConfig {
  StackingRule stacking = StackingRule::kLiteral;
  bool faithful_z = true;
  // Off for solutions whose packing was computed without routes (the
  // disjoint baselines): no order or stacking rule was in force there.
  bool check_delivery_order = true;
  // Placements required on 3D instances. Off for solutions of the 1D model.
  bool check_geometry = true;

  static VerifyConfig From(const ModelConfig& config) {
    return {config.stacking, config.faithful_z, true, config.enable_3d};
  }
};

// Rule ids:
//   assignment.box         box without a valid pallet
//   assignment.pallet      box on a pallet that is not loaded on a truck
//   capacity.pallet        box volumes above pallet capacity
//   capacity.truck         pallet capacities above truck capacity
//   route.shape            not [depot, distinct destinations..., depot]
//   route.calling          cargo destination missing from the route
//   route.unused_truck     pallets on a truck without a route
//   cost.mismatch          claimed total differs from the recomputed one
//   geometry.missing       placements absent for some items
//   geometry.rotation      extents are not a permutation of the item sides
//   geometry.containment   item outside its container
//   geometry.overlap       two items in one container intersect
//   geometry.stacking      box on top of another where the rule forbids it
//   order.box              later-delivered box above the earlier one
//   order.pallet           earlier-delivered pallet entirely right of the later one
struct Violation {
  std::string rule;
  std::vector<std::string> entities;
  std::string detail;
};

struct VerifyReport {
  std::vector<Violation> violations;
  Rational recomputed_cost;

  bool ok() const { return violations.empty(); }
  bool Has(const std::string& rule) const;
  std::string ToJson() const;
};

// Independent of the MILP: every rule is checked on the decoded structure.
// Boxes are half-open [lo, hi) so touching faces do not overlap.
VerifyReport Verify(const Instance& instance, const Solution& solution, const VerifyConfig& config = {});

struct Mutation {
  std::string name;
  std::string expected_rule;  // empty for the identity mutation
  Solution solution;
};

// Targeted corruptions of a valid solution, each labelled with a rule it
// has to trip. Mutations that the solution cannot support (for example an
// overlap with a single box) are skipped.
std::vector<Mutation> MutateSuite(const Instance& instance, const Solution& solution, uint64_t seed,
                                  const VerifyConfig& config = {});

class OracleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct OracleResult {
  bool feasible = false;
  Rational cost;
  Solution solution;
};

// Exhaustive search over box->pallet and pallet->truck maps, every truck
// routed optimally over the cheapest superset of its calling set.
// Limits: |I| <= 5, |J| <= 3, |K| <= 2, |D| <= 4.
OracleResult OracleSolve1D(const Instance& instance);

struct RouteResult {
  Rational cost;
  std::vector<int> sequence;  // [0, ..., 0]; just [0] for an empty set
};

// Held-Karp over depot-rooted tours, |calling| <= 10. Ties go to the
// lexicographically first tour.
RouteResult OracleRoute(const std::vector<int>& calling, const TravelMatrix& travel);

}  // namespace twoscvrp

#endif  // TWOSCVRP_VERIFY_H_
