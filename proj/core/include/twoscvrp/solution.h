#ifndef TWOSCVRP_SOLUTION_H_
#define TWOSCVRP_SOLUTION_H_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "twoscvrp/instance.h"
#include "twoscvrp/rational.h"

namespace twoscvrp {

// rotation[a] = b: side b of the item (0 = length, 1 = width, 2 = height)
// lies along axis a (0 = x, 1 = y, 2 = z).
struct Placement3D {
  std::array<Rational, 3> lo;
  std::array<Rational, 3> hi;
  std::array<int, 3> rotation{0, 1, 2};

  bool operator==(const Placement3D&) const = default;
};

struct Placement2D {
  std::array<Rational, 2> lo;
  std::array<Rational, 2> hi;
  std::array<int, 2> rotation{0, 1};

  bool operator==(const Placement2D&) const = default;
};

struct Solution {
  std::vector<int> box_to_pallet;    // pallet index per box
  std::vector<int> pallet_to_truck;  // truck index per pallet, -1 when unused
  // Per truck: destination indices starting and ending at the depot (0);
  // empty when the truck is unused.
  std::vector<std::vector<int>> routes;
  std::optional<std::vector<Placement3D>> boxes_3d;    // one per box
  std::optional<std::vector<Placement2D>> pallets_2d;  // one per pallet
  Rational total_cost;

  bool operator==(const Solution&) const = default;
};

// Fix costs of used pallets and trucks plus travel along every route.
Rational SolutionCost(const Instance& instance, const Solution& solution);
Rational PackingCost(const Instance& instance, const Solution& solution);
Rational RoutingCost(const Instance& instance, const Solution& solution);

// JSON document keyed by instance ids (see docs/formats.md).
std::string SolutionToJson(const Instance& instance, const Solution& solution);
Solution SolutionFromJson(const Instance& instance, const std::string& text);

}  // namespace twoscvrp

#endif  // TWOSCVRP_SOLUTION_H_
