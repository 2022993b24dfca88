#ifndef TWOSCVRP_MODEL_BUILD_H_
#define TWOSCVRP_MODEL_BUILD_H_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twoscvrp/instance.h"
#include "twoscvrp/milp.h"
#include "twoscvrp/solution.h"

namespace twoscvrp {

// How the delivery-order rule inside a pallet is linearised.
//  kLiteral: theta + p_ij + p_i'j <= 3 (1 - z_i'i). Since every box sits in
//    some pallet this pins every z separator to 0: boxes are never stacked.
//  kDeliveryOrder: theta + p_ij + p_i'j + z_i'i <= 3. Only a box delivered
//    immediately after another one in the same pallet may not sit on top of it.
enum class StackingRule { kLiteral, kDeliveryOrder };

struct ModelConfig {
  // Strict-separation gap. Default 1: all instance dimensions are integers.
  std::optional<Rational> epsilon;
  // true: z (pallet) and y (truck) separators are one-sided as printed.
  // false: add the epsilon companions so every separator is an exact "iff".
  bool faithful_z = true;
  // Build geometry when the instance is 3D.
  bool enable_3d = true;
  StackingRule stacking = StackingRule::kLiteral;
  // Big-M overrides; defaults are |I|, |J|, max pallet dim + eps and
  // max(truck floor dim, pallet footprint dim) + eps. Smaller values throw.
  std::optional<Rational> bigm_pallet_destination;
  std::optional<Rational> bigm_truck_destination;
  std::optional<Rational> bigm_pallet_geometry;
  std::optional<Rational> bigm_truck_geometry;
};

struct ModelConstants {
  Rational epsilon;
  Rational m_pallet_destination;
  Rational m_truck_destination;
  Rational m_pallet_geometry;
  Rational m_truck_geometry;
};

class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ModelConstants ResolveConstants(const Instance& instance, const ModelConfig& config);

// Dense n-dimensional table of variable ids; -1 marks an absent entry
// (for example the diagonal of a pair family).
class VarFamily {
 public:
  VarFamily() = default;
  explicit VarFamily(std::vector<int> shape);

  const std::vector<int>& shape() const { return shape_; }
  const std::vector<VarId>& ids() const { return ids_; }
  std::vector<VarId>& mutable_ids() { return ids_; }
  size_t size() const { return ids_.size(); }

  template <typename... Ix>
  VarId operator()(Ix... ix) const {
    return ids_[Flat({static_cast<int>(ix)...})];
  }
  template <typename... Ix>
  VarId& at(Ix... ix) {
    return ids_[Flat({static_cast<int>(ix)...})];
  }

 private:
  size_t Flat(std::initializer_list<int> ix) const;

  std::vector<int> shape_;
  std::vector<VarId> ids_;
};

// Maps the model's symbols to ModelIR variable ids. Family keys:
//   base:   p0[I,J] u0[J] g1[J,D] p1[J,K] u1[K] eta[J,K,D] g2[K,D]
//           gs[K,N,N] e[K,D]          (N = D plus the depot at index 0)
//   pallet: x0 y0 z0 xh0 yh0 zh0 [I]  r0[I,3,3]  xp0 yp0 zp0 [I,I]
//           pg[I,K] th0[I,I]
//   truck:  x1 y1 xh1 yh1 [J]  r1[J,2,2]  xp1 yp1 [J,J]
//           gdd[J,J,D,D] th1[J,J]
// Destination axes of size D are 0-based (destination d is stored at d-1);
// N axes use the travel-matrix index directly.
class VariableIndex {
 public:
  int num_boxes = 0;
  int num_pallets = 0;
  int num_trucks = 0;
  int num_destinations = 0;

  bool Has(const std::string& symbol) const { return families_.count(symbol) > 0; }
  const VarFamily& operator[](const std::string& symbol) const;
  VarFamily& Add(const std::string& symbol, std::vector<int> shape);
  const std::map<std::string, VarFamily>& families() const { return families_; }

  std::string ToJson() const;
  static VariableIndex FromJson(const std::string& text);

 private:
  std::map<std::string, VarFamily> families_;
};

struct BuiltModel {
  ModelIR model;
  VariableIndex index;
  ModelConstants constants;
};

BuiltModel BuildBase1D(const Instance& instance, const ModelConfig& config = {});
void ExtendPallet3D(BuiltModel& built, const Instance& instance, const ModelConfig& config = {});
void ExtendTruck2D(BuiltModel& built, const Instance& instance, const ModelConfig& config = {});
BuiltModel BuildFull(const Instance& instance, const ModelConfig& config = {});
BuiltModel BuildPackingOnly(const Instance& instance, const ModelConfig& config = {});

struct RoutingFix {
  std::vector<std::vector<bool>> calling;  // [k][d-1]
  std::vector<bool> used;                  // [k]
};
BuiltModel BuildRoutingOnly(const Instance& instance, const RoutingFix& fix,
                            const ModelConfig& config = {});

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads whatever families the index has. Cost is recomputed from data.
Solution Decode(const VariableIndex& index, const std::vector<Rational>& values,
                const Instance& instance);

// The inverse of Decode: primary variables from the solution, auxiliaries
// at the values the model implies for it. Unused pallets are placed at the
// origin. Entries of variables not covered by the solution stay at 0.
std::vector<Rational> Encode(const BuiltModel& built, const Instance& instance,
                             const Solution& solution, const ModelConfig& config = {});

// Symbol families fixed by a solution (assignment, routes, placements);
// the rest are auxiliaries implied by them.
std::vector<std::string> PrimaryFamilies();

}  // namespace twoscvrp

#endif  // TWOSCVRP_MODEL_BUILD_H_
