#ifndef TWOSCVRP_INSTANCE_H_
#define TWOSCVRP_INSTANCE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace twoscvrp {

enum class Mode { kOneD, kThreeD };

struct BoxItem {
  std::string id;
  int64_t volume = 1;
  // (l, w, h); present iff the instance is 3D.
  std::optional<std::array<int64_t, 3>> dims;
  // Index into TravelMatrix::destinations, never 0 (the depot).
  int destination = 1;

  bool operator==(const BoxItem&) const = default;
};

struct PalletType {
  std::string id;
  int64_t capacity = 1;
  int64_t fix_cost = 0;
  std::optional<std::array<int64_t, 3>> dims;

  bool operator==(const PalletType&) const = default;
};

struct TruckType {
  std::string id;
  int64_t capacity = 1;
  int64_t fix_cost = 0;
  // Floor (l, w); present iff the instance is 3D.
  std::optional<std::array<int64_t, 2>> floor;

  bool operator==(const TruckType&) const = default;
};

struct TravelMatrix {
  // destinations[0] is the depot.
  std::vector<std::string> destinations;
  std::vector<std::vector<int64_t>> cost;

  int num_destinations() const { return static_cast<int>(destinations.size()) - 1; }
  int64_t operator()(int from, int to) const { return cost[from][to]; }

  bool operator==(const TravelMatrix&) const = default;
};

struct Instance {
  std::string name;
  Mode mode = Mode::kOneD;
  std::vector<BoxItem> boxes;
  std::vector<PalletType> pallets;
  std::vector<TruckType> trucks;
  TravelMatrix travel;

  int num_boxes() const { return static_cast<int>(boxes.size()); }
  int num_pallets() const { return static_cast<int>(pallets.size()); }
  int num_trucks() const { return static_cast<int>(trucks.size()); }
  int num_destinations() const { return travel.num_destinations(); }
  bool is_3d() const { return mode == Mode::kThreeD; }

  bool operator==(const Instance&) const = default;
};

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Returns a list of human-readable invariant violations; empty when valid.
std::vector<std::string> ValidateInstance(const Instance& instance);
// Throws InstanceError naming the first violation.
void CheckInstance(const Instance& instance);

std::string InstanceToJson(const Instance& instance);
Instance InstanceFromJson(const std::string& text);

Instance LoadInstance(const std::filesystem::path& path);
void SaveInstance(const Instance& instance, const std::filesystem::path& path);

struct IntRange {
  int64_t lo = 0;
  int64_t hi = 0;
};

struct GenSpec {
  std::string name = "generated";
  int boxes = 1;
  int pallets = 1;
  int trucks = 1;
  int destinations = 1;
  IntRange volume{1, 1};
  IntRange pallet_capacity{1, 1};
  IntRange truck_capacity{1, 1};
  IntRange pallet_cost{0, 0};
  IntRange truck_cost{0, 0};
  IntRange travel_cost{0, 0};
  bool three_d = false;
  IntRange box_side{1, 1};
  IntRange pallet_side{1, 1};
  IntRange truck_side{1, 1};
  uint64_t seed = 0;
  int max_retries = 1000;
};

// Named presets: ins-1 ... ins-6, ins-large (1D) and ins-7 ... ins-9 (3D).
std::optional<GenSpec> PresetSpec(const std::string& name);
std::vector<std::string> PresetNames();

// Deterministic in `spec`, seed included. Throws InstanceError when the
// feasibility preconditions cannot be met within max_retries draws.
Instance Generate(const GenSpec& spec);

// The real-life instance: 19 boxes, 6 pallets, 3 trucks, 5 destinations.
Instance BuiltinRealInstance();

}  // namespace twoscvrp

#endif  // TWOSCVRP_INSTANCE_H_
