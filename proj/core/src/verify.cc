#include "twoscvrp/verify.h"

#include <algorithm>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace twoscvrp {
namespace {

struct Checker {
  const Instance& in;
  const Solution& s;
  const VerifyConfig& config;
  VerifyReport report;

  void Add(std::string rule, std::vector<std::string> entities, std::string detail) {
    report.violations.push_back({std::move(rule), std::move(entities), std::move(detail)});
  }

  bool ValidPallet(int j) const { return j >= 0 && j < in.num_pallets(); }
  bool ValidTruck(int k) const { return k >= 0 && k < in.num_trucks(); }

  int PalletOf(int i) const {
    return i < static_cast<int>(s.box_to_pallet.size()) && ValidPallet(s.box_to_pallet[i]) ? s.box_to_pallet[i] : -1;
  }
  int TruckOf(int j) const {
    return j >= 0 && j < static_cast<int>(s.pallet_to_truck.size()) && ValidTruck(s.pallet_to_truck[j])
               ? s.pallet_to_truck[j]
               : -1;
  }
  const std::vector<int>& Route(int k) const {
    static const std::vector<int> kEmpty;
    return k >= 0 && k < static_cast<int>(s.routes.size()) ? s.routes[k] : kEmpty;
  }
  // true when truck k drives straight from destination d to d2.
  bool Consecutive(int k, int d, int d2) const {
    const auto& r = Route(k);
    for (size_t p = 0; p + 1 < r.size(); ++p)
      if (r[p] == d && r[p + 1] == d2) return true;
    return false;
  }

  void Assignment();
  void Capacities();
  void Routes();
  void Boxes3D();
  void Pallets2D();
};

std::string Str(const Rational& r) { return r.ToString(); }

void Checker::Assignment() {
  if (static_cast<int>(s.box_to_pallet.size()) != in.num_boxes()) {
    Add("assignment.box", {}, "box_to_pallet has " + std::to_string(s.box_to_pallet.size()) + " entries for " +
                                  std::to_string(in.num_boxes()) + " boxes");
  }
  if (static_cast<int>(s.pallet_to_truck.size()) != in.num_pallets()) {
    Add("assignment.pallet", {}, "pallet_to_truck has " + std::to_string(s.pallet_to_truck.size()) +
                                     " entries for " + std::to_string(in.num_pallets()) + " pallets");
  }
  for (int j = 0; j < static_cast<int>(s.pallet_to_truck.size()) && j < in.num_pallets(); ++j) {
    int k = s.pallet_to_truck[j];
    if (k != -1 && !ValidTruck(k)) Add("assignment.pallet", {in.pallets[j].id}, "unknown truck index " + std::to_string(k));
  }
  for (int i = 0; i < in.num_boxes(); ++i) {
    if (i >= static_cast<int>(s.box_to_pallet.size())) break;
    int j = s.box_to_pallet[i];
    if (!ValidPallet(j)) {
      Add("assignment.box", {in.boxes[i].id}, "box is not on any pallet");
    } else if (TruckOf(j) < 0) {
      Add("assignment.pallet", {in.boxes[i].id, in.pallets[j].id}, "box sits on a pallet that no truck carries");
    }
  }
}

void Checker::Capacities() {
  std::vector<int64_t> load(in.num_pallets(), 0);
  for (int i = 0; i < in.num_boxes(); ++i)
    if (PalletOf(i) >= 0) load[PalletOf(i)] += in.boxes[i].volume;
  for (int j = 0; j < in.num_pallets(); ++j) {
    if (load[j] > in.pallets[j].capacity) {
      Add("capacity.pallet", {in.pallets[j].id},
          "load " + std::to_string(load[j]) + " > capacity " + std::to_string(in.pallets[j].capacity));
    }
  }
  std::vector<int64_t> tload(in.num_trucks(), 0);
  for (int j = 0; j < in.num_pallets(); ++j)
    if (TruckOf(j) >= 0) tload[TruckOf(j)] += in.pallets[j].capacity;
  for (int k = 0; k < in.num_trucks(); ++k) {
    if (tload[k] > in.trucks[k].capacity) {
      Add("capacity.truck", {in.trucks[k].id},
          "pallet capacities " + std::to_string(tload[k]) + " > capacity " + std::to_string(in.trucks[k].capacity));
    }
  }
}

void Checker::Routes() {
  const int D = in.num_destinations();
  if (static_cast<int>(s.routes.size()) != in.num_trucks()) {
    Add("route.shape", {}, "routes has " + std::to_string(s.routes.size()) + " entries for " +
                               std::to_string(in.num_trucks()) + " trucks");
  }
  std::vector<std::set<int>> cargo(in.num_trucks());
  for (int i = 0; i < in.num_boxes(); ++i) {
    int k = TruckOf(PalletOf(i));
    if (k >= 0) cargo[k].insert(in.boxes[i].destination);
  }
  std::vector<bool> carries(in.num_trucks(), false);
  for (int j = 0; j < in.num_pallets(); ++j)
    if (TruckOf(j) >= 0) carries[TruckOf(j)] = true;

  for (int k = 0; k < in.num_trucks(); ++k) {
    const auto& r = Route(k);
    const std::string& kid = in.trucks[k].id;
    if (r.empty()) {
      if (carries[k]) Add("route.unused_truck", {kid}, "truck carries pallets but has no route");
      continue;
    }
    // Traverse: depot, then distinct destinations, then depot.
    bool shape_ok = r.size() >= 3 && r.front() == 0 && r.back() == 0;
    std::set<int> seen;
    for (size_t p = 1; shape_ok && p + 1 < r.size(); ++p) {
      int d = r[p];
      if (d < 1 || d > D || !seen.insert(d).second) shape_ok = false;
    }
    if (!shape_ok) {
      std::ostringstream os;
      os << "route [";
      for (size_t p = 0; p < r.size(); ++p) os << (p ? " " : "") << r[p];
      os << "] is not one depot-rooted tour over distinct destinations";
      Add("route.shape", {kid}, os.str());
      continue;
    }
    for (int d : cargo[k]) {
      if (!seen.count(d)) {
        Add("route.calling", {kid, in.travel.destinations[d]}, "cargo for " + in.travel.destinations[d] +
                                                                   " but the route never calls there");
      }
    }
  }
}

void Checker::Boxes3D() {
  if (!s.boxes_3d) {
    if (in.is_3d() && config.check_geometry) Add("geometry.missing", {}, "no box placements for a 3D instance");
    return;
  }
  const auto& pl = *s.boxes_3d;
  if (static_cast<int>(pl.size()) != in.num_boxes()) {
    Add("geometry.missing", {}, "placements for " + std::to_string(pl.size()) + " of " +
                                    std::to_string(in.num_boxes()) + " boxes");
    return;
  }
  if (!in.is_3d()) {
    Add("geometry.missing", {}, "box placements given for a 1D instance");
    return;
  }
  static const char* kAxis = "xyz";
  for (int i = 0; i < in.num_boxes(); ++i) {
    const auto& p = pl[i];
    const auto& dims = *in.boxes[i].dims;
    const std::string& id = in.boxes[i].id;
    std::array<int, 3> perm = p.rotation;
    std::array<int, 3> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::array<int, 3>{0, 1, 2}) {
      Add("geometry.rotation", {id}, "rotation is not a permutation of the three sides");
    } else {
      for (int a = 0; a < 3; ++a) {
        if (p.hi[a] - p.lo[a] != Rational(dims[perm[a]])) {
          Add("geometry.rotation", {id}, std::string("extent along ") + kAxis[a] + " is " + Str(p.hi[a] - p.lo[a]) +
                                             ", expected side " + std::to_string(dims[perm[a]]));
        }
      }
    }
    int j = PalletOf(i);
    if (j < 0) continue;
    const auto& pd = *in.pallets[j].dims;
    for (int a = 0; a < 3; ++a) {
      if (p.lo[a] < Rational(0) || p.hi[a] > Rational(pd[a])) {
        Add("geometry.containment", {id, in.pallets[j].id},
            std::string("[") + Str(p.lo[a]) + ", " + Str(p.hi[a]) + ") leaves the pallet along " + kAxis[a]);
      }
    }
  }
  auto meets = [](const Rational& a0, const Rational& a1, const Rational& b0, const Rational& b1) {
    return a0 < b1 && b0 < a1;
  };
  auto footprints_meet = [&](int i, int i2) {
    return meets(pl[i].lo[0], pl[i].hi[0], pl[i2].lo[0], pl[i2].hi[0]) &&
           meets(pl[i].lo[1], pl[i].hi[1], pl[i2].lo[1], pl[i2].hi[1]);
  };
  auto above = [&](int top, int bottom) { return pl[top].lo[2] >= pl[bottom].hi[2]; };
  const bool literal = config.stacking == StackingRule::kLiteral;
  for (int i = 0; i < in.num_boxes(); ++i) {
    for (int i2 = 0; i2 < in.num_boxes(); ++i2) {
      if (i == i2) continue;
      const std::string& a = in.boxes[i].id;
      const std::string& b = in.boxes[i2].id;
      const int j = PalletOf(i);
      const bool same = j >= 0 && j == PalletOf(i2);
      if (same && i < i2 && footprints_meet(i, i2) && meets(pl[i].lo[2], pl[i].hi[2], pl[i2].lo[2], pl[i2].hi[2])) {
        Add("geometry.overlap", {a, b, in.pallets[j].id}, "boxes intersect");
      }
      if (!config.check_delivery_order) continue;
      if (literal) {
        if (config.faithful_z) {
          if (same && above(i2, i) && footprints_meet(i, i2)) {
            Add("geometry.stacking", {b, a, in.pallets[j].id}, b + " rests above " + a);
          }
        } else if (above(i2, i)) {
          Add("geometry.stacking", {b, a}, b + " lies entirely above " + a);
        }
        continue;
      }
      // Delivery order: i2 is unloaded right after i from the same truck.
      int k = TruckOf(j);
      if (!same || k < 0 || !Consecutive(k, in.boxes[i].destination, in.boxes[i2].destination)) continue;
      if (above(i2, i) && (!config.faithful_z || footprints_meet(i, i2))) {
        Add("order.box", {b, a, in.pallets[j].id}, b + " is delivered right after " + a + " but sits above it");
      }
    }
  }
}

void Checker::Pallets2D() {
  if (!s.pallets_2d) {
    if (in.is_3d() && config.check_geometry) Add("geometry.missing", {}, "no pallet placements for a 3D instance");
    return;
  }
  const auto& pl = *s.pallets_2d;
  if (static_cast<int>(pl.size()) != in.num_pallets()) {
    Add("geometry.missing", {}, "placements for " + std::to_string(pl.size()) + " of " +
                                    std::to_string(in.num_pallets()) + " pallets");
    return;
  }
  if (!in.is_3d()) {
    Add("geometry.missing", {}, "pallet placements given for a 1D instance");
    return;
  }
  static const char* kAxis = "xy";
  for (int j = 0; j < in.num_pallets(); ++j) {
    int k = TruckOf(j);
    if (k < 0) continue;  // unused pallets have no place
    const auto& p = pl[j];
    const auto& dims = *in.pallets[j].dims;
    const std::string& id = in.pallets[j].id;
    if (!((p.rotation[0] == 0 && p.rotation[1] == 1) || (p.rotation[0] == 1 && p.rotation[1] == 0))) {
      Add("geometry.rotation", {id}, "pallet rotation must swap or keep length and width");
    } else {
      for (int a = 0; a < 2; ++a) {
        if (p.hi[a] - p.lo[a] != Rational(dims[p.rotation[a]])) {
          Add("geometry.rotation", {id}, std::string("extent along ") + kAxis[a] + " is " + Str(p.hi[a] - p.lo[a]) +
                                             ", expected side " + std::to_string(dims[p.rotation[a]]));
        }
      }
    }
    const auto& floor = *in.trucks[k].floor;
    for (int a = 0; a < 2; ++a) {
      if (p.lo[a] < Rational(0) || p.hi[a] > Rational(floor[a])) {
        Add("geometry.containment", {id, in.trucks[k].id},
            std::string("[") + Str(p.lo[a]) + ", " + Str(p.hi[a]) + ") leaves the truck floor along " + kAxis[a]);
      }
    }
  }
  std::vector<std::set<int>> dests(in.num_pallets());
  for (int i = 0; i < in.num_boxes(); ++i)
    if (PalletOf(i) >= 0) dests[PalletOf(i)].insert(in.boxes[i].destination);
  for (int j = 0; j < in.num_pallets(); ++j) {
    for (int j2 = 0; j2 < in.num_pallets(); ++j2) {
      if (j == j2) continue;
      int k = TruckOf(j);
      if (k < 0 || k != TruckOf(j2)) continue;
      const std::string& a = in.pallets[j].id;
      const std::string& b = in.pallets[j2].id;
      if (j < j2 && pl[j].lo[0] < pl[j2].hi[0] && pl[j2].lo[0] < pl[j].hi[0] && pl[j].lo[1] < pl[j2].hi[1] &&
          pl[j2].lo[1] < pl[j].hi[1]) {
        Add("geometry.overlap", {a, b, in.trucks[k].id}, "pallets intersect");
      }
      if (!config.check_delivery_order) continue;
      bool next = false;
      for (int d : dests[j])
        for (int d2 : dests[j2])
          if (d != d2 && Consecutive(k, d, d2)) next = true;
      if (next && pl[j2].hi[0] <= pl[j].lo[0]) {
        Add("order.pallet", {a, b, in.trucks[k].id}, b + " is delivered right after " + a + " but " + a +
                                                         " lies entirely to its right");
      }
    }
  }
}

}  // namespace

bool VerifyReport::Has(const std::string& rule) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.rule == rule; });
}

std::string VerifyReport::ToJson() const {
  nlohmann::ordered_json j;
  j["ok"] = ok();
  j["recomputed_cost"] = recomputed_cost.is_integer() ? nlohmann::ordered_json(recomputed_cost.num())
                                                      : nlohmann::ordered_json(recomputed_cost.ToString());
  auto list = nlohmann::ordered_json::array();
  for (const auto& v : violations) {
    nlohmann::ordered_json e;
    e["rule"] = v.rule;
    e["entities"] = v.entities;
    e["detail"] = v.detail;
    list.push_back(e);
  }
  j["violations"] = list;
  return j.dump(2) + "\n";
}

VerifyReport Verify(const Instance& instance, const Solution& solution, const VerifyConfig& config) {
  Checker c{instance, solution, config, {}};
  c.Assignment();
  c.Capacities();
  c.Routes();
  c.Boxes3D();
  c.Pallets2D();
  c.report.recomputed_cost = SolutionCost(instance, solution);
  if (c.report.recomputed_cost != solution.total_cost) {
    c.Add("cost.mismatch", {}, "claimed " + Str(solution.total_cost) + ", recomputed " + Str(c.report.recomputed_cost));
  }
  return std::move(c.report);
}

}  // namespace twoscvrp
