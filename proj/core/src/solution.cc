#include "twoscvrp/solution.h"

#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace twoscvrp {
namespace {

using Json = nlohmann::ordered_json;

Json RationalJson(const Rational& r) {
  if (r.is_integer()) return r.num();
  return r.ToString();
}

Rational RationalFrom(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<int64_t>());
  if (j.is_number_float()) return Rational::FromDouble(j.get<double>());
  if (j.is_string()) {
    auto r = Rational::Parse(j.get<std::string>());
    if (r) return *r;
  }
  throw std::runtime_error("solution file: bad number " + j.dump());
}

template <typename T>
std::map<std::string, int> IndexOf(const std::vector<T>& items) {
  std::map<std::string, int> out;
  for (size_t k = 0; k < items.size(); ++k) out[items[k].id] = static_cast<int>(k);
  return out;
}

int Lookup(const std::map<std::string, int>& index, const std::string& key, const char* what) {
  auto it = index.find(key);
  if (it == index.end()) throw std::runtime_error(std::string("solution file: unknown ") + what + " '" + key + "'");
  return it->second;
}

}  // namespace

Rational PackingCost(const Instance& in, const Solution& s) {
  Rational cost;
  for (size_t j = 0; j < s.pallet_to_truck.size() && j < in.pallets.size(); ++j) {
    if (s.pallet_to_truck[j] >= 0) cost += in.pallets[j].fix_cost;
  }
  for (size_t k = 0; k < s.routes.size() && k < in.trucks.size(); ++k) {
    if (!s.routes[k].empty()) cost += in.trucks[k].fix_cost;
  }
  return cost;
}

Rational RoutingCost(const Instance& in, const Solution& s) {
  Rational cost;
  const int n = static_cast<int>(in.travel.destinations.size());
  for (const auto& route : s.routes) {
    for (size_t p = 0; p + 1 < route.size(); ++p) {
      int a = route[p], b = route[p + 1];
      if (a >= 0 && a < n && b >= 0 && b < n) cost += in.travel(a, b);
    }
  }
  return cost;
}

Rational SolutionCost(const Instance& in, const Solution& s) {
  return PackingCost(in, s) + RoutingCost(in, s);
}

std::string SolutionToJson(const Instance& in, const Solution& s) {
  Json j;
  j["format_version"] = 1;
  j["instance"] = in.name;
  j["total_cost"] = RationalJson(s.total_cost);
  Json boxes = Json::object();
  for (size_t i = 0; i < s.box_to_pallet.size(); ++i) {
    boxes[in.boxes.at(i).id] = in.pallets.at(s.box_to_pallet[i]).id;
  }
  j["box_to_pallet"] = boxes;
  Json pallets = Json::object();
  for (size_t p = 0; p < s.pallet_to_truck.size(); ++p) {
    if (s.pallet_to_truck[p] >= 0) pallets[in.pallets.at(p).id] = in.trucks.at(s.pallet_to_truck[p]).id;
  }
  j["pallet_to_truck"] = pallets;
  Json routes = Json::object();
  for (size_t k = 0; k < s.routes.size(); ++k) {
    if (s.routes[k].empty()) continue;
    Json seq = Json::array();
    for (int d : s.routes[k]) seq.push_back(in.travel.destinations.at(d));
    routes[in.trucks.at(k).id] = seq;
  }
  j["routes"] = routes;
  if (s.boxes_3d) {
    Json out = Json::object();
    for (size_t i = 0; i < s.boxes_3d->size(); ++i) {
      const auto& p = (*s.boxes_3d)[i];
      Json e;
      e["lo"] = {RationalJson(p.lo[0]), RationalJson(p.lo[1]), RationalJson(p.lo[2])};
      e["hi"] = {RationalJson(p.hi[0]), RationalJson(p.hi[1]), RationalJson(p.hi[2])};
      e["rotation"] = p.rotation;
      out[in.boxes.at(i).id] = e;
    }
    j["box_placements"] = out;
  }
  if (s.pallets_2d) {
    Json out = Json::object();
    for (size_t p = 0; p < s.pallets_2d->size(); ++p) {
      if (p < s.pallet_to_truck.size() && s.pallet_to_truck[p] < 0) continue;
      const auto& pl = (*s.pallets_2d)[p];
      Json e;
      e["lo"] = {RationalJson(pl.lo[0]), RationalJson(pl.lo[1])};
      e["hi"] = {RationalJson(pl.hi[0]), RationalJson(pl.hi[1])};
      e["rotation"] = pl.rotation;
      out[in.pallets.at(p).id] = e;
    }
    j["pallet_placements"] = out;
  }
  return j.dump(2) + "\n";
}

Solution SolutionFromJson(const Instance& in, const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("solution file: parse error: ") + e.what());
  }
  auto box_index = IndexOf(in.boxes);
  auto pallet_index = IndexOf(in.pallets);
  auto truck_index = IndexOf(in.trucks);
  std::map<std::string, int> dest_index;
  for (size_t d = 0; d < in.travel.destinations.size(); ++d) {
    dest_index[in.travel.destinations[d]] = static_cast<int>(d);
  }
  Solution s;
  try {
    s.total_cost = RationalFrom(j.at("total_cost"));
    s.box_to_pallet.assign(in.boxes.size(), -1);
    for (const auto& [box, pallet] : j.at("box_to_pallet").items()) {
      s.box_to_pallet[Lookup(box_index, box, "box")] =
          Lookup(pallet_index, pallet.get<std::string>(), "pallet");
    }
    s.pallet_to_truck.assign(in.pallets.size(), -1);
    for (const auto& [pallet, truck] : j.at("pallet_to_truck").items()) {
      s.pallet_to_truck[Lookup(pallet_index, pallet, "pallet")] =
          Lookup(truck_index, truck.get<std::string>(), "truck");
    }
    s.routes.assign(in.trucks.size(), {});
    for (const auto& [truck, seq] : j.at("routes").items()) {
      auto& route = s.routes[Lookup(truck_index, truck, "truck")];
      for (const auto& d : seq) route.push_back(Lookup(dest_index, d.get<std::string>(), "destination"));
    }
    if (j.contains("box_placements")) {
      std::vector<Placement3D> places(in.boxes.size());
      for (const auto& [box, e] : j.at("box_placements").items()) {
        auto& p = places[Lookup(box_index, box, "box")];
        for (int a = 0; a < 3; ++a) {
          p.lo[a] = RationalFrom(e.at("lo").at(a));
          p.hi[a] = RationalFrom(e.at("hi").at(a));
        }
        p.rotation = e.at("rotation").get<std::array<int, 3>>();
      }
      s.boxes_3d = std::move(places);
    }
    if (j.contains("pallet_placements")) {
      std::vector<Placement2D> places(in.pallets.size());
      for (const auto& [pallet, e] : j.at("pallet_placements").items()) {
        auto& p = places[Lookup(pallet_index, pallet, "pallet")];
        for (int a = 0; a < 2; ++a) {
          p.lo[a] = RationalFrom(e.at("lo").at(a));
          p.hi[a] = RationalFrom(e.at("hi").at(a));
        }
        p.rotation = e.at("rotation").get<std::array<int, 2>>();
      }
      s.pallets_2d = std::move(places);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("solution file: ") + e.what());
  }
  return s;
}

}  // namespace twoscvrp
