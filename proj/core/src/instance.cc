#include "twoscvrp/instance.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace twoscvrp {
namespace {

using Json = nlohmann::ordered_json;

bool ValidId(const std::string& id) {
  if (id.empty() || !std::isalpha(static_cast<unsigned char>(id[0]))) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

template <typename T>
void CheckUniqueIds(const std::vector<T>& items, const char* what,
                    std::vector<std::string>& out) {
  std::set<std::string> seen;
  for (const auto& item : items) {
    if (!ValidId(item.id)) {
      out.push_back(std::string(what) + " id '" + item.id +
                    "' must match [A-Za-z][A-Za-z0-9_]*");
    }
    if (!seen.insert(item.id).second) {
      out.push_back(std::string("duplicate ") + what + " id '" + item.id + "'");
    }
  }
}

bool Fits3(std::array<int64_t, 3> item, std::array<int64_t, 3> bin) {
  std::sort(item.begin(), item.end());
  std::sort(bin.begin(), bin.end());
  return item[0] <= bin[0] && item[1] <= bin[1] && item[2] <= bin[2];
}

bool Fits2(std::array<int64_t, 2> item, std::array<int64_t, 2> bin) {
  return (item[0] <= bin[0] && item[1] <= bin[1]) || (item[0] <= bin[1] && item[1] <= bin[0]);
}

const Json& Require(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InstanceError(std::string("instance file: missing key '") + key + "'");
  }
  return obj.at(key);
}

}  // namespace

std::vector<std::string> ValidateInstance(const Instance& in) {
  std::vector<std::string> out;
  const int nd = in.num_destinations();
  if (in.boxes.empty()) out.push_back("instance has no boxes");
  if (in.pallets.empty()) out.push_back("instance has no pallets");
  if (in.trucks.empty()) out.push_back("instance has no trucks");
  if (nd < 1) out.push_back("travel matrix needs a depot and at least one destination");

  const auto& t = in.travel;
  if (t.cost.size() != t.destinations.size()) {
    out.push_back("travel matrix row count differs from destination count");
  }
  for (size_t r = 0; r < t.cost.size(); ++r) {
    if (t.cost[r].size() != t.destinations.size()) {
      out.push_back("travel matrix is not square (row " + std::to_string(r) + ")");
      continue;
    }
    for (size_t c = 0; c < t.cost[r].size(); ++c) {
      if (t.cost[r][c] < 0) out.push_back("negative travel cost at row " + std::to_string(r));
      if (r == c && t.cost[r][c] != 0) {
        out.push_back("travel cost diagonal must be 0 at " + t.destinations[r]);
      }
    }
  }
  {
    std::set<std::string> seen;
    for (const auto& d : t.destinations) {
      if (!ValidId(d)) out.push_back("destination id '" + d + "' must match [A-Za-z][A-Za-z0-9_]*");
      if (!seen.insert(d).second) out.push_back("duplicate destination id '" + d + "'");
    }
  }
  CheckUniqueIds(in.boxes, "box", out);
  CheckUniqueIds(in.pallets, "pallet", out);
  CheckUniqueIds(in.trucks, "truck", out);

  const bool three_d = in.is_3d();
  int64_t max_v = 0, max_cap = 0, max_truck = 0;
  for (const auto& b : in.boxes) {
    if (b.volume < 1) out.push_back("box " + b.id + " volume must be >= 1");
    if (b.destination < 1 || b.destination > nd) {
      out.push_back("box " + b.id + " destination is not a non-depot destination");
    }
    if (three_d != b.dims.has_value()) {
      out.push_back("box " + b.id + (three_d ? " lacks dims in 3D mode" : " has dims in 1D mode"));
    }
    if (b.dims && std::any_of(b.dims->begin(), b.dims->end(), [](int64_t v) { return v < 1; })) {
      out.push_back("box " + b.id + " dims must be >= 1");
    }
    max_v = std::max(max_v, b.volume);
  }
  for (const auto& p : in.pallets) {
    if (p.capacity < 1) out.push_back("pallet " + p.id + " capacity must be >= 1");
    if (p.fix_cost < 0) out.push_back("pallet " + p.id + " fix cost must be >= 0");
    if (three_d != p.dims.has_value()) {
      out.push_back("pallet " + p.id + (three_d ? " lacks dims in 3D mode" : " has dims in 1D mode"));
    }
    if (p.dims && std::any_of(p.dims->begin(), p.dims->end(), [](int64_t v) { return v < 1; })) {
      out.push_back("pallet " + p.id + " dims must be >= 1");
    }
    max_cap = std::max(max_cap, p.capacity);
  }
  for (const auto& k : in.trucks) {
    if (k.capacity < 1) out.push_back("truck " + k.id + " capacity must be >= 1");
    if (k.fix_cost < 0) out.push_back("truck " + k.id + " fix cost must be >= 0");
    if (three_d != k.floor.has_value()) {
      out.push_back("truck " + k.id + (three_d ? " lacks floor dims in 3D mode" : " has floor dims in 1D mode"));
    }
    if (k.floor && ((*k.floor)[0] < 1 || (*k.floor)[1] < 1)) {
      out.push_back("truck " + k.id + " floor dims must be >= 1");
    }
    max_truck = std::max(max_truck, k.capacity);
  }
  if (!in.boxes.empty() && !in.pallets.empty() && max_v > max_cap) {
    out.push_back("box volume " + std::to_string(max_v) + " exceeds every pallet capacity (max " +
                  std::to_string(max_cap) + ")");
  }
  if (!in.pallets.empty() && !in.trucks.empty() && max_cap > max_truck) {
    out.push_back("pallet capacity " + std::to_string(max_cap) +
                  " exceeds every truck capacity (max " + std::to_string(max_truck) + ")");
  }
  return out;
}

void CheckInstance(const Instance& instance) {
  auto defects = ValidateInstance(instance);
  if (!defects.empty()) throw InstanceError("invalid instance: " + defects.front());
}

std::string InstanceToJson(const Instance& in) {
  Json j;
  j["format_version"] = 1;
  j["name"] = in.name;
  j["mode"] = in.is_3d() ? "threeD" : "oneD";
  j["destinations"] = in.travel.destinations;
  j["travel"] = in.travel.cost;
  Json boxes = Json::array();
  for (const auto& b : in.boxes) {
    Json e;
    e["id"] = b.id;
    e["volume"] = b.volume;
    if (b.dims) e["dims"] = *b.dims;
    e["destination"] = in.travel.destinations.at(b.destination);
    boxes.push_back(e);
  }
  j["boxes"] = boxes;
  Json pallets = Json::array();
  for (const auto& p : in.pallets) {
    Json e;
    e["id"] = p.id;
    e["capacity"] = p.capacity;
    e["fix_cost"] = p.fix_cost;
    if (p.dims) e["dims"] = *p.dims;
    pallets.push_back(e);
  }
  j["pallets"] = pallets;
  Json trucks = Json::array();
  for (const auto& k : in.trucks) {
    Json e;
    e["id"] = k.id;
    e["capacity"] = k.capacity;
    e["fix_cost"] = k.fix_cost;
    if (k.floor) e["floor"] = *k.floor;
    trucks.push_back(e);
  }
  j["trucks"] = trucks;

  // Keep matrix rows on one line each; everything else is standard 2-space JSON.
  std::string text = j.dump(2);
  std::ostringstream rows;
  rows << "[\n";
  for (size_t r = 0; r < in.travel.cost.size(); ++r) {
    rows << "    " << Json(in.travel.cost[r]).dump() << (r + 1 < in.travel.cost.size() ? ",\n" : "\n");
  }
  rows << "  ]";
  const std::string key = "\"travel\": ";
  auto pos = text.find(key);
  if (pos != std::string::npos) {
    size_t start = pos + key.size();
    int depth = 0;
    size_t end = start;
    for (; end < text.size(); ++end) {
      if (text[end] == '[') ++depth;
      if (text[end] == ']' && --depth == 0) break;
    }
    text.replace(start, end - start + 1, rows.str());
  }
  return text + "\n";
}

Instance InstanceFromJson(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InstanceError(std::string("instance file: parse error: ") + e.what());
  }
  Instance in;
  try {
    int version = Require(j, "format_version").get<int>();
    if (version != 1) throw InstanceError("instance file: unsupported format_version " + std::to_string(version));
    if (j.contains("name")) in.name = j.at("name").get<std::string>();
    const std::string mode = Require(j, "mode").get<std::string>();
    if (mode == "oneD") {
      in.mode = Mode::kOneD;
    } else if (mode == "threeD") {
      in.mode = Mode::kThreeD;
    } else {
      throw InstanceError("instance file: mode must be oneD or threeD");
    }
    in.travel.destinations = Require(j, "destinations").get<std::vector<std::string>>();
    in.travel.cost = Require(j, "travel").get<std::vector<std::vector<int64_t>>>();
    std::map<std::string, int> dest_index;
    for (size_t d = 0; d < in.travel.destinations.size(); ++d) {
      dest_index[in.travel.destinations[d]] = static_cast<int>(d);
    }
    for (const auto& e : Require(j, "boxes")) {
      BoxItem b;
      b.id = Require(e, "id").get<std::string>();
      b.volume = Require(e, "volume").get<int64_t>();
      if (e.contains("dims")) b.dims = e.at("dims").get<std::array<int64_t, 3>>();
      auto dest = Require(e, "destination").get<std::string>();
      auto it = dest_index.find(dest);
      if (it == dest_index.end()) {
        throw InstanceError("instance file: box " + b.id + " has unknown destination '" + dest + "'");
      }
      b.destination = it->second;
      in.boxes.push_back(b);
    }
    for (const auto& e : Require(j, "pallets")) {
      PalletType p;
      p.id = Require(e, "id").get<std::string>();
      p.capacity = Require(e, "capacity").get<int64_t>();
      p.fix_cost = Require(e, "fix_cost").get<int64_t>();
      if (e.contains("dims")) p.dims = e.at("dims").get<std::array<int64_t, 3>>();
      in.pallets.push_back(p);
    }
    for (const auto& e : Require(j, "trucks")) {
      TruckType k;
      k.id = Require(e, "id").get<std::string>();
      k.capacity = Require(e, "capacity").get<int64_t>();
      k.fix_cost = Require(e, "fix_cost").get<int64_t>();
      if (e.contains("floor")) k.floor = e.at("floor").get<std::array<int64_t, 2>>();
      in.trucks.push_back(k);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InstanceError(std::string("instance file: ") + e.what());
  }
  CheckInstance(in);
  return in;
}

Instance LoadInstance(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InstanceError("cannot open instance file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return InstanceFromJson(ss.str());
}

void SaveInstance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InstanceError("cannot write instance file " + path.string());
  f << InstanceToJson(instance);
  if (!f) throw InstanceError("write failed for " + path.string());
}

std::optional<GenSpec> PresetSpec(const std::string& name) {
  GenSpec s;
  s.name = name;
  auto one_d = [&](int i, int j, int k, int d, IntRange v, IntRange V, IntRange T, IntRange c,
                   IntRange C, IntRange cp) {
    s.boxes = i;
    s.pallets = j;
    s.trucks = k;
    s.destinations = d;
    s.volume = v;
    s.pallet_capacity = V;
    s.truck_capacity = T;
    s.pallet_cost = c;
    s.truck_cost = C;
    s.travel_cost = cp;
  };
  if (name == "ins-1") {
    one_d(5, 5, 1, 5, {1, 5}, {5, 15}, {25, 28}, {5, 10}, {25, 30}, {0, 15});
  } else if (name == "ins-2") {
    one_d(5, 5, 2, 5, {1, 8}, {8, 15}, {20, 25}, {5, 10}, {25, 35}, {0, 15});
  } else if (name == "ins-3") {
    one_d(9, 5, 3, 5, {1, 6}, {10, 15}, {20, 25}, {5, 10}, {25, 35}, {0, 15});
  } else if (name == "ins-4") {
    one_d(9, 5, 3, 5, {1, 5}, {8, 12}, {15, 20}, {3, 10}, {25, 35}, {0, 15});
  } else if (name == "ins-5") {
    one_d(11, 6, 3, 5, {1, 5}, {8, 15}, {15, 25}, {3, 12}, {25, 40}, {0, 15});
  } else if (name == "ins-6") {
    one_d(20, 10, 6, 5, {1, 4}, {5, 15}, {15, 25}, {2, 5}, {3, 6}, {0, 15});
  } else if (name == "ins-large") {
    one_d(20, 10, 6, 16, {1, 4}, {5, 15}, {15, 25}, {2, 5}, {3, 6}, {0, 13});
  } else if (name == "ins-7") {
    one_d(5, 5, 1, 5, {1, 5}, {5, 15}, {36, 48}, {5, 10}, {25, 30}, {0, 15});
    s.three_d = true;
    s.box_side = {1, 5};
    s.pallet_side = {1, 6};
    s.truck_side = {5, 8};
  } else if (name == "ins-8") {
    one_d(9, 5, 3, 5, {1, 6}, {10, 15}, {20, 25}, {5, 10}, {25, 35}, {0, 15});
    s.three_d = true;
    s.box_side = {1, 5};
    s.pallet_side = {1, 6};
    s.truck_side = {2, 10};
  } else if (name == "ins-9") {
    one_d(20, 10, 6, 5, {1, 6}, {3, 15}, {12, 25}, {2, 5}, {3, 6}, {0, 15});
    s.three_d = true;
    s.box_side = {1, 5};
    s.pallet_side = {1, 5};
    s.truck_side = {2, 6};
  } else {
    return std::nullopt;
  }
  return s;
}

std::vector<std::string> PresetNames() {
  return {"ins-1", "ins-2", "ins-3", "ins-4", "ins-5", "ins-6",
          "ins-large", "ins-7", "ins-8", "ins-9"};
}

Instance Generate(const GenSpec& spec) {
  auto bad_range = [](IntRange r) { return r.lo > r.hi; };
  if (spec.boxes < 1 || spec.pallets < 1 || spec.trucks < 1 || spec.destinations < 1) {
    throw InstanceError("generate: all counts must be >= 1");
  }
  if (bad_range(spec.volume) || bad_range(spec.pallet_capacity) || bad_range(spec.truck_capacity) ||
      bad_range(spec.pallet_cost) || bad_range(spec.truck_cost) || bad_range(spec.travel_cost) ||
      (spec.three_d && (bad_range(spec.box_side) || bad_range(spec.pallet_side) ||
                        bad_range(spec.truck_side)))) {
    throw InstanceError("generate: range with lo > hi");
  }
  if (spec.volume.lo < 1 || spec.pallet_capacity.lo < 1 || spec.truck_capacity.lo < 1 ||
      spec.pallet_cost.lo < 0 || spec.truck_cost.lo < 0 || spec.travel_cost.lo < 0 ||
      (spec.three_d && (spec.box_side.lo < 1 || spec.pallet_side.lo < 1 || spec.truck_side.lo < 1))) {
    throw InstanceError("generate: range lows violate instance invariants");
  }

  std::mt19937_64 rng(spec.seed);
  auto draw = [&rng](IntRange r) {
    return std::uniform_int_distribution<int64_t>(r.lo, r.hi)(rng);
  };

  for (int attempt = 0; attempt < std::max(1, spec.max_retries); ++attempt) {
    Instance in;
    in.name = spec.name;
    in.mode = spec.three_d ? Mode::kThreeD : Mode::kOneD;
    const int nd = spec.destinations;
    in.travel.destinations.push_back("D0");
    for (int d = 1; d <= nd; ++d) in.travel.destinations.push_back("D" + std::to_string(d));
    in.travel.cost.assign(nd + 1, std::vector<int64_t>(nd + 1, 0));
    for (int a = 0; a <= nd; ++a) {
      for (int b = a + 1; b <= nd; ++b) {
        in.travel.cost[a][b] = in.travel.cost[b][a] = draw(spec.travel_cost);
      }
    }
    for (int i = 0; i < spec.boxes; ++i) {
      BoxItem b;
      b.id = "I" + std::to_string(i + 1);
      b.volume = draw(spec.volume);
      if (spec.three_d) b.dims = {draw(spec.box_side), draw(spec.box_side), draw(spec.box_side)};
      b.destination = static_cast<int>(std::uniform_int_distribution<int>(1, nd)(rng));
      in.boxes.push_back(b);
    }
    for (int j = 0; j < spec.pallets; ++j) {
      PalletType p;
      p.id = "J" + std::to_string(j + 1);
      p.capacity = draw(spec.pallet_capacity);
      p.fix_cost = draw(spec.pallet_cost);
      if (spec.three_d) p.dims = {draw(spec.pallet_side), draw(spec.pallet_side), draw(spec.pallet_side)};
      in.pallets.push_back(p);
    }
    for (int k = 0; k < spec.trucks; ++k) {
      TruckType t;
      t.id = "K" + std::to_string(k + 1);
      t.capacity = draw(spec.truck_capacity);
      t.fix_cost = draw(spec.truck_cost);
      if (spec.three_d) t.floor = {draw(spec.truck_side), draw(spec.truck_side)};
      in.trucks.push_back(t);
    }
    if (!ValidateInstance(in).empty()) continue;
    if (spec.three_d) {
      // Geometric analogue of the volume preconditions: every box fits some
      // pallet and every pallet footprint fits some truck floor.
      bool ok = std::all_of(in.boxes.begin(), in.boxes.end(), [&](const BoxItem& b) {
        return std::any_of(in.pallets.begin(), in.pallets.end(),
                           [&](const PalletType& p) { return Fits3(*b.dims, *p.dims); });
      });
      ok = ok && std::all_of(in.pallets.begin(), in.pallets.end(), [&](const PalletType& p) {
        return std::any_of(in.trucks.begin(), in.trucks.end(), [&](const TruckType& t) {
          return Fits2({(*p.dims)[0], (*p.dims)[1]}, *t.floor);
        });
      });
      if (!ok) continue;
    }
    return in;
  }
  throw InstanceError("generate: preconditions unsatisfiable after " +
                      std::to_string(spec.max_retries) + " draws");
}

Instance BuiltinRealInstance() {
  Instance in;
  in.name = "real";
  in.mode = Mode::kThreeD;
  in.travel.destinations = {"D0", "D1", "D2", "D3", "D4", "D5"};
  in.travel.cost = {{0, 2, 2, 3, 8, 7},   {2, 0, 3, 2, 11, 13}, {2, 3, 0, 5, 1, 1},
                    {3, 2, 5, 0, 14, 12}, {8, 11, 1, 14, 0, 3}, {7, 13, 1, 12, 3, 0}};
  struct Row {
    int64_t l, w, h, v;
    int d;
  };
  const Row boxes[] = {
      {475, 475, 475, 11, 1}, {475, 475, 475, 11, 1}, {475, 475, 475, 11, 2},
      {326, 264, 127, 1, 3},  {326, 264, 127, 1, 3},  {360, 350, 416, 5, 4},
      {490, 425, 100, 2, 4},  {540, 335, 195, 4, 2},  {560, 325, 345, 6, 5},
      {312, 270, 170, 1, 3},  {470, 365, 415, 7, 5},  {550, 340, 130, 2, 5},
      {380, 345, 110, 1, 1},  {310, 270, 130, 1, 3},  {395, 165, 167, 1, 1},
      {395, 165, 167, 1, 2},  {390, 315, 175, 2, 5},  {310, 240, 240, 2, 4},
      {525, 405, 125, 3, 4},
  };
  int n = 0;
  for (const auto& r : boxes) {
    in.boxes.push_back({"I" + std::to_string(++n), r.v, std::array<int64_t, 3>{r.l, r.w, r.h}, r.d});
  }
  in.pallets = {
      {"J1", 51, 6, std::array<int64_t, 3>{800, 800, 800}},
      {"J2", 51, 6, std::array<int64_t, 3>{800, 800, 800}},
      {"J3", 40, 5, std::array<int64_t, 3>{1000, 800, 500}},
      {"J4", 35, 4, std::array<int64_t, 3>{1000, 700, 500}},
      {"J5", 36, 4, std::array<int64_t, 3>{900, 400, 1000}},
      {"J6", 27, 2, std::array<int64_t, 3>{900, 300, 1000}},
  };
  // Truck heights (1000/800/800) are not used by the one-storey truck model.
  in.trucks = {
      {"K1", 160, 10, std::array<int64_t, 2>{1600, 1000}},
      {"K2", 96, 6, std::array<int64_t, 2>{1000, 1200}},
      {"K3", 40, 3, std::array<int64_t, 2>{500, 1000}},
  };
  return in;
}

}  // namespace twoscvrp
