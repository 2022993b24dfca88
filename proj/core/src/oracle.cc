#include <algorithm>
#include <limits>
#include <random>
#include <set>

#include "twoscvrp/verify.h"

namespace twoscvrp {

RouteResult OracleRoute(const std::vector<int>& calling, const TravelMatrix& travel) {
  std::vector<int> nodes(calling);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  const int n = static_cast<int>(nodes.size());
  if (n > 10) throw OracleError("oracle_route: calling set larger than 10");
  for (int d : nodes) {
    if (d < 1 || d > travel.num_destinations()) throw OracleError("oracle_route: unknown destination " + std::to_string(d));
  }
  if (n == 0) return {Rational(0), {0}};

  // rest[S][v]: cheapest way to start at nodes[v], visit the set S (v not in S)
  // and return to the depot.
  const int full = (1 << n) - 1;
  constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;
  std::vector<std::vector<int64_t>> rest(1 << n, std::vector<int64_t>(n, kInf));
  for (int v = 0; v < n; ++v) rest[0][v] = travel(nodes[v], 0);
  for (int S = 1; S <= full; ++S) {
    for (int v = 0; v < n; ++v) {
      if (S & (1 << v)) continue;
      int64_t best = kInf;
      for (int w = 0; w < n; ++w) {
        if (!(S & (1 << w))) continue;
        best = std::min(best, travel(nodes[v], nodes[w]) + rest[S & ~(1 << w)][w]);
      }
      rest[S][v] = best;
    }
  }
  int64_t cost = kInf;
  for (int v = 0; v < n; ++v) cost = std::min(cost, travel(0, nodes[v]) + rest[full & ~(1 << v)][v]);

  // Walk forward taking the smallest destination that stays optimal.
  RouteResult out{Rational(cost), {0}};
  int S = full, at = 0;
  int64_t remaining = cost;
  while (S) {
    for (int w = 0; w < n; ++w) {
      if (!(S & (1 << w))) continue;
      int64_t via = travel(at, nodes[w]) + rest[S & ~(1 << w)][w];
      if (via == remaining) {
        remaining -= travel(at, nodes[w]);
        at = nodes[w];
        S &= ~(1 << w);
        out.sequence.push_back(at);
        break;
      }
    }
  }
  out.sequence.push_back(0);
  return out;
}

OracleResult OracleSolve1D(const Instance& in) {
  CheckInstance(in);
  const int I = in.num_boxes(), J = in.num_pallets(), K = in.num_trucks(), D = in.num_destinations();
  if (in.is_3d()) throw OracleError("oracle_solve_1d: 1D instances only");
  if (I > 5 || J > 3 || K > 2 || D > 4) throw OracleError("oracle_solve_1d: instance exceeds |I|<=5, |J|<=3, |K|<=2, |D|<=4");

  // A truck may call at more places than its cargo needs, so the cheapest
  // tour for a demand set is the best over all its supersets.
  const int subsets = 1 << D;
  std::vector<RouteResult> tour(subsets);
  for (int S = 0; S < subsets; ++S) {
    std::vector<int> calling;
    for (int d = 0; d < D; ++d)
      if (S & (1 << d)) calling.push_back(d + 1);
    tour[S] = OracleRoute(calling, in.travel);
  }
  std::vector<int> cover(subsets);
  for (int need = 0; need < subsets; ++need) {
    int best = need;
    for (int S = need; S < subsets; S = (S + 1) | need) {
      if (tour[S].cost < tour[best].cost) best = S;
    }
    cover[need] = best;
  }

  OracleResult result;
  std::vector<int> box_map(I, 0);
  std::vector<int64_t> load(J);
  while (true) {
    std::fill(load.begin(), load.end(), 0);
    for (int i = 0; i < I; ++i) load[box_map[i]] += in.boxes[i].volume;
    bool fits = true;
    std::vector<int> used;
    for (int j = 0; j < J; ++j) {
      if (load[j] > in.pallets[j].capacity) fits = false;
      if (load[j] > 0) used.push_back(j);
    }
    if (fits) {
      std::vector<int> need_of(J, 0);
      for (int i = 0; i < I; ++i) need_of[box_map[i]] |= 1 << (in.boxes[i].destination - 1);
      Rational pallet_cost(0);
      for (int j : used) pallet_cost += Rational(in.pallets[j].fix_cost);
      const int U = static_cast<int>(used.size());
      std::vector<int> truck_of(U, 0);
      while (true) {
        std::vector<int64_t> tload(K, 0);
        std::vector<int> need(K, 0);
        std::vector<bool> active(K, false);
        for (int u = 0; u < U; ++u) {
          tload[truck_of[u]] += in.pallets[used[u]].capacity;
          need[truck_of[u]] |= need_of[used[u]];
          active[truck_of[u]] = true;
        }
        bool ok = true;
        Rational cost = pallet_cost;
        for (int k = 0; k < K && ok; ++k) {
          if (!active[k]) continue;
          if (tload[k] > in.trucks[k].capacity) ok = false;
          cost += Rational(in.trucks[k].fix_cost) + tour[cover[need[k]]].cost;
        }
        if (ok && (!result.feasible || cost < result.cost)) {
          Solution s;
          s.box_to_pallet = box_map;
          s.pallet_to_truck.assign(J, -1);
          for (int u = 0; u < U; ++u) s.pallet_to_truck[used[u]] = truck_of[u];
          s.routes.assign(K, {});
          for (int k = 0; k < K; ++k)
            if (active[k]) s.routes[k] = tour[cover[need[k]]].sequence;
          s.total_cost = cost;
          result = {true, cost, std::move(s)};
        }
        int u = 0;
        while (u < U && ++truck_of[u] == K) truck_of[u++] = 0;
        if (u == U) break;
      }
    }
    int i = 0;
    while (i < I && ++box_map[i] == J) box_map[i++] = 0;
    if (i == I) break;
  }
  return result;
}

namespace {

// Shifts a placement by delta along axis a.
void Shift(Placement3D& p, int a, const Rational& delta) {
  p.lo[a] += delta;
  p.hi[a] += delta;
}

}  // namespace

std::vector<Mutation> MutateSuite(const Instance& in, const Solution& base, uint64_t seed,
                                  const VerifyConfig& config) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<uint64_t>(n)); };
  const int I = in.num_boxes(), J = in.num_pallets(), K = in.num_trucks();
  std::vector<Mutation> out;
  out.push_back({"identity", "", base});

  auto recost = [&](Solution& s) { s.total_cost = SolutionCost(in, s); };
  std::vector<int> used_pallets, used_trucks;
  for (int j = 0; j < J; ++j)
    if (base.pallet_to_truck[j] >= 0) used_pallets.push_back(j);
  for (int k = 0; k < K; ++k)
    if (!base.routes[k].empty()) used_trucks.push_back(k);

  // Everything onto one used pallet until it overflows.
  if (!used_pallets.empty()) {
    int j = used_pallets[pick(static_cast<int>(used_pallets.size()))];
    Solution s = base;
    int64_t load = 0;
    for (int i = 0; i < I; ++i)
      if (s.box_to_pallet[i] == j) load += in.boxes[i].volume;
    for (int i = 0; i < I && load <= in.pallets[j].capacity; ++i) {
      if (s.box_to_pallet[i] == j) continue;
      s.box_to_pallet[i] = j;
      load += in.boxes[i].volume;
    }
    if (load > in.pallets[j].capacity) {
      recost(s);
      out.push_back({"pallet_overflow", "capacity.pallet", std::move(s)});
    }
  }
  // Every used pallet onto one truck.
  if (!used_pallets.empty() && !used_trucks.empty()) {
    int k = used_trucks[pick(static_cast<int>(used_trucks.size()))];
    Solution s = base;
    int64_t load = 0;
    for (int j = 0; j < J; ++j) {
      if (s.pallet_to_truck[j] < 0) continue;
      s.pallet_to_truck[j] = k;
      load += in.pallets[j].capacity;
    }
    // Adding an unused pallet pushes further if needed.
    for (int j = 0; j < J && load <= in.trucks[k].capacity; ++j) {
      if (s.pallet_to_truck[j] >= 0) continue;
      s.pallet_to_truck[j] = k;
      load += in.pallets[j].capacity;
    }
    if (load > in.trucks[k].capacity) {
      recost(s);
      out.push_back({"truck_overflow", "capacity.truck", std::move(s)});
    }
  }
  // A box moved to a pallet no truck carries.
  for (int j = 0; j < J; ++j) {
    if (base.pallet_to_truck[j] >= 0 || I == 0) continue;
    Solution s = base;
    s.box_to_pallet[pick(I)] = j;
    recost(s);
    out.push_back({"box_on_unused_pallet", "assignment.pallet", std::move(s)});
    break;
  }
  if (I > 0) {
    Solution s = base;
    s.box_to_pallet[pick(I)] = -1;
    recost(s);
    out.push_back({"unassigned_box", "assignment.box", std::move(s)});
  }
  if (!used_trucks.empty()) {
    const int k = used_trucks[pick(static_cast<int>(used_trucks.size()))];
    const auto& r = base.routes[k];
    {
      // Return to the depot halfway: two subtours.
      Solution s = base;
      auto& route = s.routes[k];
      route.insert(route.begin() + 1 + pick(static_cast<int>(route.size()) - 1), 0);
      recost(s);
      out.push_back({"subtour_splice", "route.shape", std::move(s)});
    }
    {
      Solution s = base;
      auto& route = s.routes[k];
      route.insert(route.begin() + 1, r[1]);
      recost(s);
      out.push_back({"repeated_call", "route.shape", std::move(s)});
    }
    // Dropping a destination that some cargo needs.
    std::set<int> cargo;
    for (int i = 0; i < I; ++i) {
      int j = base.box_to_pallet[i];
      if (j >= 0 && base.pallet_to_truck[j] == k) cargo.insert(in.boxes[i].destination);
    }
    std::vector<size_t> droppable;
    for (size_t p = 1; p + 1 < r.size(); ++p)
      if (cargo.count(r[p])) droppable.push_back(p);
    if (!droppable.empty() && r.size() > 3) {
      Solution s = base;
      s.routes[k].erase(s.routes[k].begin() + droppable[pick(static_cast<int>(droppable.size()))]);
      recost(s);
      out.push_back({"dropped_call", "route.calling", std::move(s)});
    }
    {
      Solution s = base;
      s.routes[k].clear();
      recost(s);
      out.push_back({"route_cleared", "route.unused_truck", std::move(s)});
    }
  }
  {
    Solution s = base;
    s.total_cost += Rational(1 + pick(5));
    out.push_back({"cost_off", "cost.mismatch", std::move(s)});
  }

  if (base.boxes_3d && in.is_3d()) {
    const auto& pl = *base.boxes_3d;
    std::vector<int> placed;
    for (int i = 0; i < I; ++i)
      if (base.box_to_pallet[i] >= 0 && base.pallet_to_truck[base.box_to_pallet[i]] >= 0) placed.push_back(i);
    if (!placed.empty()) {
      const int i = placed[pick(static_cast<int>(placed.size()))];
      const int j = base.box_to_pallet[i];
      {
        Solution s = base;
        auto& p = (*s.boxes_3d)[i];
        const int a = pick(3);
        Shift(p, a, Rational((*in.pallets[j].dims)[a]) - p.lo[a]);
        out.push_back({"containment_shift", "geometry.containment", std::move(s)});
      }
      {
        Solution s = base;
        auto& p = (*s.boxes_3d)[i];
        p.hi[0] += Rational(1);
        out.push_back({"extent_corrupt", "geometry.rotation", std::move(s)});
      }
      {
        Solution s = base;
        (*s.boxes_3d)[i].rotation = {0, 0, 1};
        out.push_back({"rotation_corrupt", "geometry.rotation", std::move(s)});
      }
    }
    // Two boxes on one pallet: put the second on top of the first's spot.
    for (size_t x = 0; x < placed.size(); ++x) {
      for (size_t y = x + 1; y < placed.size(); ++y) {
        const int i = placed[x], i2 = placed[y];
        if (base.box_to_pallet[i] != base.box_to_pallet[i2]) continue;
        Solution s = base;
        auto& q = (*s.boxes_3d)[i2];
        for (int a = 0; a < 3; ++a) Shift(q, a, pl[i].lo[a] - q.lo[a]);
        out.push_back({"overlap_injection", "geometry.overlap", std::move(s)});
        x = placed.size();
        break;
      }
    }
    // Stacking / order inversion: one box put directly above another.
    if (config.check_delivery_order) {
      bool done = false;
      for (int i = 0; i < I && !done; ++i) {
        for (int i2 = 0; i2 < I && !done; ++i2) {
          if (i == i2) continue;
          int j = base.box_to_pallet[i];
          if (j < 0 || j != base.box_to_pallet[i2] || base.pallet_to_truck[j] < 0) continue;
          const std::string rule = config.stacking == StackingRule::kLiteral ? "geometry.stacking" : "order.box";
          if (rule == "order.box") {
            int k = base.pallet_to_truck[j];
            const auto& r = base.routes[k];
            bool next = false;
            for (size_t p = 0; p + 1 < r.size(); ++p)
              if (r[p] == in.boxes[i].destination && r[p + 1] == in.boxes[i2].destination) next = true;
            if (!next) continue;
          }
          Solution s = base;
          auto& q = (*s.boxes_3d)[i2];
          Shift(q, 0, pl[i].lo[0] - q.lo[0]);
          Shift(q, 1, pl[i].lo[1] - q.lo[1]);
          Shift(q, 2, pl[i].hi[2] - q.lo[2]);
          out.push_back({"stack_inversion", rule, std::move(s)});
          done = true;
        }
      }
    }
  }
  if (base.pallets_2d && in.is_3d() && config.check_delivery_order) {
    const auto& pl = *base.pallets_2d;
    std::vector<std::set<int>> dests(J);
    for (int i = 0; i < I; ++i)
      if (base.box_to_pallet[i] >= 0) dests[base.box_to_pallet[i]].insert(in.boxes[i].destination);
    bool done = false;
    for (int j = 0; j < J && !done; ++j) {
      for (int j2 = 0; j2 < J && !done; ++j2) {
        const int k = base.pallet_to_truck[j];
        if (j == j2 || k < 0 || k != base.pallet_to_truck[j2]) continue;
        const auto& r = base.routes[k];
        bool next = false;
        for (int d : dests[j])
          for (int d2 : dests[j2])
            for (size_t p = 0; d != d2 && p + 1 < r.size(); ++p)
              if (r[p] == d && r[p + 1] == d2) next = true;
        if (!next) continue;
        // j now lies entirely right of j2.
        Solution s = base;
        auto& p = (*s.pallets_2d)[j];
        Rational delta = pl[j2].hi[0] - p.lo[0];
        p.lo[0] += delta;
        p.hi[0] += delta;
        out.push_back({"pallet_order_inversion", "order.pallet", std::move(s)});
        done = true;
      }
    }
  }
  return out;
}

}  // namespace twoscvrp
