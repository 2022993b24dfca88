#include "twoscvrp/verify.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace twoscvrp;

namespace {

// Two destinations, three boxes, two pallets, two trucks.
Instance Line() {
  Instance in;
  in.name = "line";
  in.travel.destinations = {"D0", "D1", "D2"};
  in.travel.cost = {{0, 2, 5}, {2, 0, 4}, {5, 4, 0}};
  in.boxes = {{"I1", 2, std::nullopt, 1}, {"I2", 3, std::nullopt, 2}, {"I3", 1, std::nullopt, 1}};
  in.pallets = {{"J1", 4, 3, std::nullopt}, {"J2", 4, 2, std::nullopt}};
  in.trucks = {{"K1", 8, 10, std::nullopt}, {"K2", 4, 6, std::nullopt}};
  return in;
}

// I1, I3 on J1; I2 on J2; both pallets on K1: 3 + 2 + 10 + (2 + 4 + 5).
Solution LineSolution() {
  Solution s;
  s.box_to_pallet = {0, 1, 0};
  s.pallet_to_truck = {0, 0};
  s.routes = {{0, 1, 2, 0}, {}};
  s.total_cost = Rational(26);
  return s;
}

// Unit-cube boxes on 2x1x1 pallets, 3D.
Instance Cubes() {
  Instance in;
  in.name = "cubes";
  in.mode = Mode::kThreeD;
  in.travel.destinations = {"D0", "D1", "D2"};
  in.travel.cost = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  in.boxes = {{"I1", 1, std::array<int64_t, 3>{1, 1, 1}, 1}, {"I2", 1, std::array<int64_t, 3>{1, 2, 1}, 2}};
  in.pallets = {{"J1", 3, 1, std::array<int64_t, 3>{3, 1, 1}}, {"J2", 3, 1, std::array<int64_t, 3>{3, 1, 1}}};
  in.trucks = {{"K1", 6, 1, std::array<int64_t, 2>{3, 2}}};
  return in;
}

Solution CubesSolution() {
  Solution s;
  s.box_to_pallet = {0, 0};
  s.pallet_to_truck = {0, -1};
  s.routes = {{0, 1, 2, 0}};
  Placement3D a, b;
  a.lo = {Rational(0), Rational(0), Rational(0)};
  a.hi = {Rational(1), Rational(1), Rational(1)};
  b.lo = {Rational(1), Rational(0), Rational(0)};
  b.hi = {Rational(3), Rational(1), Rational(1)};
  b.rotation = {1, 0, 2};
  s.boxes_3d = std::vector<Placement3D>{a, b};
  Placement2D p, q;
  p.lo = {Rational(0), Rational(0)};
  p.hi = {Rational(3), Rational(1)};
  q.lo = {Rational(0), Rational(1)};
  q.hi = {Rational(3), Rational(2)};
  s.pallets_2d = std::vector<Placement2D>{p, q};
  s.total_cost = Rational(1 + 1 + 3);
  return s;
}

}  // namespace

TEST(Verify, AcceptsValidSolution) {
  VerifyReport r = Verify(Line(), LineSolution());
  EXPECT_TRUE(r.ok()) << r.ToJson();
  EXPECT_EQ(r.recomputed_cost, Rational(26));
  EXPECT_NE(r.ToJson().find("\"ok\": true"), std::string::npos);
}

TEST(Verify, EachRuleFires) {
  const Instance in = Line();
  auto expect = [&](const Solution& s, const std::string& rule) {
    VerifyReport r = Verify(in, s);
    EXPECT_TRUE(r.Has(rule)) << rule << "\n" << r.ToJson();
  };
  Solution s = LineSolution();
  s.box_to_pallet[1] = 5;
  expect(s, "assignment.box");

  s = LineSolution();
  s.pallet_to_truck[1] = -1;
  expect(s, "assignment.pallet");

  s = LineSolution();
  s.box_to_pallet = {0, 0, 0};
  s.total_cost = SolutionCost(in, s);
  expect(s, "capacity.pallet");

  s = LineSolution();
  s.pallet_to_truck = {1, 1};
  s.routes = {{}, {0, 1, 2, 0}};
  s.total_cost = SolutionCost(in, s);
  expect(s, "capacity.truck");

  s = LineSolution();
  s.routes[0] = {0, 1, 0, 2, 0};
  expect(s, "route.shape");
  s.routes[0] = {1, 2, 0};
  expect(s, "route.shape");

  s = LineSolution();
  s.routes[0] = {0, 1, 0};
  s.total_cost = SolutionCost(in, s);
  expect(s, "route.calling");

  s = LineSolution();
  s.routes[0] = {};
  expect(s, "route.unused_truck");

  s = LineSolution();
  s.total_cost = Rational(25);
  expect(s, "cost.mismatch");
}

TEST(Verify, GeometryRules) {
  const Instance in = Cubes();
  ASSERT_TRUE(Verify(in, CubesSolution()).ok()) << Verify(in, CubesSolution()).ToJson();
  auto expect = [&](const Solution& s, const std::string& rule) {
    VerifyReport r = Verify(in, s);
    EXPECT_TRUE(r.Has(rule)) << rule << "\n" << r.ToJson();
  };
  Solution s = CubesSolution();
  s.boxes_3d.reset();
  expect(s, "geometry.missing");

  s = CubesSolution();
  (*s.boxes_3d)[1].hi[0] = Rational(4);
  expect(s, "geometry.rotation");

  s = CubesSolution();
  (*s.boxes_3d)[1].lo[0] = Rational(2);
  (*s.boxes_3d)[1].hi[0] = Rational(4);
  expect(s, "geometry.containment");

  s = CubesSolution();
  (*s.boxes_3d)[1].lo[0] = Rational(1, 2);
  (*s.boxes_3d)[1].hi[0] = Rational(5, 2);
  expect(s, "geometry.overlap");

  s = CubesSolution();
  (*s.pallets_2d)[0].hi[1] = Rational(3);
  expect(s, "geometry.rotation");
}

TEST(Verify, StackingReadings) {
  // Two 1x1x1 boxes stacked in a 1x1x2 pallet: I2 (delivered second) on top of I1.
  Instance in = Cubes();
  in.boxes[1].dims = std::array<int64_t, 3>{1, 1, 1};
  in.pallets[0].dims = std::array<int64_t, 3>{1, 1, 2};
  in.pallets[1].dims = std::array<int64_t, 3>{1, 1, 2};
  Solution s = CubesSolution();
  (*s.boxes_3d)[1].lo = {Rational(0), Rational(0), Rational(1)};
  (*s.boxes_3d)[1].hi = {Rational(1), Rational(1), Rational(2)};
  (*s.boxes_3d)[1].rotation = {0, 1, 2};
  (*s.pallets_2d)[0].hi = {Rational(1), Rational(1)};
  (*s.pallets_2d)[1].lo = {Rational(0), Rational(1)};
  (*s.pallets_2d)[1].hi = {Rational(1), Rational(2)};
  EXPECT_TRUE(Verify(in, s, {StackingRule::kLiteral, true, true}).Has("geometry.stacking"));
  EXPECT_TRUE(Verify(in, s, {StackingRule::kDeliveryOrder, true, true}).Has("order.box"));
  EXPECT_TRUE(Verify(in, s, {StackingRule::kDeliveryOrder, true, false}).ok());
  // Reverse the stack: the later box at the bottom is fine under delivery order.
  std::swap((*s.boxes_3d)[0], (*s.boxes_3d)[1]);
  EXPECT_TRUE(Verify(in, s, {StackingRule::kDeliveryOrder, true, true}).ok());
  EXPECT_TRUE(Verify(in, s, {StackingRule::kLiteral, true, true}).Has("geometry.stacking"));
}

TEST(OracleRoute, SmallCases) {
  TravelMatrix t = Line().travel;
  auto r = OracleRoute({}, t);
  EXPECT_EQ(r.cost, Rational(0));
  EXPECT_EQ(r.sequence, std::vector<int>{0});
  r = OracleRoute({2}, t);
  EXPECT_EQ(r.cost, Rational(10));
  EXPECT_EQ(r.sequence, (std::vector<int>{0, 2, 0}));
  r = OracleRoute({2, 1, 2}, t);
  EXPECT_EQ(r.cost, Rational(11));
  EXPECT_EQ(r.sequence, (std::vector<int>{0, 1, 2, 0}));
  EXPECT_THROW(OracleRoute({3}, t), OracleError);
  EXPECT_THROW(OracleRoute({0}, t), OracleError);
}

TEST(OracleRoute, RealTravelFullSet) {
  TravelMatrix t = BuiltinRealInstance().travel;
  RouteResult r = OracleRoute({1, 2, 3, 4, 5}, t);
  EXPECT_EQ(r.cost, Rational(19));
  // Brute force over every order.
  std::vector<int> p{1, 2, 3, 4, 5};
  int64_t best = INT64_MAX;
  do {
    int64_t c = t(0, p[0]) + t(p.back(), 0);
    for (size_t q = 0; q + 1 < p.size(); ++q) c += t(p[q], p[q + 1]);
    best = std::min(best, c);
  } while (std::next_permutation(p.begin(), p.end()));
  EXPECT_EQ(best, 19);
}

TEST(Oracle, SolvesHandInstance) {
  OracleResult o = OracleSolve1D(Line());
  ASSERT_TRUE(o.feasible);
  // J1 + J2 on K1 costs 3 + 2 + 10 + 11 = 26; one pallet cannot hold all 6.
  // K2 can only take one pallet, K1 and K2 together pay 16 in fixed costs.
  EXPECT_EQ(o.cost, Rational(26));
  EXPECT_TRUE(Verify(Line(), o.solution).ok());
  EXPECT_EQ(o.solution.total_cost, o.cost);
}

TEST(Oracle, InfeasibleVerdict) {
  Instance in = Line();
  // Each truck now holds only one pallet and both pallets are needed.
  in.trucks.pop_back();
  in.trucks[0].capacity = 4;
  OracleResult o = OracleSolve1D(in);
  EXPECT_FALSE(o.feasible);
}

TEST(Oracle, SizeLimits) {
  Instance in = Line();
  for (int i = 0; i < 3; ++i) in.boxes.push_back({"X" + std::to_string(i), 1, std::nullopt, 1});
  EXPECT_THROW(OracleSolve1D(in), OracleError);
  EXPECT_THROW(OracleSolve1D(Cubes()), OracleError);
}

TEST(Mutations, AllDetectedOnLine) {
  const Instance in = Line();
  auto suite = MutateSuite(in, LineSolution(), 7);
  ASSERT_GE(suite.size(), 8u);
  EXPECT_EQ(suite.front().name, "identity");
  for (const auto& m : suite) {
    VerifyReport r = Verify(in, m.solution);
    if (m.expected_rule.empty()) EXPECT_TRUE(r.ok()) << m.name;
    else EXPECT_TRUE(r.Has(m.expected_rule)) << m.name << " expected " << m.expected_rule << "\n" << r.ToJson();
  }
}

TEST(Mutations, GeometryDetectedOnCubes) {
  const Instance in = Cubes();
  auto suite = MutateSuite(in, CubesSolution(), 3);
  int geometry = 0;
  for (const auto& m : suite) {
    VerifyReport r = Verify(in, m.solution);
    if (m.expected_rule.rfind("geometry.", 0) == 0 || m.expected_rule.rfind("order.", 0) == 0) ++geometry;
    if (m.expected_rule.empty()) EXPECT_TRUE(r.ok()) << m.name;
    else EXPECT_TRUE(r.Has(m.expected_rule)) << m.name << " expected " << m.expected_rule << "\n" << r.ToJson();
  }
  EXPECT_GE(geometry, 3);
}

TEST(Mutations, Deterministic) {
  auto a = MutateSuite(Line(), LineSolution(), 9), b = MutateSuite(Line(), LineSolution(), 9);
  ASSERT_EQ(a.size(), b.size());
  for (size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].solution, b[k].solution);
}
