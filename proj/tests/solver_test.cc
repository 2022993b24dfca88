#include "twoscvrp/solver.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "twoscvrp/model_build.h"
#include "twoscvrp/verify.h"

using namespace twoscvrp;

namespace {

// max 5a + 4b + 3c s.t. 2a + 3b + c <= 5, 4a + b + 2c <= 11, 3a + 4b + 2c <= 8
// LP optimum 13 at (2, 0, 1).
ModelIR Chvatal() {
  ModelIR m("chvatal");
  VarId a = m.AddVar("a", VarKind::kContinuous);
  VarId b = m.AddVar("b", VarKind::kContinuous);
  VarId c = m.AddVar("c", VarKind::kContinuous);
  m.AddConstraint("r1", {{Rational(2), a}, {Rational(3), b}, {Rational(1), c}}, Sense::kLe, 5);
  m.AddConstraint("r2", {{Rational(4), a}, {Rational(1), b}, {Rational(2), c}}, Sense::kLe, 11);
  m.AddConstraint("r3", {{Rational(3), a}, {Rational(4), b}, {Rational(2), c}}, Sense::kLe, 8);
  m.SetObjective({{Rational(-5), a}, {Rational(-4), b}, {Rational(-3), c}});
  return m;
}

ModelIR Knapsack(const std::vector<int>& w, const std::vector<int>& v, int cap) {
  ModelIR m("knapsack");
  std::vector<Term> row, obj;
  for (size_t i = 0; i < w.size(); ++i) {
    VarId x = m.AddBinary("x" + std::to_string(i));
    row.push_back({Rational(w[i]), x});
    obj.push_back({Rational(-v[i]), x});
  }
  m.AddConstraint("cap", row, Sense::kLe, cap);
  m.SetObjective(obj);
  return m;
}

int BruteKnapsack(const std::vector<int>& w, const std::vector<int>& v, int cap) {
  int best = 0;
  for (unsigned mask = 0; mask < (1u << w.size()); ++mask) {
    int tw = 0, tv = 0;
    for (size_t i = 0; i < w.size(); ++i)
      if (mask >> i & 1) tw += w[i], tv += v[i];
    if (tw <= cap) best = std::max(best, tv);
  }
  return best;
}

class BackendMode {
 public:
  explicit BackendMode(const char* mode) { setenv("MOCK_BACKEND_MODE", mode, 1); }
  ~BackendMode() { unsetenv("MOCK_BACKEND_MODE"); }
};

}  // namespace

TEST(Lp, TextbookOptimum) {
  LpResult r = LpRelax(Chvatal());
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, -13, 1e-9);
  EXPECT_NEAR(r.values[0], 2, 1e-9);
  EXPECT_NEAR(r.values[1], 0, 1e-9);
  EXPECT_NEAR(r.values[2], 1, 1e-9);
}

TEST(Lp, InfeasibleAndUnbounded) {
  ModelIR inf;
  VarId x = inf.AddVar("x", VarKind::kContinuous);
  inf.AddConstraint("lo", {{Rational(1), x}}, Sense::kGe, 3);
  inf.AddConstraint("hi", {{Rational(1), x}}, Sense::kLe, 2);
  EXPECT_EQ(LpRelax(inf).status, LpStatus::kInfeasible);

  ModelIR unb;
  VarId y = unb.AddVar("y", VarKind::kContinuous);
  VarId z = unb.AddVar("z", VarKind::kContinuous);
  unb.AddConstraint("c", {{Rational(1), y}, {Rational(-1), z}}, Sense::kLe, 1);
  unb.SetObjective({{Rational(-1), y}});
  EXPECT_EQ(LpRelax(unb).status, LpStatus::kUnbounded);
}

TEST(Lp, FreeAndBoundedVariables) {
  // min x - y, -3 <= x free below, y <= 4, x + y = 1
  ModelIR m;
  VarId x = m.AddVar("x", VarKind::kContinuous, Rational(-3), std::nullopt);
  VarId y = m.AddVar("y", VarKind::kContinuous, std::nullopt, Rational(4));
  m.AddConstraint("sum", {{Rational(1), x}, {Rational(1), y}}, Sense::kEq, 1);
  m.SetObjective({{Rational(1), x}, {Rational(-1), y}});
  LpResult r = LpRelax(m);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.values[0], -3, 1e-9);
  EXPECT_NEAR(r.values[1], 4, 1e-9);
}

TEST(Lp, DegenerateCycleExample) {
  // Beale's example cycles under plain Dantzig pricing.
  ModelIR m("beale");
  VarId x1 = m.AddVar("x1", VarKind::kContinuous);
  VarId x2 = m.AddVar("x2", VarKind::kContinuous);
  VarId x3 = m.AddVar("x3", VarKind::kContinuous);
  VarId x4 = m.AddVar("x4", VarKind::kContinuous);
  m.AddConstraint("r1", {{Rational(1, 4), x1}, {Rational(-8), x2}, {Rational(-1), x3}, {Rational(9), x4}}, Sense::kLe, 0);
  m.AddConstraint("r2", {{Rational(1, 2), x1}, {Rational(-12), x2}, {Rational(-1, 2), x3}, {Rational(3), x4}}, Sense::kLe, 0);
  m.AddConstraint("r3", {{Rational(1), x3}}, Sense::kLe, 1);
  m.SetObjective({{Rational(-3, 4), x1}, {Rational(20), x2}, {Rational(-1, 2), x3}, {Rational(6), x4}});
  LpResult r = LpRelax(m);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, -1.25, 1e-9);
}

TEST(Bnb, KnapsacksMatchEnumeration) {
  std::mt19937 rng(11);
  for (int rep = 0; rep < 25; ++rep) {
    int n = 3 + rng() % 8;
    std::vector<int> w(n), v(n);
    for (int i = 0; i < n; ++i) w[i] = 1 + rng() % 12, v[i] = 1 + rng() % 20;
    int cap = 5 + rng() % 30;
    SolveOptions o;
    o.strategy = rep % 2 ? SearchStrategy::kBestBound : SearchStrategy::kDepthFirst;
    SolveResult r = SolveBnb(Knapsack(w, v, cap), o);
    ASSERT_EQ(r.status, SolveStatus::kOptimal);
    EXPECT_EQ(r.objective, Rational(-BruteKnapsack(w, v, cap)));
    EXPECT_EQ(r.best_bound, r.objective);
  }
}

TEST(Bnb, IntegerInfeasible) {
  // 2x = 3 has no integer solution.
  ModelIR m;
  VarId x = m.AddVar("x", VarKind::kInteger, 0, 10);
  m.AddConstraint("odd", {{Rational(2), x}}, Sense::kEq, 3);
  SolveResult r = SolveBnb(m);
  EXPECT_EQ(r.status, SolveStatus::kInfeasible);
  EXPECT_FALSE(r.has_solution);
}

TEST(Bnb, GeneralIntegersAndContinuous) {
  // min -x - 2y, x + y <= 3.5, x - y >= -1.5, x integer, y continuous <= 2.2
  ModelIR m;
  VarId x = m.AddVar("x", VarKind::kInteger, 0, 10);
  VarId y = m.AddVar("y", VarKind::kContinuous, 0, Rational(11, 5));
  m.AddConstraint("a", {{Rational(1), x}, {Rational(1), y}}, Sense::kLe, Rational(7, 2));
  m.AddConstraint("b", {{Rational(1), x}, {Rational(-1), y}}, Sense::kGe, Rational(-3, 2));
  m.SetObjective({{Rational(-1), x}, {Rational(-2), y}});
  SolveResult r = SolveBnb(m);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  // x = 1, y = 2.2 gives -5.4; x = 2, y = 1.5 gives -5.
  EXPECT_EQ(r.objective, Rational(-27, 5));
  EXPECT_EQ(r.values[0], Rational(1));
  EXPECT_EQ(r.values[1], Rational(11, 5));
}

TEST(Bnb, NodeLimitReportsLimit) {
  std::vector<int> w{7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}, v{8, 12, 14, 18, 20, 24, 30, 32, 38, 42, 44, 48};
  SolveOptions o;
  o.node_limit = 2;
  SolveResult r = SolveBnb(Knapsack(w, v, 100), o);
  EXPECT_EQ(r.status, SolveStatus::kLimitReached);
  if (r.has_solution) EXPECT_LE(r.best_bound, r.objective);
}

TEST(Bnb, TinyRoutingModelMatchesOracle) {
  GenSpec g;
  g.boxes = 3;
  g.pallets = 2;
  g.trucks = 2;
  g.destinations = 3;
  g.volume = {1, 4};
  g.pallet_capacity = {4, 8};
  g.truck_capacity = {8, 16};
  g.pallet_cost = {1, 5};
  g.truck_cost = {1, 5};
  g.travel_cost = {1, 9};
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    g.seed = seed;
    Instance in = Generate(g);
    OracleResult o = OracleSolve1D(in);
    SolveResult r = SolveBnb(BuildBase1D(in).model);
    ASSERT_EQ(r.status == SolveStatus::kOptimal, o.feasible) << seed;
    if (o.feasible) EXPECT_EQ(r.objective, o.cost) << seed;
  }
}

TEST(CheckPoint, SnapsAndReports) {
  ModelIR m = Knapsack({3, 4}, {1, 1}, 5);
  EXPECT_EQ(CheckPoint(m, {Rational(1), Rational(0)}, 1e-7, 1e-6), "");
  EXPECT_EQ(CheckPoint(m, {Rational::FromDouble(0.9999999, 100'000'000), Rational(0)}, 1e-7, 1e-6), "");
  EXPECT_NE(CheckPoint(m, {Rational(1), Rational(1)}, 1e-7, 1e-6), "");
  EXPECT_NE(CheckPoint(m, {Rational(1, 2), Rational(0)}, 1e-7, 1e-6), "");
  EXPECT_NE(CheckPoint(m, {Rational(1)}, 1e-7, 1e-6), "");
}

TEST(External, SolvesThroughMock) {
  BackendMode mode("solve");
  ModelIR m = Knapsack({3, 4, 5}, {4, 5, 6}, 8);
  SolveResult r = SolveExternal(m, MOCK_BACKEND);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_EQ(r.objective, Rational(-10));
  EXPECT_EQ(SelectSolver(MOCK_BACKEND)(m, {}).objective, Rational(-10));
  EXPECT_EQ(SelectSolver("")(m, {}).objective, Rational(-10));
}

TEST(External, InfeasibleAndLimitCodes) {
  ModelIR m = Knapsack({3}, {4}, 8);
  {
    BackendMode mode("infeasible");
    EXPECT_EQ(SolveExternal(m, MOCK_BACKEND).status, SolveStatus::kInfeasible);
  }
  {
    BackendMode mode("limit");
    SolveResult r = SolveExternal(m, MOCK_BACKEND);
    EXPECT_EQ(r.status, SolveStatus::kLimitReached);
    EXPECT_FALSE(r.has_solution);
  }
  {
    BackendMode mode("bound");
    SolveResult r = SolveExternal(m, MOCK_BACKEND);
    EXPECT_EQ(r.status, SolveStatus::kLimitReached);
    EXPECT_TRUE(r.has_solution);
    EXPECT_EQ(r.best_bound, Rational(-5));
  }
}

TEST(External, SnapsFloatNoise) {
  // x + y = 7/3 with y continuous: the backend's decimal must come back exact.
  ModelIR m;
  VarId x = m.AddVar("x", VarKind::kBinary);
  VarId y = m.AddVar("y", VarKind::kContinuous, Rational(0), Rational(5));
  m.AddConstraint("sum", {{Rational(1), x}, {Rational(1), y}}, Sense::kEq, Rational(7, 3));
  m.SetObjective({{Rational(-1), x}});
  BackendMode mode("noisy");
  SolveResult r = SolveExternal(m, MOCK_BACKEND);
  ASSERT_TRUE(r.has_solution);
  EXPECT_EQ(r.values[x], Rational(1));
  EXPECT_EQ(r.values[y], Rational(4, 3));
}

TEST(External, BadOutputRejected) {
  ModelIR m = Knapsack({3, 4}, {4, 5}, 5);
  for (const char* bad : {"crash", "garbage", "unknown"}) {
    BackendMode mode(bad);
    EXPECT_THROW(SolveExternal(m, MOCK_BACKEND), ExternalSolverError) << bad;
  }
  // All zeros is feasible for a knapsack, so check the rejection on a cover row.
  ModelIR cover = Knapsack({3, 4}, {4, 5}, 5);
  cover.AddConstraint("atleast", {{Rational(1), 0}, {Rational(1), 1}}, Sense::kGe, 1);
  BackendMode mode("zeros");
  try {
    SolveExternal(cover, MOCK_BACKEND);
    FAIL() << "infeasible point accepted";
  } catch (const ExternalSolverError& e) {
    EXPECT_NE(std::string(e.what()).find("rejected"), std::string::npos);
  }
}

TEST(External, SpawnFailure) {
  ModelIR m = Knapsack({3}, {4}, 8);
  EXPECT_THROW(SolveExternal(m, "/nonexistent/backend-binary"), ExternalSolverError);
  EXPECT_THROW(SolveExternal(m, ""), ExternalSolverError);
}
