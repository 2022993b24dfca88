#include "twoscvrp/mps.h"

#include <gtest/gtest.h>

#include <random>

#include "twoscvrp/model_build.h"

using namespace twoscvrp;

namespace {

ModelIR Mixed() {
  ModelIR m("mixed");
  VarId x = m.AddBinary("x");
  VarId y = m.AddVar("y", VarKind::kInteger, -2, 9);
  VarId z = m.AddVar("z", VarKind::kContinuous, std::nullopt, Rational(5, 2));
  VarId f = m.AddVar("f", VarKind::kContinuous, std::nullopt, std::nullopt);
  VarId w = m.AddVar("w", VarKind::kContinuous, 3, 3);
  m.AddConstraint("le", {{Rational(1), x}, {Rational(1, 4), y}}, Sense::kLe, 4);
  m.AddConstraint("eq", {{Rational(-3), z}, {Rational(1), f}}, Sense::kEq, Rational(-1, 8));
  m.AddConstraint("ge", {{Rational(2), w}, {Rational(1), y}}, Sense::kGe, 0);
  m.AddConstraint("empty", {}, Sense::kLe, 1);
  m.SetObjective({{Rational(7), x}, {Rational(-1), z}});
  return m;
}

void ExpectSameModel(const ModelIR& a, const ModelIR& b) {
  ASSERT_EQ(a.num_vars(), b.num_vars());
  ASSERT_EQ(a.num_constraints(), b.num_constraints());
  for (VarId j = 0; j < a.num_vars(); ++j) {
    EXPECT_EQ(a.var(j).name, b.var(j).name);
    EXPECT_EQ(a.var(j).kind, b.var(j).kind);
    EXPECT_EQ(a.var(j).lower, b.var(j).lower) << a.var(j).name;
    EXPECT_EQ(a.var(j).upper, b.var(j).upper) << a.var(j).name;
  }
  for (int r = 0; r < a.num_constraints(); ++r) {
    EXPECT_EQ(a.constraints()[r].name, b.constraints()[r].name);
    EXPECT_EQ(a.constraints()[r].sense, b.constraints()[r].sense);
    EXPECT_EQ(a.constraints()[r].rhs, b.constraints()[r].rhs);
    EXPECT_EQ(a.constraints()[r].terms, b.constraints()[r].terms);
  }
  EXPECT_EQ(a.objective(), b.objective());
}

}  // namespace

TEST(Mps, RoundTripPreservesModel) {
  ModelIR m = Mixed();
  std::string text = ExportMps(m);
  ModelIR back = ParseMps(text);
  ExpectSameModel(m, back);
  EXPECT_EQ(ExportMps(back), text);
}

TEST(Mps, BinaryAsBvAndIntegersInMarkers) {
  std::string text = ExportMps(Mixed());
  EXPECT_NE(text.find(" BV BND  x"), std::string::npos);
  EXPECT_NE(text.find("'INTORG'"), std::string::npos);
  EXPECT_NE(text.find("'INTEND'"), std::string::npos);
  EXPECT_NE(text.find(" FR BND  f"), std::string::npos);
  EXPECT_NE(text.find(" LO BND  w  3\n UP BND  w  3"), std::string::npos);
  EXPECT_EQ(text.substr(text.size() - 7), "ENDATA\n");
}

TEST(Mps, RealFullModelFixedPoint) {
  BuiltModel built = BuildFull(BuiltinRealInstance());
  std::string once = ExportMps(built.model);
  std::string twice = ExportMps(ParseMps(once));
  EXPECT_EQ(once, twice);
}

TEST(Mps, RandomModelsFixedPoint) {
  std::mt19937_64 rng(5);
  auto pick = [&](int lo, int hi) { return static_cast<int>(lo + rng() % (hi - lo + 1)); };
  for (int rep = 0; rep < 20; ++rep) {
    ModelIR m("rnd" + std::to_string(rep));
    int n = pick(1, 12);
    for (int j = 0; j < n; ++j) {
      int kind = pick(0, 2);
      if (kind == 0) m.AddBinary("b" + std::to_string(j));
      else if (kind == 1) m.AddVar("i" + std::to_string(j), VarKind::kInteger, pick(-3, 0), pick(0, 6));
      else m.AddVar("c" + std::to_string(j), VarKind::kContinuous, Rational(pick(-5, 0), pick(1, 4)), std::nullopt);
    }
    for (int r = 0, rows = pick(0, 10); r < rows; ++r) {
      std::vector<Term> t;
      for (int k = pick(0, 4); k > 0; --k) t.push_back({Rational(pick(-9, 9), pick(1, 8)), pick(0, n - 1)});
      m.AddConstraint("r" + std::to_string(r), t, static_cast<Sense>(pick(0, 2)), Rational(pick(-20, 20), pick(1, 5)));
    }
    std::vector<Term> obj;
    for (int j = 0; j < n; ++j) obj.push_back({Rational(pick(-9, 9)), j});
    m.SetObjective(obj);
    std::string text = ExportMps(m);
    // Non-terminating coefficients come back as 17-digit decimals, so only
    // the text is a fixed point, not the rational values.
    ModelIR back = ParseMps(text);
    ASSERT_EQ(back.num_vars(), m.num_vars());
    for (VarId j = 0; j < m.num_vars(); ++j) EXPECT_EQ(back.var(j).kind, m.var(j).kind);
    EXPECT_EQ(ExportMps(back), text);
  }
}

TEST(Mps, ErrorsCarryLineNumbers) {
  const std::string good = ExportMps(Mixed());
  struct Case {
    std::string text;
    int line;
  };
  std::vector<Case> cases = {
      {"NAME x\nROWS\n N OBJ\n Q bad\nENDATA\n", 4},
      {"NAME x\nROWS\n N OBJ\nCOLUMNS\n x OBJ abc\nENDATA\n", 5},
      {"NAME x\nROWS\n N OBJ\nCOLUMNS\n x NOPE 1\nENDATA\n", 5},
      {"NAME x\nROWS\n N OBJ\n L c\nCOLUMNS\n x c 1\nRANGES\n RNG c 2\nENDATA\n", 7},
      {"NAME x\nROWS\n N OBJ\nCOLUMNS\n x OBJ 1\n", 5},
      {"NAME x\nFOO\nENDATA\n", 2},
      {"NAME x\nROWS\n N OBJ\nCOLUMNS\n x OBJ 1\nBOUNDS\n XX BND x 1\nENDATA\n", 7},
  };
  for (const auto& c : cases) {
    try {
      ParseMps(c.text);
      ADD_FAILURE() << "accepted:\n" << c.text;
    } catch (const MpsError& e) {
      EXPECT_EQ(e.line(), c.line) << e.what();
    }
  }
}

TEST(Mps, AcceptsOtherBoundTypes) {
  std::string text =
      "NAME t\nROWS\n N OBJ\n L c\nCOLUMNS\n a OBJ 1 c 1\n b OBJ 1 c 1\n d c 1\nRHS\n RHS c 4\n"
      "BOUNDS\n MI BND a\n UP BND a 3\n LI BND b 1\n UI BND b 4\n PL BND d\nENDATA\n";
  ModelIR m = ParseMps(text);
  ASSERT_EQ(m.num_vars(), 3);
  EXPECT_FALSE(m.var(0).lower);
  EXPECT_EQ(m.var(0).upper, Rational(3));
  EXPECT_EQ(m.var(1).kind, VarKind::kInteger);
  EXPECT_EQ(m.var(1).lower, Rational(1));
  EXPECT_EQ(m.var(1).upper, Rational(4));
  EXPECT_FALSE(m.var(2).upper);
  EXPECT_EQ(m.constraints()[0].rhs, Rational(4));
}

TEST(Mps, InvalidModelNotExported) {
  ModelIR m;
  EXPECT_THROW(ExportMps(m), ModelError);
}

TEST(Lp, ExportShape) {
  std::string lp = ExportLp(Mixed());
  EXPECT_NE(lp.find("Minimize"), std::string::npos);
  EXPECT_NE(lp.find("Subject To"), std::string::npos);
  EXPECT_NE(lp.find("Bounds"), std::string::npos);
  EXPECT_NE(lp.find("General"), std::string::npos);
  EXPECT_NE(lp.find("Binaries"), std::string::npos);
  EXPECT_NE(lp.find("End"), std::string::npos);
}

TEST(Mps, FormatNumber) {
  EXPECT_EQ(FormatNumber(Rational(5)), "5");
  EXPECT_EQ(FormatNumber(Rational(-1, 8)), "-0.125");
  std::string third = FormatNumber(Rational(1, 3));
  EXPECT_EQ(third.substr(0, 16), "0.33333333333333");
  EXPECT_EQ(FormatNumber(*Rational::Parse(third)), third);
}
