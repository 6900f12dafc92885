#include <gtest/gtest.h>

#include <random>

#include "oracles.h"
#include "wcetw/error.h"
#include "wcetw/linear.h"

namespace wcetw::linear {
namespace {

LinearSystem sys(std::initializer_list<const char*> lines) {
  std::vector<std::string> v(lines.begin(), lines.end());
  return parse_system(v);
}

TEST(Satisfies, SingleSolutionScope) {
  EXPECT_TRUE(satisfies({{"x1", 2}, {"x2", 0}}, sys({"x1 <= 3", "x2 = 0"})));
  EXPECT_FALSE(satisfies({{"x1", 4}}, sys({"x1 <= 3"})));
  EXPECT_TRUE(satisfies({{"q", 9}}, LinearSystem{}));
}

TEST(Satisfies, MissingVariable) {
  try {
    satisfies({{"x1", 1}}, sys({"x1 + x2 <= 3"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMissingVariable);
  }
}

TEST(Parse, TermsOnBothSides) {
  LinearSystem s = parse_constraint("2*x - y + 3 <= 4*z + 1");
  ASSERT_EQ(s.constraints().size(), 1u);
  EXPECT_EQ(s.constraints()[0].lhs.coeff("x"), 2);
  EXPECT_EQ(s.constraints()[0].lhs.coeff("y"), -1);
  EXPECT_EQ(s.constraints()[0].lhs.coeff("z"), -4);
  EXPECT_EQ(s.constraints()[0].rhs, -2);
  EXPECT_EQ(parse_constraint("x = 2").constraints().size(), 2u);
  EXPECT_EQ(parse_constraint("0 <= 1").constraints().size(), 1u);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_constraint("x <"), Error);
  EXPECT_THROW(parse_constraint("2*3x <= 1"), Error);
  EXPECT_THROW(parse_constraint("x <= 1 y"), Error);
}

TEST(Parse, RoundTripLines) {
  LinearSystem s = sys({"x1 <= 3", "x2 = 0", "2*a - b >= -4"});
  LinearSystem again = parse_system(s.to_lines());
  EXPECT_EQ(s, again);
  EXPECT_EQ(s.to_lines()[1], "x2 = 0");
}

TEST(Entails, Basics) {
  EXPECT_TRUE(entails(sys({"x = 2"}), sys({"x <= 3"})));
  EXPECT_FALSE(entails(sys({"x <= 3"}), sys({"x = 2"})));
  EXPECT_TRUE(entails(sys({"x <= 0", "x >= 1"}), sys({"y <= -100"})));
  EXPECT_FALSE(entails(LinearSystem{}, sys({"y <= 5"})));
  EXPECT_TRUE(entails(LinearSystem{}, sys({"0 <= 1"})));
}

TEST(Entails, SoundAgainstIntegerEnumeration) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> vars = {"a", "b", "c"};
  int checked = 0;
  for (int round = 0; round < 300; ++round) {
    LinearSystem s1 = oracle::random_system(rng, vars, 2, 3, 6);
    for (const auto& v : vars) {
      s1.add_le(LinExpr::var(v), 5);
      s1.add_ge(LinExpr::var(v), -5);
    }
    LinearSystem s2 = oracle::random_system(rng, vars, 1, 2, 8);
    if (!entails(s1, s2)) continue;
    ++checked;
    for (const auto& k : oracle::box_points(vars, -5, 5)) {
      if (satisfies(k, s1)) ASSERT_TRUE(satisfies(k, s2)) << "round " << round;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(Entails, ReflexiveAndTransitive) {
  std::mt19937_64 rng(11);
  const std::vector<std::string> vars = {"a", "b"};
  for (int round = 0; round < 100; ++round) {
    LinearSystem s1 = oracle::random_system(rng, vars, 3, 3, 6);
    EXPECT_TRUE(entails(s1, s1));
    LinearSystem s2 = oracle::random_system(rng, vars, 2, 3, 6);
    LinearSystem s3 = oracle::random_system(rng, vars, 1, 3, 6);
    if (entails(s1, s2) && entails(s2, s3)) EXPECT_TRUE(entails(s1, s3));
  }
}

TEST(SolveIlp, TrainPlacementObjective) {
  Ilp p{LinExpr::var("x2", 250), sys({"0 <= x2", "x2 <= 1"})};
  IlpResult r = solve_ilp(p);
  ASSERT_EQ(r.status, IlpResult::Status::kOptimal);
  EXPECT_EQ(r.value, 250);
  EXPECT_EQ(r.valuation.at("x2"), 1);
}

TEST(SolveIlp, InfeasibleAndUnbounded) {
  EXPECT_EQ(solve_ilp({LinExpr::var("x"), sys({"x <= 0", "x >= 1"})}).status, IlpResult::Status::kInfeasible);
  EXPECT_EQ(solve_ilp({LinExpr::var("x"), sys({"x >= 1"})}).status, IlpResult::Status::kUnbounded);
  // Unbounded relaxation without integer points: 2x = 2y + 1.
  EXPECT_EQ(solve_ilp({LinExpr::var("x"), sys({"2*x - 2*y = 1"})}).status, IlpResult::Status::kInfeasible);
}

TEST(SolveIlp, FractionalRelaxation) {
  // max x + y s.t. 2x + 2y <= 5 -> relaxation 2.5, integer 2.
  Ilp p{LinExpr::var("x") + LinExpr::var("y"), sys({"2*x + 2*y <= 5", "x >= 0", "y >= 0"})};
  IlpResult r = solve_ilp(p);
  ASSERT_EQ(r.status, IlpResult::Status::kOptimal);
  EXPECT_EQ(r.value, 2);
}

TEST(SolveIlp, NodeLimit) {
  Ilp p{LinExpr::var("x") + LinExpr::var("y"), sys({"2*x + 2*y <= 5", "x >= 0", "y >= 0"})};
  IlpOptions opt;
  opt.node_limit = 1;
  try {
    solve_ilp(p, opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kResourceExceeded);
  }
}

TEST(SolveIlp, RandomBoxAgainstEnumeration) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> nvars(1, 4);
  std::uniform_int_distribution<int> obj(-5, 5);
  int feasible = 0;
  for (int round = 0; round < 50; ++round) {
    std::vector<std::string> vars;
    for (int i = 0, n = nvars(rng); i < n; ++i) vars.push_back("v" + std::to_string(i));
    Ilp p;
    p.system = oracle::random_system(rng, vars, 3, 4, 12);
    for (const auto& v : vars) {
      p.system.add_ge(LinExpr::var(v), 0);
      p.system.add_le(LinExpr::var(v), 6);
      p.objective.add(v, obj(rng));
    }
    auto expected = oracle::enumerate_ilp(p, vars, 0, 6);
    IlpResult got = solve_ilp(p);
    if (!expected.feasible) {
      EXPECT_EQ(got.status, IlpResult::Status::kInfeasible) << "round " << round;
      continue;
    }
    ++feasible;
    ASSERT_EQ(got.status, IlpResult::Status::kOptimal) << "round " << round;
    EXPECT_EQ(got.value, expected.value) << "round " << round;
    EXPECT_TRUE(satisfies(got.valuation, p.system));
  }
  EXPECT_GT(feasible, 10);
}

TEST(Bounds, Examples) {
  Bounds b = bounds(sys({"1 <= x1", "x1 <= 2"}), "x1");
  EXPECT_EQ(b.lower, 1);
  EXPECT_EQ(b.upper, 2);
  Bounds none = bounds(LinearSystem{}, "x");
  EXPECT_FALSE(none.lower.has_value());
  EXPECT_FALSE(none.upper.has_value());
  EXPECT_FALSE(none.infeasible);
  EXPECT_TRUE(bounds(sys({"x <= 0", "x >= 1"}), "x").infeasible);
  Bounds half = bounds(sys({"2*x <= 5", "2*x >= 1"}), "x");
  EXPECT_EQ(half.lower, 1);
  EXPECT_EQ(half.upper, 2);
}

TEST(Bounds, ContainEveryIntegerSolution) {
  std::mt19937_64 rng(5);
  const std::vector<std::string> vars = {"a", "b", "c"};
  for (int round = 0; round < 100; ++round) {
    LinearSystem s = oracle::random_system(rng, vars, 2, 3, 6);
    for (const auto& v : vars) {
      s.add_le(LinExpr::var(v), 4);
      s.add_ge(LinExpr::var(v), -4);
    }
    Bounds b = bounds(s, "a");
    for (const auto& k : oracle::box_points(vars, -4, 4)) {
      if (!satisfies(k, s)) continue;
      ASSERT_FALSE(b.infeasible);
      EXPECT_LE(*b.lower, k.at("a"));
      EXPECT_GE(*b.upper, k.at("a"));
    }
  }
}

}  // namespace
}  // namespace wcetw::linear
