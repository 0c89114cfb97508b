#include <cmath>

#include <gtest/gtest.h>

#include "nsx/errors.hpp"
#include "nsx/locus.hpp"
#include "test_util.hpp"

namespace nsx {
namespace {

using test::q;
using test::sym;

const Chart R3("R3", {"x1", "x2", "x3"});

Region cube(const Chart& c, int res, int random = 0) {
  std::vector<Axis> axes;
  for (int i = 0; i < c.dim(); ++i) axes.push_back({Expr(-1), Expr(1), res});
  return Region(c, axes, random);
}

LocusSpec axis_line(const Chart& c) {
  LocusSpec L(c);
  L.add_equations({{"x2", Expr(0)}, {"x3", Expr(0)}});
  return L;
}

TEST(Sample, UnitCubeCorners) {
  std::vector<Axis> axes(3, Axis{Expr(0), Expr(1), 2});
  const auto pts = sample(Region(R3, axes));
  ASSERT_EQ(pts.size(), 8u);
  for (const auto& p : pts) {
    ASSERT_TRUE(p.is_exact());
    for (const auto& v : p.values) EXPECT_TRUE(v.exact() == 0 || v.exact() == 1);
  }
}

TEST(Sample, Deterministic) {
  const Region r = cube(R3, 3, 5);
  const auto a = sample(r, 42), b = sample(r, 42), c = sample(r, 43);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].str(), b[i].str());
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs |= a[i].str() != c[i].str();
  EXPECT_TRUE(differs);
}

TEST(Sample, RationalMidpoint) {
  const Chart L("L", {"s"});
  const auto pts = sample(Region(L, {{Expr(-1), Expr(1), 3}}));
  ASSERT_EQ(pts.size(), 3u);
  ASSERT_TRUE(pts[1].values[0].is_exact());
  EXPECT_EQ(pts[1].values[0].exact(), 0);
}

TEST(Sample, CenteredAndRandomAxes) {
  const Chart L("L", {"s", "t"});
  const Region centered(L, {{Expr(0), Expr(1), 2}, {Expr(0), Expr(1), 1}}, 0, true);
  const auto pts = sample(centered);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].values[0].exact(), q(1, 4));
  EXPECT_EQ(pts[0].values[1].exact(), q(1, 2));
  const Region mixed(L, {{Expr(0), Expr(1), 3}, {Expr(-1), Expr(1), 0}}, 4);
  EXPECT_EQ(sample(mixed).size(), 12u);
  EXPECT_THROW(Region(L, {{Expr(1), Expr(0), 2}, {Expr(0), Expr(1), 2}}), DomainError);
  EXPECT_THROW(Region(L, {{sym("s"), Expr(1), 2}, {Expr(0), Expr(1), 2}}), DomainError);
}

TEST(VanishingLocus, Example2) {
  auto env = test::load(std::string(test::kExample2) +
                        "region box on R6 = [-1, 1]:4 x [-1, 1]:4 x [-1, 1]:4 x [-1, 1]:4 x [-1, 1]:4 x [-1, 1]:4\n"
                        "locus Z on R6 = {x1 = 0, x2 = 0, x3 = 0}\n");
  const auto& w = env.form("w");
  LocusOptions onl;
  onl.off_side = false;
  onl.margin = 0.125;
  const auto r2 = verify_vanishing_locus(wedge_power(w, 2), env.locus("Z"), env.region("box"), SignRequirement::None, onl);
  EXPECT_TRUE(r2.pass) << r2.summary();
  EXPECT_GT(r2.on_total, 0);
  EXPECT_EQ(r2.on_ok, r2.on_total);

  LocusOptions offl;
  offl.on_side = false;
  offl.margin = 0.125;
  const auto r3 =
      verify_vanishing_locus(wedge_power(w, 3), env.locus("Z"), env.region("box"), SignRequirement::Positive, offl);
  EXPECT_TRUE(r3.pass) << r3.summary();
  EXPECT_GT(r3.off_total, 0);
  EXPECT_EQ(r3.off_ok, r3.off_total);
}

TEST(VanishingLocus, CounterexampleListed) {
  // x1 dx2 vanishes on {x1 = 0}, not on the x1-axis.
  const auto w = sym("x1") * DifferentialForm::dx(R3, "x2");
  const auto r = verify_vanishing_locus(w, axis_line(R3), cube(R3, 5), SignRequirement::Nonzero);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.counterexample_count, 0);
  ASSERT_FALSE(r.counterexamples.empty());
  EXPECT_NE(r.counterexamples.front().find("x1"), std::string::npos);
}

TEST(VanishingLocus, FibreCircleOfContactForm) {
  // (K B - 1) on the sphere in stereographic coordinates, K = 25/7: zero
  // exactly on the circles u^2 + v^2 = 4 and 1/4.
  const auto env = test::load(
      "chart S (u, v)\n"
      "chart Q (s)\n"
      "expr Bs on S = 1 - 2*((u^2 + v^2 - 1)/(1 + u^2 + v^2))^2\n"
      "form f on S = 25/7*Bs - 1\n"
      "map c1 : Q -> S = (2*cos(s), 2*sin(s))\n"
      "map c2 : Q -> S = (1/2*cos(s), 1/2*sin(s))\n"
      "region line on Q = [0, 2*pi]:65\n"
      "locus C on S = param c1 over line | param c2 over line\n"
      "region disk on S = [-3, 3]:25 x [-3, 3]:25\n");
  const auto r = verify_vanishing_locus(env.form("f"), env.locus("C"), env.region("disk"), SignRequirement::Nonzero);
  EXPECT_TRUE(r.pass) << r.summary();
  EXPECT_EQ(r.on_ok, r.on_total);
  EXPECT_GE(r.on_total, 2 * 65);
}

TEST(RankDrop, FoldModels) {
  const Chart R6("R6", {"t1", "t2", "t3", "x1", "x2", "x3"}), R4("R4", {"y1", "y2", "y3", "y4"});
  const Expr x1 = sym("x1"), x2 = sym("x2"), x3 = sym("x3");
  const SmoothMap fold(R6, R4, {sym("t1"), sym("t2"), sym("t3"), -pow(x1, 2) + pow(x2, 2) + pow(x3, 2)});
  LocusSpec Sigma(R6);
  Sigma.add_equations({{"x1", Expr(0)}, {"x2", Expr(0)}, {"x3", Expr(0)}});
  const auto r = verify_rank_drop_locus(fold, Sigma, cube(R6, 3), 4, 3);
  EXPECT_TRUE(r.pass) << r.summary();
  EXPECT_FALSE(verify_rank_drop_locus(fold, Sigma, cube(R6, 3), 4, 2).pass);

  const Chart X4("X4", {"t", "x1", "x2", "x3"}), B2("B2", {"u1", "u2"});
  const SmoothMap blf(X4, B2, {sym("t"), pow(x1, 2) + pow(x2, 2) - pow(x3, 2)});
  LocusSpec Gamma(X4);
  Gamma.add_equations({{"x1", Expr(0)}, {"x2", Expr(0)}, {"x3", Expr(0)}});
  EXPECT_TRUE(verify_rank_drop_locus(blf, Gamma, cube(X4, 4), 2, 1).pass);
}

TEST(RankDrop, RealifiedLefschetz) {
  const Chart C3("C3", {"a1", "b1", "a2", "b2", "a3", "b3"}), C2("C2", {"u1", "v1", "u2", "v2"});
  const Expr a2 = sym("a2"), b2 = sym("b2"), a3 = sym("a3"), b3 = sym("b3");
  const SmoothMap lef(C3, C2,
                      {sym("a1"), sym("b1"), pow(a2, 2) - pow(b2, 2) + pow(a3, 2) - pow(b3, 2), 2 * a2 * b2 + 2 * a3 * b3});
  LocusSpec Crit(C3);
  Crit.add_equations({{"a2", Expr(0)}, {"b2", Expr(0)}, {"a3", Expr(0)}, {"b3", Expr(0)}});
  const auto r = verify_rank_drop_locus(lef, Crit, cube(C3, 3), 4, 2);
  EXPECT_TRUE(r.pass) << r.summary();
}

TEST(FixedPoints, CircleAction) {
  const VectorField X(R3, {0, -sym("x3"), sym("x2")});
  const auto r = verify_fixed_point_set(X, axis_line(R3), cube(R3, 5));
  EXPECT_TRUE(r.pass) << r.summary();
  EXPECT_EQ(r.counterexample_count, 0);

  const VectorField zero(R3, {0, 0, 0});
  EXPECT_FALSE(verify_fixed_point_set(zero, axis_line(R3), cube(R3, 5)).pass);

  const VectorField other(R3, {-sym("x2"), sym("x1"), 0});
  const auto bad = verify_fixed_point_set(other, axis_line(R3), cube(R3, 5));
  EXPECT_FALSE(bad.pass);
  EXPECT_FALSE(bad.counterexamples.empty());
}

TEST(DividingSet, Examples) {
  const Chart ZS("ZS", {"z3", "x1", "x2", "x3"});
  const VectorField X(ZS, {0, 0, -sym("x3"), sym("x2")});
  const Region box = cube(ZS, 5);

  const auto zero = verify_dividing_set(DifferentialForm::dx(ZS, "z3"), X, LocusSpec(ZS), box, std::nullopt);
  EXPECT_TRUE(zero.value.is_zero());
  EXPECT_NE(zero.locus.note.find("vanishes identically"), std::string::npos);
  EXPECT_FALSE(zero.pass);

  const VectorField d2(ZS, {0, 0, 1, 0});
  const auto one = verify_dividing_set(DifferentialForm::dx(ZS, "x2"), d2, LocusSpec(ZS), box, Expr(1));
  EXPECT_TRUE(one.value == 1);
  EXPECT_TRUE(one.pass) << one.summary();

  // alpha(X) = 5/2 x1 (x2^2 + x3^2) vanishes on {x1 = 0} and on the x1-axis.
  const Expr a = sym("x1"), b = sym("x2"), c = sym("x3");
  const auto alpha = Expr(q(5, 2)) * a * (b * DifferentialForm::dx(ZS, "x3") - c * DifferentialForm::dx(ZS, "x2"));
  LocusSpec Gamma(ZS);
  Gamma.add_equations({{"x1", Expr(0)}});
  Gamma.add_equations({{"x2", Expr(0)}, {"x3", Expr(0)}});
  const auto r = verify_dividing_set(alpha, X, Gamma, box, Expr(q(5, 2)) * a * (pow(b, 2) + pow(c, 2)));
  EXPECT_TRUE(r.pass) << r.summary();
  const auto scaled = verify_dividing_set(alpha, X, Gamma, box, a * (pow(b, 2) + pow(c, 2)));
  EXPECT_FALSE(scaled.pass);
  ASSERT_TRUE(scaled.ratio);
  EXPECT_EQ(*scaled.ratio, q(5, 2));
}

TEST(LocusSpec, DistanceAndErrors) {
  const LocusSpec L = axis_line(R3);
  EXPECT_NEAR(L.distance({5, 3, 4}), 5.0, 1e-12);
  EXPECT_TRUE(std::isinf(LocusSpec(R3).distance({0, 0, 0})));
  LocusSpec bad(R3);
  EXPECT_THROW(bad.add_equations({{"x1", sym("x2")}}), DomainError);
  const Chart other("O", {"a", "b"});
  EXPECT_THROW(verify_vanishing_locus(DifferentialForm::dx(R3, "x1"), L, cube(other, 2), SignRequirement::None),
               ChartMismatch);
}

}  // namespace
}  // namespace nsx
