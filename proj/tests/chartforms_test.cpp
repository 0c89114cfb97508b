#include <gtest/gtest.h>

#include "nsx/errors.hpp"
#include "nsx/forms.hpp"
#include "nsx/pointcheck.hpp"
#include "nsx/properties.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace nsx {
namespace {

using test::q;
using test::sym;

const Chart R4("R4", {"x1", "x2", "x3", "x4"});
const Chart H("H", {"r", "x", "y"});

DifferentialForm dx(const Chart& c, const std::string& v) { return DifferentialForm::dx(c, v); }

TEST(Wedge, Basics) {
  const auto w = wedge(dx(R4, "x1"), dx(R4, "x2"));
  EXPECT_EQ(w.degree(), 2);
  ASSERT_EQ(w.terms().size(), 1u);
  EXPECT_TRUE(w.coefficient({0, 1}) == 1);
  EXPECT_TRUE(wedge(dx(R4, "x1"), dx(R4, "x1")).is_zero());
  EXPECT_TRUE(wedge(dx(R4, "x2"), dx(R4, "x1")).coefficient({0, 1}) == -1);
}

TEST(Wedge, HalfTorsionIsExactlyPi) {
  const Expr u = Expr::pi() * sym("r");
  const auto a = sin(u) * dx(H, "x") + cos(u) * dx(H, "y");
  const auto top = wedge(a, exterior_derivative(a));
  ASSERT_EQ(top.degree(), 3);
  EXPECT_EQ(top.top_coefficient().str(), "pi");
}

TEST(Wedge, Errors) {
  EXPECT_THROW(wedge(dx(R4, "x1"), dx(H, "r")), ChartMismatch);
  EXPECT_THROW(wedge(DifferentialForm::volume(R4), dx(R4, "x1")), DegreeOverflow);
  EXPECT_THROW(wedge_power(DifferentialForm::volume(H), 2), DegreeOverflow);
}

TEST(WedgePower, StandardSquare) {
  const auto w = DifferentialForm::basis(R4, {0, 1}) + DifferentialForm::basis(R4, {2, 3});
  const auto w2 = wedge_power(w, 2);
  EXPECT_TRUE(w2 == Expr(2) * DifferentialForm::volume(R4));
}

TEST(WedgePower, Example2) {
  auto env = test::load(test::kExample2);
  const auto& w = env.form("w");
  const Chart& C = w.chart();
  const auto w2 = wedge_power(w, 2);
  const Point origin = C.point({0, 3, -2, 0, 0, 0});
  for (const auto& [m, c] : w2.terms()) EXPECT_EQ(evaluate(c, origin).sign(), 0) << c.str();
  const Point off = C.point({0, 0, 0, 1, 0, 0});
  const Number top = evaluate(wedge_power(w, 3).top_coefficient(), off);
  ASSERT_TRUE(top.is_exact());
  EXPECT_GT(top.sign(), 0);
}

TEST(ExteriorDerivative, Examples) {
  EXPECT_TRUE(exterior_derivative(sym("x1") * dx(R4, "x2")) == DifferentialForm::basis(R4, {0, 1}));

  auto env = test::load(test::kExample2);
  EXPECT_TRUE(exterior_derivative(env.form("w")).is_zero());

  const Chart T("T", {"t", "x1", "x2", "x3"});
  const Expr chi = Expr::opaque("chi", "t"), chi1 = Expr::opaque("chi", "t", 1);
  const Expr a = sym("x1"), b = sym("x2"), c = sym("x3");
  const auto tau = chi * a * (b * dx(T, "x3") - c * dx(T, "x2"));
  const auto expect = chi1 * a * b * DifferentialForm::basis(T, {0, 3}) -
                      chi1 * a * c * DifferentialForm::basis(T, {0, 2}) +
                      chi * b * DifferentialForm::basis(T, {1, 3}) - chi * c * DifferentialForm::basis(T, {1, 2}) +
                      Expr(2) * chi * a * DifferentialForm::basis(T, {2, 3});
  EXPECT_TRUE(exterior_derivative(tau) == expect) << exterior_derivative(tau).str();
  EXPECT_THROW(exterior_derivative(DifferentialForm::volume(T)), DegreeOverflow);
}

TEST(InteriorProduct, Examples) {
  const auto X = VectorField::coordinate(R4, "x1");
  EXPECT_TRUE(interior_product(X, DifferentialForm::basis(R4, {0, 1})) == dx(R4, "x2"));

  const Chart S("S", {"x1", "x2", "x3"});
  const VectorField rot(S, {0, -sym("x3"), sym("x2")});
  const auto r = interior_product(rot, DifferentialForm::basis(S, {1, 2}));
  EXPECT_TRUE(r == -sym("x3") * dx(S, "x3") - sym("x2") * dx(S, "x2")) << r.str();
  EXPECT_THROW(interior_product(rot, dx(R4, "x1")), ChartMismatch);
}

TEST(Pullback, Examples) {
  const Chart X("X", {"x"}), Y("Y", {"y"});
  const SmoothMap F(X, Y, {pow(sym("x"), 2)});
  EXPECT_TRUE(pullback(F, dx(Y, "y")) == 2 * sym("x") * dx(X, "x"));

  const Chart D("D", {"z1", "z2", "z3", "r", "th"}), G("G", {"z1", "z2", "z3", "s", "th"});
  const SmoothMap psi(D, G, {sym("z1"), sym("z2"), sym("z3"), pow(sym("r"), 2), sym("th")});
  const auto aG = dx(G, "z3") + sym("z1") * dx(G, "z2") + sym("s") * dx(G, "th");
  const auto expect = dx(D, "z3") + sym("z1") * dx(D, "z2") + pow(sym("r"), 2) * dx(D, "th");
  EXPECT_TRUE(pullback(psi, aG) == expect);
  EXPECT_THROW(pullback(psi, dx(D, "r")), ChartMismatch);
}

TEST(Pullback, FoldOfSymplectization) {
  // f*(d(e^t aZ)) vanishes on x = 0 and is closed.
  auto env = test::load(
      "chart E (z1, z2, z3, x1, x2, x3)\n"
      "chart B (z1, z2, z3, t)\n"
      "map f : E -> B = (z1, z2, z3, -x1^2 + 1/2*(x2^2 + x3^2))\n"
      "form wB on B = d(exp(t)*(d(z3) + z1*d(z2)))\n"
      "form fw on E = pullback(f, wB)\n");
  const auto& fw = env.form("fw");
  EXPECT_TRUE(exterior_derivative(fw).is_zero());
  const Point p = fw.chart().point({q(1, 3), -2, 5, 0, 0, 0});
  EXPECT_EQ(rank_at(fw, p).rank, 2);
}

TEST(HodgeStar, Examples) {
  const Chart R3("R3", {"x1", "x2", "x3"});
  const auto g3 = Metric::euclidean(R3);
  EXPECT_TRUE(hodge_star(g3, dx(R3, "x1")) == DifferentialForm::basis(R3, {1, 2}));

  const auto g4 = Metric::euclidean(R4);
  for (unsigned m = 0; m < 16; ++m) {
    std::vector<int> idx;
    for (int i = 0; i < 4; ++i)
      if (m & (1u << i)) idx.push_back(i);
    const auto a = DifferentialForm::basis(R4, idx);
    const int k = static_cast<int>(idx.size());
    const Expr sign = (k * (4 - k)) % 2 ? Expr(-1) : Expr(1);
    EXPECT_TRUE(hodge_star(g4, hodge_star(g4, a)) == sign * a) << a.str();
  }

  const Chart T("T", {"t", "x1", "x2", "x3"});
  const auto gt = Metric::euclidean(T);
  EXPECT_TRUE(hodge_star(gt, wedge(dx(T, "t"), dx(T, "x1"))) == DifferentialForm::basis(T, {2, 3}));
}

TEST(HodgeStar, ScaledMetricAndErrors) {
  const Chart R2("R2", {"x", "y"});
  const Metric g(R2, {{4, 0}, {0, 1}});
  // vol = 2 dx^dy; *dx = g^{xx} sqrt(det g) dy = (1/4)(2) dy.
  EXPECT_TRUE(hodge_star(g, dx(R2, "x")) == Expr(q(1, 2)) * dx(R2, "y"));
  EXPECT_THROW(Metric(R2, {{1, 2}, {0, 1}}), DomainError);
  const Metric indefinite(R2, {{1, 0}, {0, -1}});
  EXPECT_THROW(hodge_star(indefinite, dx(R2, "x")), DomainError);
  const Metric conformal(R2, {{1 + pow(sym("x"), 2), 0}, {0, 1 + pow(sym("x"), 2)}});
  EXPECT_THROW(hodge_star(conformal, dx(R2, "x")), Unsupported);
  const auto at = hodge_star_at(conformal, dx(R2, "x"), R2.point({1, 0}));
  ASSERT_EQ(at.size(), 1u);
  EXPECT_NEAR(at.begin()->second, 1.0, 1e-12);
}

TEST(Restrict, SphereChart) {
  const Chart S3("S3", {"x1", "x2", "x3"}), P("P", {"th", "ph"});
  const Expr th = sym("th"), ph = sym("ph");
  const SmoothMap sph(P, S3, {cos(th), sin(th) * cos(ph), sin(th) * sin(ph)});
  const auto area = restrict_to_parametrized(
      sph, sym("x1") * DifferentialForm::basis(S3, {1, 2}) - sym("x2") * DifferentialForm::basis(S3, {0, 2}) +
               sym("x3") * DifferentialForm::basis(S3, {0, 1}));
  EXPECT_TRUE(area.top_coefficient() == sin(th)) << area.str();
  EXPECT_TRUE(restrict_to_parametrized(sph, dx(S3, "x1")) == -sin(th) * dx(P, "th"));

  const Chart E("E", {"z1", "z2", "z3", "x1", "x2", "x3"}), ZS("ZS", {"z1", "z2", "z3", "th", "ph"});
  const SmoothMap PA(ZS, E, {sym("z1"), sym("z2"), sym("z3"), cos(th), sin(th) * cos(ph), sin(th) * sin(ph)});
  EXPECT_TRUE(restrict_to_parametrized(PA, dx(E, "z3")) == dx(ZS, "z3"));
}

TEST(Restrict, FibreOfContactForm) {
  // Fibre restriction at a fixed sphere point p0 = (x1, x2, x3).
  const Chart F("F", {"z1", "z2", "z3", "x1", "x2", "x3", "K"});
  const Expr K = sym("K"), a = sym("x1"), b = sym("x2"), c = sym("x3");
  const Expr B = -pow(a, 2) + pow(b, 2) + pow(c, 2);
  const auto alpha = (K * B - 1) * (sym("z1") * dx(F, "z2") + dx(F, "z3")) +
                     Expr(q(5, 2)) * K * a * (b * dx(F, "x3") - c * dx(F, "x2"));
  const Rational p0[3] = {q(1, 3), q(2, 3), q(2, 3)};
  const Chart ZK("ZK", {"z1", "z2", "z3", "K"});
  const SmoothMap iotaK(ZK, F, {sym("z1"), sym("z2"), sym("z3"), p0[0], p0[1], p0[2], sym("K")});
  const Rational Bp0 = -p0[0] * p0[0] + p0[1] * p0[1] + p0[2] * p0[2];
  const auto expect = (K * Expr(Bp0) - 1) * sym("z1") * dx(ZK, "z2") + (K * Expr(Bp0) - 1) * dx(ZK, "z3");
  EXPECT_TRUE(restrict_to_parametrized(iotaK, alpha) == expect) << restrict_to_parametrized(iotaK, alpha).str();
}

TEST(Chart, Errors) {
  EXPECT_THROW(Chart("C", {}), DomainError);
  EXPECT_THROW(Chart("C", {"x", "x"}), DomainError);
  EXPECT_THROW(Chart("C", {"a", "b", "c", "d", "e", "f", "g", "h", "i"}), DomainError);
  EXPECT_THROW(R4.index_of("y"), DomainError);
  EXPECT_THROW(Point("C", {"x"}, {Number(1), Number(2)}), DomainError);
}

TEST(Invariants, Battery) {
  for (const std::string name : {"d_squared", "graded_commutativity", "functoriality", "antiderivation",
                                 "interior_twice", "double_star"}) {
    const auto r = run_property(name, default_property_count(name), Rng::kDefaultSeed);
    EXPECT_TRUE(r.pass) << r.summary();
    EXPECT_EQ(r.failures, 0) << r.counterexample;
  }
  EXPECT_EQ(default_property_count("d_squared"), 1000);
  EXPECT_EQ(default_property_count("graded_commutativity"), 500);
  EXPECT_EQ(default_property_count("functoriality"), 100);
  EXPECT_EQ(default_property_count("antiderivation"), 200);
  EXPECT_EQ(run_property("double_star", 0, 1).trials, 252);
  EXPECT_THROW(run_property("nope", 1, 1), DomainError);
}

TEST(DerivativeOracle, FiniteDifferences) {
  const auto r = oracle::derivative_oracle(Rng::kDefaultSeed, 200, 20);
  EXPECT_EQ(r.comparisons, 4000);
  EXPECT_EQ(r.failures, 0) << r.first_failure << " (worst " << r.worst << ")";
}

}  // namespace
}  // namespace nsx
