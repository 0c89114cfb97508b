#include <gtest/gtest.h>

#include "nsx/linalg.hpp"
#include "nsx/locus.hpp"
#include "nsx/pointcheck.hpp"
#include "nsx/properties.hpp"
#include "test_util.hpp"

namespace nsx {
namespace {

using test::q;
using test::sym;

const char* kOmegaNs =
    "chart E (z1, z2, z3, x1, x2, x3)\n"
    "expr c on E = -x1^2 + 1/2*(x2^2 + x3^2)\n"
    "form wns on E = exp(c)*(d(z1) /\\ d(z2) + 2*x1*(d(z3) /\\ d(x1) + d(x2) /\\ d(x3))"
    " - x2*(d(z3) /\\ d(x2) - d(x1) /\\ d(x3)) - x3*(d(z3) /\\ d(x3) + d(x1) /\\ d(x2))"
    " + z1*(2*x1*d(z2) /\\ d(x1) - x2*d(z2) /\\ d(x2) - x3*d(z2) /\\ d(x3)))\n"
    "form aZ on E = d(z3) + z1*d(z2)\n"
    "form wsym on E = d(exp(z1)*aZ)\n";

TEST(FormMatrix, StandardBlock) {
  const Chart R4("R4", {"x1", "x2", "x3", "x4"});
  const auto w = DifferentialForm::basis(R4, {0, 1}) + DifferentialForm::basis(R4, {2, 3});
  const auto m = form_matrix_at(w, R4.point({5, 1, q(1, 2), -3}));
  ASSERT_TRUE(m.matrix.exact);
  EXPECT_EQ(m.matrix.exact_entries[0][1], 1);
  EXPECT_EQ(m.matrix.exact_entries[1][0], -1);
  EXPECT_EQ(m.matrix.exact_entries[2][3], 1);
  EXPECT_EQ(m.matrix.exact_entries[0][2], 0);
  EXPECT_EQ(rank_at(w, m.point).rank, 4);
}

TEST(FormMatrix, Example2RankDrop) {
  auto env = test::load(test::kExample2);
  const auto& w = env.form("w");
  const auto on = w.chart().point({1, 2, 3, 0, 0, 0});
  const auto m = form_matrix_at(w, on);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (!((i == 0 && j == 1) || (i == 1 && j == 0))) EXPECT_EQ(m.matrix.exact_entries[i][j], 0);
  EXPECT_EQ(rank_at(w, on).rank, 2);
  EXPECT_EQ(rank_at(w, w.chart().point({0, 0, 0, 1, 0, 0})).rank, 6);
}

TEST(Rank, ZeroForm) {
  const Chart R4("R4", {"x1", "x2", "x3", "x4"});
  const DifferentialForm zero(R4, 2);
  const auto p = R4.point({0, 0, 0, 0});
  EXPECT_EQ(rank_at(zero, p).rank, 0);
  EXPECT_EQ(kernel_at(zero, p).size(), 4u);
}

TEST(Rank, OmegaNsKernelOnLocus) {
  auto env = test::load(kOmegaNs);
  const auto& w = env.form("wns");
  const auto p = w.chart().point({q(1, 2), -1, 3, 0, 0, 0});
  const auto r = rank_at(w, p);
  EXPECT_EQ(r.rank, 2);
  const auto K = kernel_at(w, p);
  ASSERT_EQ(K.size(), 4u);
  // Kernel vectors have no d/dz1, d/dz2 components.
  for (const auto& v : K) {
    EXPECT_EQ(v[0].sign(), 0);
    EXPECT_EQ(v[1].sign(), 0);
  }
  std::vector<std::vector<Rational>> basis;
  for (const auto& v : K) {
    std::vector<Rational> row;
    for (const auto& x : v) row.push_back(x.exact());
    basis.push_back(row);
  }
  EXPECT_EQ(rank(basis), 4);
}

TEST(Rank, SymplectizationFullRank) {
  const auto env = test::load(
      "chart B (z1, z2, z3, t)\n"
      "form w on B = d(exp(t)*(d(z3) + z1*d(z2)))\n"
      "region box on B = [-1, 1]:3 x [-1, 1]:3 x [-1, 1]:3 x [-1, 1]:3\n");
  for (const auto& p : sample(env.region("box"))) EXPECT_EQ(rank_at(env.form("w"), p).rank, 4) << p.str();
}

TEST(Rank, EvenAndKernelExact) {
  Rng rng(17);
  for (int n = 2; n <= 6; ++n) {
    const Chart C = random::chart(n);
    for (int i = 0; i < 40; ++i) {
      const auto w = random::form(rng, C, 2, random::Flavor::Polynomial);
      std::vector<Number> v;
      for (int k = 0; k < n; ++k) v.emplace_back(Rational(rng.range(-2, 2), rng.range(1, 2)));
      const Point p("R", C.coords(), v);
      const auto r = rank_at(w, p);
      EXPECT_EQ(r.rank % 2, 0);
      const auto m = form_matrix_at(w, p);
      for (const auto& k : kernel_at(w, p)) {
        for (int a = 0; a < n; ++a) {
          Rational acc = 0;
          for (int b = 0; b < n; ++b) acc += m.matrix.exact_entries[a][b] * k[b].exact();
          EXPECT_EQ(acc, 0);
        }
      }
    }
  }
}

TEST(Rank, NumericKernelResidual) {
  auto env = test::load(kOmegaNs);
  const auto& w = env.form("wns");
  const Point p("E", w.chart().coords(), {Number(0.3), Number(-0.7), Number(0.1), Number(0.2), Number(0.4), Number(-0.5)});
  const auto m = form_matrix_at(w, p);
  EXPECT_FALSE(m.matrix.exact);
  for (const auto& k : kernel_at(w, p)) {
    for (int a = 0; a < 6; ++a) {
      double acc = 0;
      for (int b = 0; b < 6; ++b) acc += m.matrix.at(a, b) * k[b].to_double();
      EXPECT_LT(std::abs(acc), 1e-9);
    }
  }
}

TEST(IntrinsicGradient, Prototype) {
  const auto env = test::load(
      "chart R4 (t, x1, x2, x3)\n"
      "metric g on R4 = euclidean\n"
      "form b on R4 = d(-x1^2 + x2^2 + x3^2)\n"
      "form w on R4 = d(t) /\\ b + star(g, d(t) /\\ b)\n");
  const auto g = intrinsic_gradient_at(env.form("w"), env.chart("R4").point({q(1, 3), 0, 0, 0}));
  EXPECT_EQ(g.nabla.rank.rank, 3);
}

TEST(IntrinsicGradient, ConstantFormHasZeroGradient) {
  const Chart R4("R4", {"x1", "x2", "x3", "x4"});
  const auto w = DifferentialForm::basis(R4, {0, 1}) + DifferentialForm::basis(R4, {2, 3});
  EXPECT_EQ(intrinsic_gradient_at(w, R4.point({1, 2, 3, 4})).nabla.rank.rank, 0);
}

TEST(IntrinsicGradient, Example1Linearization) {
  const auto env = test::load(
      "chart M (t1, t2, t3, x1, x2, x3)\n"
      "chart N (t1, t2, t3)\n"
      "chart Y (x1, x2, x3)\n"
      "metric gN on N = euclidean\n"
      "metric gY on Y = euclidean\n"
      "map pN : M -> N = (t1, t2, t3)\n"
      "map pY : M -> Y = (x1, x2, x3)\n"
      "form b on N = d(t3)\n"
      "form a on Y = d(-x1^2 + 1/2*(x2^2 + x3^2))\n"
      "form w on M = pullback(pN, b) /\\ pullback(pY, a) + pullback(pN, star(gN, b)) + pullback(pY, star(gY, a))\n");
  const auto g = intrinsic_gradient_at(env.form("w"), env.chart("M").point({1, 2, 3, 0, 0, 0}), true);
  ASSERT_TRUE(g.power);
  EXPECT_EQ(g.power->columns.size(), 15u);
  EXPECT_EQ(g.power->matrix.rows, 6);
  EXPECT_EQ(g.power->rank.rank, 3);
}

TEST(NearSymplectic, Example2OnLocus) {
  auto env = test::load(test::kExample2);
  for (int t = -2; t <= 2; ++t) {
    const auto v = near_symplectic_point_test(env.form("w"), env.chart("R6").point({t, q(1, 2), -t, 0, 0, 0}));
    EXPECT_TRUE(v.pass) << v.summary();
    EXPECT_EQ(v.kernel_dim, 4);
    EXPECT_EQ(v.image_dim, 3);
    EXPECT_TRUE(v.image_signature.positive == 0 || v.image_signature.negative == 0);
    EXPECT_TRUE(v.exact);
  }
}

TEST(NearSymplectic, Failures) {
  auto env = test::load(test::kExample2);
  const auto off = near_symplectic_point_test(env.form("w"), env.chart("R6").point({0, 0, 0, 1, 0, 0}));
  EXPECT_FALSE(off.pass);
  EXPECT_EQ(off.reason, "nondegenerate point");

  const Chart R6("R6", {"t1", "t2", "t3", "x1", "x2", "x3"});
  const auto st = DifferentialForm::basis(R6, {0, 1}) + DifferentialForm::basis(R6, {2, 3}) +
                  DifferentialForm::basis(R6, {4, 5});
  EXPECT_EQ(near_symplectic_point_test(st, R6.point({0, 0, 0, 0, 0, 0})).reason, "nondegenerate point");

  const auto flat = near_symplectic_point_test(DifferentialForm::basis(R6, {0, 1}), R6.point({0, 0, 0, 0, 0, 0}));
  EXPECT_FALSE(flat.pass);
  EXPECT_EQ(flat.reason, "image rank ≠ 3");

  const DifferentialForm zero(R6, 2);
  EXPECT_EQ(near_symplectic_point_test(zero, R6.point({0, 0, 0, 0, 0, 0})).reason, "kernel not 4-dim");
}

TEST(NearSymplectic, IndefiniteImage) {
  // Same shape as Example 2 but the linear part spans an indefinite plane.
  const auto env = test::load(
      "chart R6 (t1, t2, t3, x1, x2, x3)\n"
      "form w on R6 = d(t1) /\\ d(t2) + x1*(d(t3) /\\ d(x1) + d(x2) /\\ d(x3))"
      " + x2*(d(t3) /\\ d(x2) - d(x1) /\\ d(x3)) + x3*(d(t3) /\\ d(x1) - d(x2) /\\ d(x3))\n");
  const auto v = near_symplectic_point_test(env.form("w"), env.chart("R6").point({0, 0, 0, 0, 0, 0}));
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.image_dim, 3);
  EXPECT_EQ(v.reason, "indefinite image") << v.summary();
}

TEST(Contact, HalfTorsionSymbolic) {
  const auto env = test::load(
      "chart H (r, x, y)\n"
      "form a on H = sin(pi*r)*d(x) + cos(pi*r)*d(y)\n");
  const auto v = contact_test(env.form("a"), nullptr, {});
  EXPECT_TRUE(v.pass);
  EXPECT_TRUE(v.symbolic);
  EXPECT_EQ(v.top.str(), "pi");
  EXPECT_TRUE(v.top.kind() != Expr::Kind::Rational);
}

TEST(Contact, Darboux) {
  const Chart C3("C3", {"z1", "z2", "z3"});
  const auto a = DifferentialForm::dx(C3, "z3") + Expr::symbol("z1") * DifferentialForm::dx(C3, "z2");
  const auto v = contact_test(a, nullptr, {});
  EXPECT_TRUE(v.pass);
  EXPECT_TRUE(v.top == 1);
  EXPECT_TRUE(wedge(a, exterior_derivative(a)) == DifferentialForm::basis(C3, {0, 1, 2}));
}

TEST(Contact, NonContactSampled) {
  const Chart C3("C3", {"x", "y", "z"});
  const Expr x = sym("x");
  // a ^ da = x dx^dy^dz changes sign across x = 0.
  const auto a = DifferentialForm::dx(C3, "z") + Expr(q(1, 2)) * pow(x, 2) * DifferentialForm::dx(C3, "y");
  std::vector<Point> pts;
  for (int i = -3; i <= 3; ++i) pts.push_back(C3.point({q(i, 3), 0, 0}));
  const auto v = contact_test(a, nullptr, pts);
  EXPECT_FALSE(v.pass);
  EXPECT_GT(v.positive, 0);
  EXPECT_GT(v.negative, 0);
  EXPECT_EQ(v.zero, 1);
}

TEST(Contact, DegenerateParametrizationReported) {
  const Chart C3("C3", {"x", "y", "z"}), P("P", {"u", "v", "w"});
  const SmoothMap flat(P, C3, {sym("u"), sym("v"), Expr(0) * sym("w")});
  const auto a = DifferentialForm::dx(C3, "z") + sym("x") * DifferentialForm::dx(C3, "y");
  const auto v = contact_test(a, &flat, {P.point({0, 0, 0}), P.point({1, 1, 1})});
  EXPECT_FALSE(v.pass);
  EXPECT_GT(v.degenerate, 0);
}

TEST(Stabilize, Examples) {
  const Chart R4("R4", {"x1", "x2", "x3", "x4"});
  const auto st = DifferentialForm::basis(R4, {0, 1}) + DifferentialForm::basis(R4, {2, 3});
  const std::vector<Point> pts{R4.point({0, 0, 0, 0}), R4.point({1, -1, 2, 3})};
  const auto r = stabilizing_constant_search(DifferentialForm(R4, 2), st, pts, 64);
  EXPECT_TRUE(r.found);
  EXPECT_EQ(r.K, 1);

  const auto fail = stabilizing_constant_search(DifferentialForm::basis(R4, {0, 1}), DifferentialForm(R4, 2), pts, 64);
  EXPECT_FALSE(fail.found);
  ASSERT_TRUE(fail.worst);
  EXPECT_EQ(fail.worst_rank, 2);
}

TEST(Stabilize, FoldLocalModel) {
  const auto env = test::load(
      "chart M (t1, t2, t3, x1, x2, x3)\n"
      "chart X (u1, u2, u3, u4)\n"
      "map f : M -> X = (t1, t2, t3, -x1^2 + x2^2 + x3^2)\n"
      "form wst on X = d(u1) /\\ d(u2) + d(u3) /\\ d(u4)\n"
      "form fw on M = pullback(f, wst)\n"
      "form tau on M = d(x1*(x2*d(x3) - x3*d(x2)))\n"
      "region offs on M = [-1, 1]:* x [-1, 1]:* x [-1, 1]:* x [1/4, 1]:* x [1/4, 1]:* x [1/4, 1]:* random 100\n");
  const auto pts = sample(env.region("offs"));
  EXPECT_EQ(pts.size(), 100u);
  const auto r = stabilizing_constant_search(env.form("tau"), env.form("fw"), pts, 1 << 20);
  EXPECT_TRUE(r.found) << r.summary();
}

TEST(JacobianRank, Fold) {
  const Chart M("M", {"t", "x1", "x2", "x3"}), N("N", {"u", "v"});
  const SmoothMap F(M, N, {sym("t"), pow(sym("x1"), 2) + pow(sym("x2"), 2) - pow(sym("x3"), 2)});
  EXPECT_EQ(jacobian_rank_at(F, M.point({1, 0, 0, 0})).rank, 1);
  EXPECT_EQ(jacobian_rank_at(F, M.point({1, 1, 0, 0})).rank, 2);
}

TEST(Linalg, ExactAndNumeric) {
  RationalMatrix m{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  EXPECT_EQ(rank(m), 2);
  EXPECT_EQ(determinant(m), 0);
  const auto k = kernel(m);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_FALSE(inverse(m).has_value());
  RationalMatrix s{{2, 1}, {1, 2}};
  EXPECT_TRUE(is_positive_definite(s));
  const auto in = inertia(RationalMatrix{{1, 0, 0}, {0, -2, 0}, {0, 0, 0}});
  EXPECT_EQ(in.positive, 1);
  EXPECT_EQ(in.negative, 1);
  EXPECT_EQ(in.zero, 1);
  const auto nr = numeric_rank(RealMatrix{{1, 0}, {0, 1e-9}});
  EXPECT_TRUE(nr.undecided);
  EXPECT_EQ(numeric_rank(RealMatrix{{1, 0}, {0, 1e-12}}).rank, 1);
}

}  // namespace
}  // namespace nsx
