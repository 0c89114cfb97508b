#include <gtest/gtest.h>

#include "nsx/errors.hpp"
#include "nsx/properties.hpp"
#include "nsx/sympl.hpp"
#include "test_util.hpp"

namespace nsx {
namespace {

using test::sym;

const Chart PQ("PQ", {"p1", "q1"});
const Chart PQ2("PQ2", {"p1", "q1", "p2", "q2"});

TEST(Hamiltonian, CoordinateFunctions) {
  const auto S = SymplecticChart::standard(PQ);
  const auto Xp = hamiltonian_vector_field(sym("p1"), S);
  EXPECT_TRUE(Xp.components()[0].is_zero());
  EXPECT_TRUE(Xp.components()[1] == -1);
  const auto Xq = hamiltonian_vector_field(sym("q1"), S);
  EXPECT_TRUE(Xq.components()[0] == 1);
  EXPECT_TRUE(Xq.components()[1].is_zero());
  // Convention i_X w = dH.
  EXPECT_TRUE(interior_product(Xq, S.omega()) == DifferentialForm::dx(PQ, "q1"));
}

TEST(Hamiltonian, GraphFunctionTangent) {
  const Chart Y = straightening_chart(4);
  const auto S = SymplecticChart::standard(Y);
  const Expr H = sym("y4") - sym("y1") * sym("y2");
  const auto X = hamiltonian_vector_field(H, S);
  const auto dH = exterior_derivative(DifferentialForm::scalar(Y, H));
  EXPECT_TRUE(interior_product(X, S.omega()) == dH);
  EXPECT_TRUE(contract(dH, {X}).is_zero());
}

TEST(Hamiltonian, Errors) {
  const Chart C("C", {"a", "b"});
  EXPECT_THROW(SymplecticChart(C, sym("a") * DifferentialForm::basis(C, {0, 1})), Unsupported);
  EXPECT_THROW(SymplecticChart(PQ2, DifferentialForm::basis(PQ2, {0, 1})), DomainError);
  EXPECT_THROW(SymplecticChart::standard(Chart("C3", {"a", "b", "c"})), DomainError);
}

TEST(PoissonBracket, Relations) {
  const auto S = SymplecticChart::standard(PQ2);
  EXPECT_TRUE(poisson_bracket(sym("p1"), sym("q1"), S) == 1);
  EXPECT_TRUE(poisson_bracket(sym("p1"), sym("q2"), S).is_zero());
  EXPECT_TRUE(poisson_bracket(sym("q1"), sym("p1"), S) == -1);
  const Expr f = sin(sym("p1")) * sym("q2") + pow(sym("q1"), 3);
  EXPECT_TRUE(poisson_bracket(f, f, S).is_zero());
}

TEST(PoissonBracket, RandomAntisymmetryAndJacobi) {
  for (const std::string name : {"antisymmetry", "jacobi"}) {
    const auto r = run_property(name, default_property_count(name), Rng::kDefaultSeed);
    EXPECT_TRUE(r.pass) << r.summary();
  }
  EXPECT_EQ(default_property_count("antisymmetry"), 100);
  EXPECT_EQ(default_property_count("jacobi"), 50);
}

TEST(Straightening, FlatGraph) {
  const auto r = graph_straightening(Expr(0), 4);
  EXPECT_TRUE(r.pass) << r.summary();
  EXPECT_TRUE(r.coordinates[1] == sym("y4"));
  EXPECT_TRUE(r.pullback_ok);
  EXPECT_TRUE(r.graph_ok);
}

TEST(Straightening, ParabolaIn2D) {
  const auto r = graph_straightening(pow(sym("y1"), 2), 2);
  EXPECT_TRUE(r.pass) << r.summary();
  ASSERT_EQ(r.coordinates.size(), 2u);
  EXPECT_TRUE(r.coordinates[0] == sym("y1"));
  EXPECT_TRUE(r.coordinates[1] == sym("y2") - pow(sym("y1"), 2));
  EXPECT_TRUE(r.brackets[0][1] == 1);
}

TEST(Straightening, MixedGraphReportsOffendingBracket) {
  const auto r = graph_straightening(sym("y1") * sym("y2") + pow(sym("y3"), 2), 4);
  EXPECT_FALSE(r.pass);
  ASSERT_FALSE(r.failures.empty());
  EXPECT_NE(r.summary().find("expected"), std::string::npos);
  EXPECT_TRUE(r.graph_ok);
}

TEST(Straightening, PassingTablesPullBackToStandard) {
  for (const Expr& h : {Expr(0), pow(sym("y3"), 2) + sin(sym("y3")), Expr(7) * sym("y3")}) {
    const auto r = graph_straightening(h, 4);
    EXPECT_TRUE(r.pass) << r.summary();
    EXPECT_TRUE(r.pullback_ok);
  }
  EXPECT_THROW(graph_straightening(sym("y4"), 4), DomainError);
}

}  // namespace
}  // namespace nsx
