#include <gtest/gtest.h>

#include <random>

#include "liesym/catalog.hpp"
#include "liesym/equivalence.hpp"
#include "liesym/parse.hpp"
#include "liesym/solcheck.hpp"
#include "liesym/verify.hpp"

using namespace liesym;

namespace {
Expr U() { return var_u(); }

Triple zk_triple(const Rational& g, const Rational& h) {
  return {U(), Expr(g) * U(), Expr(h / 2) * U() * U()};
}

bool same_triple(const Triple& a, const Triple& b) {
  return normal_form(a.F - b.F).is_zero() && normal_form(a.G - b.G).is_zero() && normal_form(a.H - b.H).is_zero();
}

EquivTransform random_transform(std::mt19937_64& g) {
  auto nz = [&] {
    long n = 0;
    while (n == 0) n = long(g() % 7) - 3;
    return Rational(n, long(g() % 2) + 1);
  };
  EquivTransform T;
  for (int k = 1; k <= 12; ++k) T[k] = k <= 4 ? nz() : Rational(long(g() % 7) - 3, long(g() % 3) + 1);
  for (auto& q : T.e) q.canonicalize();
  return T;
}

bool all_zero(const std::vector<EquationCheck>& sys) {
  for (const auto& e : sys)
    if (!normal_form(e.value).is_zero()) return false;
  return true;
}
}  // namespace

TEST(Equivalence, IdentityLeavesTripleUnchanged) {
  Triple tr = zk_triple(2, -1);
  EquivImage im = apply_equivalence(EquivTransform::identity(), tr);
  EXPECT_TRUE(same_triple(im.triple, tr));
  EXPECT_EQ(im.variables[1], var_x());
}

TEST(Equivalence, ApplyExamples) {
  Triple tr{U() * U(), U(), U()};
  EquivTransform T = EquivTransform::identity();
  T[2] = 2;
  EquivImage im = apply_equivalence(T, tr);
  EXPECT_TRUE(normal_form(im.triple.F - Expr(8) * U() * U()).is_zero()) << to_string(im.triple.F);

  EquivTransform G = EquivTransform::identity();
  G[5] = 1;
  EquivImage gi = apply_equivalence(G, tr);
  EXPECT_TRUE(normal_form(gi.triple.H - Expr(2) * U()).is_zero()) << to_string(gi.triple.H);
  EXPECT_EQ(normal_form(gi.variables[1]), normal_form(var_x() + var_t()));
}

TEST(Equivalence, DegenerateTransformRejected) {
  EquivTransform T = EquivTransform::identity();
  T[3] = 0;
  EXPECT_FALSE(T.nondegenerate());
  EXPECT_THROW(apply_equivalence(T, zk_triple(1, 1)), std::invalid_argument);
}

TEST(Equivalence, GroupLaw) {
  std::mt19937_64 g(42);
  Triple tr = zk_triple(1, 2);
  for (int k = 0; k < 100; ++k) {
    EquivTransform a = random_transform(g), b = random_transform(g), c = random_transform(g);
    EXPECT_EQ(compose(a, inverse(a)), EquivTransform::identity());
    EXPECT_EQ(compose(compose(a, b), c), compose(a, compose(b, c)));
    Triple step = apply_equivalence(b, apply_equivalence(a, tr).triple).triple;
    EXPECT_TRUE(same_triple(step, apply_equivalence(compose(a, b), tr).triple));
    EXPECT_TRUE(same_triple(apply_equivalence(inverse(a), apply_equivalence(a, tr).triple).triple, tr));
  }
}

TEST(Equivalence, CompleteGroupPreservesClass) {
  EXPECT_TRUE(complete_group_defect().is_zero());
  EXPECT_TRUE(group_defect(complete_group()).is_zero());
  EXPECT_TRUE(group_defect(continuous_group()).is_zero());
}

TEST(Equivalence, BrokenGroupDetected) {
  auto comp = complete_group();
  comp[4] = comp[4] + arb(0);  // F~ off by F
  EXPECT_FALSE(group_defect(comp).is_zero());
  auto bad = complete_group();
  bad[0] = bad[0] + var_x();
  EXPECT_THROW(group_defect(bad), std::invalid_argument);
}

TEST(Equivalence, GeneratorsAgainstSystem) {
  EXPECT_TRUE(all_zero(equivalence_system(parse_equiv_generator("t*dx + u*dH"))));
  EXPECT_TRUE(all_zero(equivalence_system(parse_equiv_generator("dF"))));
  EXPECT_TRUE(all_zero(equivalence_system(parse_equiv_generator("x*dx + 3*F*dF + G*dG + H*dH"))));
  EXPECT_FALSE(all_zero(equivalence_system(parse_equiv_generator("t*dx + dH"))));
  EXPECT_FALSE(all_zero(equivalence_system(parse_equiv_generator("u^2*du"))));
}

TEST(Equivalence, SolvedBasisSpansTwelve) {
  for (int k = 1; k <= 12; ++k) EXPECT_TRUE(all_zero(equivalence_system(solved_basis_element(k)))) << k;
  // the tangents of the complete group at the identity lie in the same span
  for (int k = 1; k <= 12; ++k) EXPECT_TRUE(all_zero(equivalence_system(continuous_group_tangent(k)))) << k;
}

TEST(Equivalence, CatalogGeneratorsVerify) {
  SuiteReport r = verify_equivalence(default_catalog(), VerifyOptions{});
  EXPECT_TRUE(r.ok());
  int corrected = 0;
  for (const auto& l : r.lines)
    if (l.id.rfind("equivgen.algebra.", 0) == 0 && l.verdict == "CORRECTED") ++corrected;
  EXPECT_EQ(corrected, 4);
}

TEST(Equivalence, TransportedSolutionsSolveImage) {
  ParseContext c;
  // stationary-in-time travelling wave of ZK with g = h = 1
  Expr sol = parse("3*sech(1/2*(x - t))^2", c);
  Triple tr = zk_triple(1, 1);
  EXPECT_TRUE(check_solution(class_member(tr), sol).pass());
  std::mt19937_64 g(8);
  for (int k = 0; k < 5; ++k) {
    EquivTransform T = random_transform(g);
    EquivImage im = apply_equivalence(T, tr);
    Expr moved = transport_solution(T, sol);
    EXPECT_TRUE(check_solution(class_member(im.triple), moved).pass()) << to_string(moved);
  }
}
