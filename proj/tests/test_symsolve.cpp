#include <gtest/gtest.h>

#include <random>

#include "liesym/catalog.hpp"
#include "liesym/families.hpp"
#include "liesym/liealg.hpp"
#include "liesym/parse.hpp"
#include "liesym/properties.hpp"
#include "liesym/symsolve.hpp"
#include "liesym/verify.hpp"

using namespace liesym;

namespace {
ParseContext ctx() {
  ParseContext c;
  c.params = {"a", "b", "c", "g", "h"};
  return c;
}
VectorField V(const std::string& s) { return parse_field(s, ctx()); }

Equation zk111() { return family_equation("zk", {{"a", 1}, {"b", 1}, {"c", 1}}); }

std::string verdict_of(const std::string& id) {
  const Catalog& cat = default_catalog();
  const CatalogRecord* r = cat.find("case", id);
  EXPECT_NE(r, nullptr) << id;
  return r ? verify_case(*r, cat, VerifyOptions{}).verdict : "";
}
}  // namespace

TEST(Symsolve, ResidualExamples) {
  EXPECT_EQ(check_symmetry(zk111(), V("3*t*dt + x*dx + y*dy - 2*u*du")).kind, Residual::Kind::SymbolicZero);
  Residual r = check_symmetry(family_equation("zk"), V("du"));
  EXPECT_EQ(r.kind, Residual::Kind::Nonzero);
  EXPECT_EQ(r.expr, parse("c*u_x", ctx()));
  EXPECT_TRUE(check_symmetry(zk111(), VectorField{}).ok());
}

TEST(Symsolve, ResidualIsLinear) {
  Equation eq = family_equation("zk-gh");
  std::mt19937_64 g(2);
  for (int k = 0; k < 20; ++k) {
    VectorField v = random_point_field(g), w = random_point_field(g);
    Expr lhs = restricted_criterion(eq, Expr(3) * v + Expr(-2) * w);
    Expr rhs = Expr(3) * restricted_criterion(eq, v) - Expr(2) * restricted_criterion(eq, w);
    EXPECT_TRUE(normal_form(lhs - rhs).is_zero());
  }
}

TEST(Symsolve, AnsatzBasesAreIndependent) {
  EXPECT_TRUE(AnsatzBasis::polynomial(2).independent());
  EXPECT_TRUE((AnsatzBasis::polynomial(2) + AnsatzBasis::y_trig_extension()).independent());
  EXPECT_TRUE((AnsatzBasis::polynomial(2) + AnsatzBasis::y_exp_extension()).independent());
  EXPECT_EQ(AnsatzBasis::polynomial(1).size(), 5u);
}

TEST(Symsolve, ZkAlgebraDimensionFive) {
  auto basis = AnsatzBasis::polynomial(2);
  auto r = solve_ansatz(zk111(), basis);
  EXPECT_EQ(r.dimension, 5);
  for (const char* v : {"dt", "dx", "dy", "t*dx + du", "3*t*dt + x*dx + y*dy - 2*u*du"})
    EXPECT_TRUE(contains_field(r, V(v), basis)) << v;
  for (const auto& v : r.basis) EXPECT_EQ(check_symmetry(zk111(), v).kind, Residual::Kind::SymbolicZero);
  EXPECT_TRUE(structure_constants(r.basis).closed);
}

TEST(Symsolve, ModifiedFamiliesDimensionFour) {
  auto basis = AnsatzBasis::polynomial(2);
  auto r1 = solve_ansatz(family_equation("mzk1", {{"a", 1}, {"b", 1}, {"c", 1}}), basis);
  EXPECT_EQ(r1.dimension, 4);
  EXPECT_TRUE(contains_field(r1, V("3*t*dt + x*dx + y*dy - 4*u*du"), basis));
  auto r2 = solve_ansatz(family_equation("mzk2", {{"a", 1}}), basis);
  EXPECT_EQ(r2.dimension, 4);
  EXPECT_TRUE(contains_field(r2, V("3*t*dt + x*dx + y*dy - u*du"), basis));
}

TEST(Symsolve, LowerDegreeNeverFindsMore) {
  for (const char* fam : {"zk", "mzk1", "mzk2"}) {
    Equation eq = substitute_params(family_equation(fam), {{"a", 1}, {"b", 1}, {"c", 1}});
    EXPECT_LE(solve_ansatz(eq, AnsatzBasis::polynomial(1)).dimension,
              solve_ansatz(eq, AnsatzBasis::polynomial(2)).dimension)
        << fam;
  }
}

TEST(Symsolve, TrigExtensionCase) {
  ParseContext c;
  Equation eq = Equation::from_class(parse("u", c), parse("u^(-1/3)", c), parse("u^(-1/3)", c));
  auto basis = AnsatzBasis::polynomial(2) + AnsatzBasis::y_trig_extension();
  auto r = solve_ansatz(eq, basis);
  EXPECT_EQ(r.dimension, 6);
  EXPECT_TRUE(contains_field(r, V("cos(2*y)*dy + 3*u*sin(2*y)*du"), basis));
  EXPECT_TRUE(contains_field(r, V("sin(2*y)*dy - 3*u*cos(2*y)*du"), basis));
  EXPECT_EQ(solve_ansatz(eq, AnsatzBasis::polynomial(2)).dimension, 4);
}

TEST(Symsolve, CatalogCases) {
  EXPECT_EQ(verdict_of("T1.2"), "PASS");
  EXPECT_EQ(verdict_of("T1.20"), "PASS");
  EXPECT_EQ(verdict_of("T2.10"), "PASS");
  EXPECT_EQ(verdict_of("T1.1"), "PASS");
}

TEST(Symsolve, PrintedTyposAreCorrected) {
  EXPECT_EQ(verdict_of("T1.19"), "CORRECTED");
  EXPECT_EQ(verdict_of("T2.9"), "CORRECTED");
}

TEST(Symsolve, ResidualDescriptions) {
  Residual r = check_symmetry(family_equation("zk"), V("du"));
  EXPECT_EQ(r.describe(), "nonzero(" + to_string(parse("c*u_x", ctx())) + ")");
}
