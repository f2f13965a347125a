#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "liesym/determine.hpp"
#include "liesym/families.hpp"
#include "liesym/parse.hpp"
#include "liesym/properties.hpp"
#include "liesym/symsolve.hpp"

using namespace liesym;

namespace {
ParseContext ctx(std::set<std::string> params = {"a", "b", "c", "g", "h"}) {
  ParseContext c;
  c.params = std::move(params);
  return c;
}

bool has_equation(const DeterminingSystem& ds, const Expr& e) {
  Expr want = primitive_part(normalize_equation(e));
  return std::any_of(ds.equations.begin(), ds.equations.end(),
                     [&](const DetEquation& d) { return primitive_part(normalize_equation(d.expr)) == want; });
}
}  // namespace

TEST(Determine, OnManifoldExamples) {
  Equation zk = family_equation("zk-gh");
  auto c = ctx();
  EXPECT_EQ(on_manifold(parse("u_t", c), zk), normal_form(parse("-u_xxx - g*u_xyy - h*u*u_x", c)));
  EXPECT_EQ(on_manifold(parse("u_x", c), zk), parse("u_x", c));
  EXPECT_EQ(normal_form(on_manifold(parse("u_tx", c), zk)),
            normal_form(parse("-u_xxxx - g*u_xxyy - h*u_x^2 - h*u*u_xx", c)));
  Expr e = parse("x*u_t + u_ty", c);
  EXPECT_EQ(on_manifold(on_manifold(e, zk), zk), on_manifold(e, zk));
}

TEST(Determine, ZkSystemContents) {
  DeterminingSystem ds = simplify_system(determining_system(family_equation("zk")));
  auto c = ctx();
  for (const char* s : {"tau_x", "tau_y", "tau_u", "xi_u", "zeta_u", "eta_uu", "tau_t - 3*xi_x"})
    EXPECT_TRUE(has_equation(ds, parse(s, c))) << s;
  auto basis = AnsatzBasis::polynomial(2);
  EXPECT_TRUE(check_implied(ds, {parse("c*eta + c*u*(tau_t - xi_x) - xi_t", c)}, basis).all());
  EXPECT_FALSE(check_implied(ds, {parse("eta_u", c)}, basis).all());
}

TEST(Determine, Mzk2ContainsQuadraticCondition) {
  Equation eq = family_equation("mzk2");
  DeterminingSystem ds = simplify_system(determining_system(eq));
  auto rep = check_implied(ds, {parse("2*a*eta*u + a*(tau_t - xi_x)*u^2 - xi_t", ctx())}, AnsatzBasis::polynomial(2));
  EXPECT_TRUE(rep.all());
}

TEST(Determine, GenericClassifyingEquation) {
  Equation eq = Equation::from_class(std::nullopt, std::nullopt, std::nullopt);
  DeterminingSystem ds = simplify_system(determining_system(eq));
  EXPECT_TRUE(has_equation(ds, parse("eta*F_uu + (tau_t - 3*xi_x)*F_u")));
  EXPECT_TRUE(std::any_of(ds.equations.begin(), ds.equations.end(), [](const DetEquation& d) { return d.classifying; }));
}

TEST(Determine, GenericSplitGivesKernel) {
  Equation eq = Equation::from_class(std::nullopt, std::nullopt, std::nullopt);
  DeterminingSystem split = simplify_system(split_arbitrary(determining_system(eq)));
  auto r = solve_system(split, AnsatzBasis::polynomial(2));
  EXPECT_EQ(r.dimension, 3);
  DeterminingSystem again = split_arbitrary(split);
  EXPECT_EQ(simplify_system(again).lines(), split.lines());
}

TEST(Determine, KernelWithoutH) {
  Equation eq = Equation::from_class(std::nullopt, std::nullopt, Expr(0));
  DeterminingSystem split = simplify_system(split_arbitrary(determining_system(eq)));
  auto r = solve_system(split, AnsatzBasis::polynomial(2));
  EXPECT_EQ(r.dimension, 4);
  EXPECT_TRUE(contains_field(r, parse_field("3*t*dt + x*dx + y*dy"), AnsatzBasis::polynomial(2)));
}

TEST(Determine, CriterionReconstruction) {
  for (const char* fam : {"zk", "mzk1", "mzk2"}) {
    Equation eq = family_equation(fam);
    auto parts = criterion_coefficients(eq);
    Expr back;
    for (const auto& [m, k] : parts) back += monomial_expr(m) * k;
    EXPECT_TRUE(normal_form(back - restricted_criterion(eq, VectorField::generic())).is_zero()) << fam;
  }
}

TEST(Determine, CriterionReconstructionNumeric) {
  Equation eq = family_equation("zk");
  auto parts = criterion_coefficients(eq);
  Expr full = restricted_criterion(eq, VectorField::generic());
  Expr back;
  for (const auto& [m, k] : parts) back += monomial_expr(m) * k;
  std::vector<Atom> atoms;
  collect_atoms(full + back, atoms);
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int k = 0; k < 100; ++k) {
    NumericPoint p;
    for (Atom a : atoms) p[a] = d(g);
    EXPECT_NEAR(eval_numeric(full, p), eval_numeric(back, p), 1e-9);
  }
}

// A field satisfies every determining equation iff its invariance residual vanishes.
TEST(Determine, AgreesWithDirectCheck) {
  Equation eq = family_equation("zk", {{"a", 1}, {"b", 1}, {"c", 1}});
  DeterminingSystem ds = determining_system(eq);
  std::mt19937_64 g(17);
  std::vector<VectorField> symmetric = {parse_field("dt"), parse_field("dx"), parse_field("t*dx + du"),
                                        parse_field("3*t*dt + x*dx + y*dy - 2*u*du")};
  for (int k = 0; k < 50; ++k) {
    VectorField v;
    if (k % 2 == 0) {
      v = random_point_field(g);
    } else {
      for (const auto& s : symmetric) v = v + Expr(int(g() % 5) - 2) * s;
    }
    bool all_zero = std::all_of(ds.equations.begin(), ds.equations.end(),
                                [&](const DetEquation& d) { return normal_form(substitute_field(d.expr, v)).is_zero(); });
    EXPECT_EQ(all_zero, check_symmetry(eq, v).kind == Residual::Kind::SymbolicZero) << to_string(v);
  }
}
