#include <gtest/gtest.h>

#include <random>

#include "liesym/catalog.hpp"
#include "liesym/liealg.hpp"
#include "liesym/parse.hpp"
#include "liesym/properties.hpp"

using namespace liesym;

namespace {
ParseContext ctx() {
  ParseContext c;
  c.params = {"h", "g", "a"};
  c.allow_coef = false;
  return c;
}
VectorField V(const std::string& s) { return parse_field(s, ctx()); }

LieAlgebra zk() {
  return structure_constants({V("dt"), V("dx"), V("dy"), V("h*t*dx + du"), V("3*t*dt + x*dx + y*dy - 2*u*du")});
}
LieAlgebra mzk() { return structure_constants({V("dt"), V("dx"), V("dy"), V("t*dt + 1/3*x*dx + 1/3*y*dy - 1/3*u*du")}); }

std::vector<Expr> coords(const LieAlgebra& g, const VectorField& v) {
  auto c = coordinates(v, g.basis);
  EXPECT_TRUE(c.has_value());
  return c.value_or(std::vector<Expr>(g.dim()));
}
bool same(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!normal_form(a[k] - b[k]).is_zero()) return false;
  return true;
}
}  // namespace

TEST(Liealg, CommutatorExamples) {
  EXPECT_EQ(commutator(V("dt"), V("t*dt + 1/3*x*dx + 1/3*y*dy - 1/3*u*du")), V("dt"));
  EXPECT_EQ(commutator(V("dt"), V("h*t*dx + du")), V("h*dx"));
  EXPECT_TRUE(commutator(V("dx"), V("dy")).is_zero());
  VectorField v = V("x*u*dt + sin(y)*du");
  EXPECT_TRUE(commutator(v, v).is_zero());
}

TEST(Liealg, StructureConstants) {
  LieAlgebra m = mzk();
  EXPECT_TRUE(m.closed);
  EXPECT_EQ(m.c[0][3][0], Expr(1));
  EXPECT_EQ(m.c[1][3][1], Expr(Rational(1, 3)));
  EXPECT_EQ(m.c[2][3][2], Expr(Rational(1, 3)));
  LieAlgebra z = zk();
  EXPECT_EQ(z.c[0][3][1], parse("h", ctx()));
  EXPECT_EQ(z.c[0][4][0], Expr(3));
  EXPECT_EQ(z.c[3][4][3], Expr(-2));
  EXPECT_TRUE(jacobi_holds(z));
  EXPECT_TRUE(antisymmetric(z));
}

TEST(Liealg, AbelianAlgebra) {
  LieAlgebra a = structure_constants({V("dt"), V("dx"), V("dy")});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) EXPECT_TRUE(a.c[i][j][k].is_zero());
}

TEST(Liealg, OpenSpanReported) {
  LieAlgebra a = structure_constants({V("dt"), V("dx"), V("t*dx")});
  EXPECT_TRUE(a.closed);
  LieAlgebra b = structure_constants({V("dt"), V("t*dx")});
  EXPECT_FALSE(b.closed);
  EXPECT_FALSE(b.open_pairs.empty());
}

TEST(Liealg, AdjointExamples) {
  Expr eps = parse("eps", [] {
    auto c = ctx();
    c.params.insert("eps");
    return c;
  }());
  LieAlgebra m = mzk();
  EXPECT_TRUE(same(adjoint_action(m, 3, eps, unit(4, 0)), {exp(eps), 0, 0, 0}));
  EXPECT_TRUE(same(adjoint_action(m, 0, eps, unit(4, 3)), {-eps, 0, 0, 1}));
  LieAlgebra z = zk();
  EXPECT_TRUE(same(adjoint_action(z, 3, eps, unit(5, 0)), {1, param("h") * eps, 0, 0, 0}));
  EXPECT_TRUE(same(adjoint_action(z, 4, eps, unit(5, 3)), {0, 0, 0, exp(Expr(-2) * eps), 0}));
  EXPECT_TRUE(same(adjoint_action(z, 2, eps, unit(5, 2)), unit(5, 2)));
}

TEST(Liealg, AdjointAtZeroIsIdentity) {
  LieAlgebra z = zk();
  std::mt19937_64 g(4);
  for (int i = 0; i < 5; ++i) {
    std::vector<Expr> w(5);
    for (auto& e : w) e = Expr(int(g() % 7) - 3);
    EXPECT_TRUE(same(adjoint_action(z, i, Expr(0), w), w));
  }
}

// The closed form agrees with the truncated series through order six.
TEST(Liealg, AdjointSeriesConsistency) {
  Atom ea = param_atom("eps");
  Expr eps = Expr::atom(ea);
  for (const LieAlgebra& g : {zk(), mzk()})
    for (int i = 0; i < int(g.dim()); ++i)
      for (std::size_t j = 0; j < g.dim(); ++j) {
        auto a = adjoint_action(g, i, eps, unit(g.dim(), j));
        auto b = adjoint_series(g, i, eps, unit(g.dim(), j), 6);
        for (std::size_t k = 0; k < g.dim(); ++k) {
          Expr p = a[k], q = b[k];
          for (int d = 0; d <= 6; ++d) {
            EXPECT_TRUE(normal_form(subst(p - q, {{ea, Expr(0)}})).is_zero()) << i << " " << j << " " << k;
            p = normal_form(pdiff(p, ea));
            q = normal_form(pdiff(q, ea));
          }
        }
      }
}

TEST(Liealg, ClassifiesAdjointMatrices) {
  LieAlgebra z = zk();
  EXPECT_EQ(classify(ad_matrix(z, 0)), AdKind::Nilpotent);
  EXPECT_EQ(classify(ad_matrix(z, 4)), AdKind::Diagonal);
  // Jordan block with eigenvalue -1
  LieAlgebra j = structure_constants({V("dx"), V("dy"), V("(x + y)*dx + y*dy")});
  EXPECT_EQ(classify(ad_matrix(j, 2)), AdKind::Other);
  EXPECT_THROW(adjoint_action(j, 2, param("eps"), unit(3, 0)), std::domain_error);
}

TEST(Liealg, SubalgebraChecks) {
  LieAlgebra z = zk();
  EXPECT_TRUE(check_subalgebra({V("dt"), V("dx")}, z).closed);
  EXPECT_TRUE(check_subalgebra({V("dx"), V("3*t*dt + x*dx + y*dy - 2*u*du")}, z).closed);
  auto bad = check_subalgebra({V("dt"), V("h*t*dx + du")}, z);
  EXPECT_FALSE(bad.closed);
  EXPECT_FALSE(bad.witness.empty());
  EXPECT_THROW(check_subalgebra({V("x*dt")}, z), std::invalid_argument);
}

TEST(Liealg, CatalogAlgebrasSatisfyJacobi) {
  ParseContext c = ctx();
  for (const CatalogRecord* r : default_catalog().of_kind("algebra")) {
    std::vector<VectorField> basis;
    for (const auto& s : r->all("generator")) basis.push_back(parse_field(s, c));
    LieAlgebra g = structure_constants(basis);
    EXPECT_TRUE(g.closed) << r->id;
    EXPECT_TRUE(jacobi_holds(g)) << r->id;
    EXPECT_TRUE(antisymmetric(g)) << r->id;
  }
}

TEST(Liealg, CoordinatesRoundTrip) {
  LieAlgebra z = zk();
  std::vector<Expr> w = {1, -2, 0, Expr(Rational(1, 3)), 5};
  EXPECT_TRUE(same(coords(z, combine(w, z.basis)), w));
  EXPECT_FALSE(coordinates(V("x*dx"), z.basis).has_value());
}

TEST(Liealg, Tables) {
  LieAlgebra z = zk();
  z.labels = {"v1", "v2", "v3", "v4", "v5"};
  std::string adj = adjoint_table(z, param("eps"));
  EXPECT_NE(adj.find("exp(3*eps)*v1"), std::string::npos) << adj;
  std::string com = commutator_table(z);
  EXPECT_NE(com.find("-2*v4"), std::string::npos) << com;
  EXPECT_EQ(format_combo({1, 0, Expr(-1)}, {"v1", "v2", "v3"}), "v1 - v3");
}
