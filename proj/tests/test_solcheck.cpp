#include <gtest/gtest.h>

#include <set>

#include "liesym/catalog.hpp"
#include "liesym/families.hpp"
#include "liesym/parse.hpp"
#include "liesym/solcheck.hpp"
#include "liesym/verify.hpp"

using namespace liesym;

namespace {
Expr P(const std::string& s) {
  ParseContext c;
  c.params = {"g", "h"};
  return parse(s, c);
}
Equation zk11() { return family_equation("zk-gh", {{"g", 1}, {"h", 1}}); }

std::map<std::string, std::string> verdicts() {
  static const auto v = [] {
    std::map<std::string, std::string> m;
    for (const auto& l : verify_solutions(default_catalog(), VerifyOptions{}).lines) m[l.id] = l.verdict;
    return m;
  }();
  return v;
}
}  // namespace

TEST(Solcheck, Examples) {
  EXPECT_EQ(check_solution(zk11(), P("3*sech(1/2*(x - t))^2")).kind, SolResult::Kind::SymbolicZero);
  EXPECT_EQ(check_solution(zk11(), P("4 - 12*tanh(x + 4*t)^2")).kind, SolResult::Kind::SymbolicZero);
  EXPECT_TRUE(check_solution(family_equation("zk-gh"), Expr(7)).pass());
  SolResult r = check_solution(family_equation("zk-gh"), P("x"));
  EXPECT_EQ(r.kind, SolResult::Kind::SymbolicNonzero);
  EXPECT_EQ(r.residual, P("h*x"));
}

TEST(Solcheck, SubstitutionUsesDerivatives) {
  Expr s = substitute_solution(family_equation("zk-gh"), P("x^3 + t*y^2"));
  EXPECT_EQ(normal_form(s), normal_form(P("y^2 + 6 + 3*h*x^2*(x^3 + t*y^2)")));
}

// Symbolic zero and the grid agree.
TEST(Solcheck, SymbolicZeroIsNumericallySmall) {
  Expr sol = P("4 - 12*tanh(x + 4*t)^2");
  EXPECT_LT(numeric_residual(zk11(), sol, GridOptions{}), 1e-10);
  Expr wrong = P("4 - 12*tanh(x + 3*t)^2");
  EXPECT_GT(numeric_residual(zk11(), wrong, GridOptions{}), 1e-3);
  EXPECT_FALSE(check_solution(zk11(), wrong).pass());
}

TEST(Solcheck, GuardsCoverPoles) {
  auto g = singular_guards(P("1/(x - 1) + ln(y)"));
  EXPECT_GE(g.size(), 2u);
}

TEST(Solcheck, Constraints) {
  Constraint c = parse_constraint("c1/B < 0");
  EXPECT_EQ(c.rel, Relation::Negative);
  EXPECT_EQ(c.expr, "c1/B");
  EXPECT_EQ(parse_constraint("a != 0").rel, Relation::NonZero);
  EXPECT_EQ(parse_constraint("6*L/(h*c2) > 0").rel, Relation::Positive);
}

TEST(Solcheck, InstantiateRespectsConstraints) {
  SolutionSpec s;
  s.lhs = "u_t + u_xxx + g*u_xyy + h*u*u_x";
  s.constants = {{"g", {1, -1}}, {"h", {1, -1}}, {"c", default_lattice()}};
  s.u = "c";
  s.constraints = {parse_constraint("c*h > 0")};
  auto insts = instantiate(s, 3);
  ASSERT_EQ(insts.size(), 3u);
  for (const auto& i : insts) EXPECT_GT(i.witness.at("c") * i.witness.at("h"), 0);
  s.constraints.push_back(parse_constraint("c*c < 0"));
  EXPECT_THROW(instantiate(s, 1), std::runtime_error);
}

// Renaming a constant consistently does not change the outcome.
TEST(Solcheck, RenamingInvariance) {
  auto run = [](const std::string& k) {
    SolutionSpec s;
    s.lhs = "u_t + u_xxx + g*u_xyy + h*u*u_x";
    s.constants = {{"g", {1}}, {"h", {1}}, {k, default_lattice()}};
    s.defines = {{"A", "3*" + k}};
    s.u = "A*sech(1/2*sqrt(" + k + ")*(x - " + k + "*t))^2";
    s.constraints = {parse_constraint(k + " > 0")};
    auto i = instantiate(s, 1).at(0);
    return std::make_pair(i.witness.at(k), check_solution(i.eq, i.sol).kind);
  };
  EXPECT_EQ(run("c1"), run("k1"));
}

TEST(Solcheck, FlowOfTranslation) {
  Expr moved = flow_solution(parse_field("dx"), Rational(1, 2), P("x^2"));
  EXPECT_EQ(normal_form(moved), normal_form(P("(x - 1/2)^2")));
  Expr scaled = flow_solution(parse_field("du"), Rational(1, 2), P("x"));
  EXPECT_EQ(normal_form(scaled), normal_form(P("x + 1/2")));
}

TEST(Solcheck, FlowPreservesSolutions) {
  Expr sol = P("3*sech(1/2*(x - t))^2");
  for (const char* q : {"dt", "dx", "dy", "t*dx + du", "3*t*dt + x*dx + y*dy - 2*u*du"})
    EXPECT_TRUE(check_solution(zk11(), flow_solution(parse_field(q), Rational(1, 2), sol)).pass()) << q;
}

TEST(Solcheck, CatalogSolutions) {
  auto v = verdicts();
  EXPECT_EQ(v.size(), 44u);
  int verified = 0;
  for (const auto& [id, verdict] : v) {
    EXPECT_NE(verdict, "FAIL") << id;
    if (verdict == "PASS" || verdict == "CORRECTED") ++verified;
  }
  EXPECT_GE(verified, 20);
  EXPECT_EQ(v.at("solution.zk.1.1.tanh2"), "PASS");
  EXPECT_EQ(v.at("solution.mzk.2.6.sn"), "SKIP");
  EXPECT_EQ(v.at("solution.mzk.3.3.algebraic"), "CORRECTED");
  EXPECT_EQ(v.at("solution.zk.1.3.sech"), "CORRECTED");
}
