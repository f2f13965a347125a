#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "liesym/jet.hpp"
#include "liesym/parse.hpp"
#include "liesym/properties.hpp"

using namespace liesym;

namespace {
ParseContext ctx() {
  ParseContext c;
  c.params = {"a", "g", "h"};
  return c;
}
Expr P(const std::string& s) { return parse(s, ctx()); }
VectorField V(const std::string& s) { return parse_field(s, ctx()); }

Atom jet_or_dep(const MultiIndex& a) {
  return a == MultiIndex{0, 0, 0} ? dep_atom() : jet_atom(a[0], a[1], a[2]);
}
}  // namespace

TEST(Jetcalc, TotalDerivativeExamples) {
  EXPECT_EQ(total_derivative(P("u^2"), 1), P("2*u*u_x"));
  EXPECT_EQ(total_derivative(P("x*u_y"), 1), P("u_y + x*u_xy"));
  EXPECT_EQ(total_derivative(P("t"), 0), Expr(1));
  EXPECT_EQ(total_derivative(P("u"), MultiIndex{0, 1, 2}), P("u_xyy"));
}

TEST(Jetcalc, CharacteristicExamples) {
  EXPECT_EQ(characteristic(V("dt")), P("-u_t"));
  EXPECT_EQ(characteristic(V("h*t*dx + du")), P("1 - h*t*u_x"));
  EXPECT_EQ(characteristic(V("3*t*dt + x*dx + y*dy - 2*u*du")), P("-2*u - 3*t*u_t - x*u_x - y*u_y"));
}

TEST(Jetcalc, GalileanProlongation) {
  ProlongedField p = prolong(V("t*dx + du"), 3);
  EXPECT_EQ(normal_form(p.coeffs.at({1, 0, 0})), P("-u_x"));
  EXPECT_TRUE(normal_form(p.coeffs.at({0, 1, 0})).is_zero());
  EXPECT_TRUE(normal_form(p.coeffs.at({0, 3, 0})).is_zero());
}

TEST(Jetcalc, ScalingProlongation) {
  ProlongedField p = prolong(V("3*t*dt + x*dx + y*dy - 2*u*du"), 3);
  EXPECT_EQ(normal_form(p.coeffs.at({0, 1, 0})), P("-3*u_x"));
  EXPECT_EQ(normal_form(p.coeffs.at({1, 0, 0})), P("-5*u_t"));
  EXPECT_EQ(normal_form(p.coeffs.at({0, 1, 2})), P("-5*u_xyy"));
}

TEST(Jetcalc, MultiIndexOrder) {
  auto m = multi_indices(2);
  ASSERT_EQ(m.size(), 9u);
  for (const auto& a : m) EXPECT_GE(a[0] + a[1] + a[2], 1);
  EXPECT_LE(m.front()[0] + m.front()[1] + m.front()[2], m.back()[0] + m.back()[1] + m.back()[2]);
}

// Raising any index of eta^alpha by one agrees with D_i eta^alpha - sum_j D_i(xi^j) u_{alpha+j}.
TEST(Jetcalc, ProlongationRecursion) {
  std::mt19937_64 g(5);
  for (int k = 0; k < 20; ++k) {
    VectorField v = random_point_field(g);
    ProlongedField p = prolong(v, 3);
    for (const auto& a : multi_indices(2))
      for (int i = 0; i < 3; ++i) {
        MultiIndex b = a;
        ++b[i];
        Expr rec = total_derivative(p.coeffs.at(a), i);
        for (int j = 0; j < 3; ++j) {
          MultiIndex c = a;
          ++c[j];
          rec -= total_derivative(v[j], i) * Expr::atom(jet_or_dep(c));
        }
        EXPECT_TRUE(normal_form(rec - p.coeffs.at(b)).is_zero()) << to_string(v);
      }
  }
}

// apply_prolonged against a central difference of L along the prolonged coefficients.
TEST(Jetcalc, ApplyProlongedMatchesDirectionalDerivative) {
  std::mt19937_64 g(9);
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  const int order = 3;
  for (int k = 0; k < 20; ++k) {
    VectorField v = random_point_field(g);
    Expr L = P("u_t + u_xxx + g*u_xyy + h*u^2*u_x") + random_expr(g);
    ProlongedField p = prolong(v, order);

    NumericPoint z{{param_atom("g"), d(g)}, {param_atom("h"), d(g)}, {param_atom("a"), d(g)}};
    for (int i = 0; i < 3; ++i) z[base_atom(i)] = d(g);
    z[dep_atom()] = 1 + d(g) / 3;  // sqrt(u) may appear
    for (const auto& a : multi_indices(order + 1)) z[jet_atom(a[0], a[1], a[2])] = d(g);

    std::map<Atom, double> dir;
    for (int i = 0; i < 3; ++i) dir[base_atom(i)] = eval_numeric(v[i], z);
    dir[dep_atom()] = eval_numeric(v.eta, z);
    for (const auto& [a, c] : p.coeffs) dir[jet_atom(a[0], a[1], a[2])] = eval_numeric(c, z);

    const double h = 1e-5;
    NumericPoint zp = z, zm = z;
    for (const auto& [a, c] : dir) {
      zp[a] += h * c;
      zm[a] -= h * c;
    }
    double fd = (eval_numeric(L, zp) - eval_numeric(L, zm)) / (2 * h);
    double exact = eval_numeric(apply_prolonged(v, order, L), z);
    EXPECT_NEAR(fd, exact, 1e-5 * (1 + std::abs(exact))) << to_string(v) << " on " << to_string(L);
  }
}

TEST(Jetcalc, JetOrder) {
  EXPECT_EQ(jet_order(P("u_t + u_xxx + g*u_xyy")), 3);
  EXPECT_EQ(jet_order(P("u*x")), 0);
}

TEST(Jetcalc, FieldRoundTrip) {
  VectorField v = V("3*t*dt + x*dx + y*dy - 2*u*du");
  EXPECT_EQ(parse_field(to_string(v), ctx()), v);
  EXPECT_TRUE(is_point_field(v));
  EXPECT_EQ(apply_field(v, P("x*u")), P("x*u - 2*x*u"));
}
